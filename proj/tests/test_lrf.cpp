#include <doctest.h>

#include "util.hpp"
#include "linterm/lrf.hpp"

#include <fstream>
#include <sstream>

using namespace linterm;
using namespace tt;

namespace {

MlcLoop load_loop(const std::string &name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::get<MlcLoop>(parse_program(ss.str()));
}

Cfg load_cfg(const std::string &name) {
    std::ifstream in(std::string(CORPUS_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return std::get<Cfg>(parse_program(ss.str()));
}

} // namespace

TEST_CASE("lrf: the subtraction loop has a ranking function and x1 works") {
    MlcLoop m = load_loop("lrf_loop1.lt");
    auto rho = synth_lrf(m);
    REQUIRE(rho.has_value());
    CHECK(verify_lrf(m, *rho).ok);

    LinExpr x1 = LinExpr::var(0);
    CHECK(verify_lrf(m, x1).ok);

    LinExpr x2 = LinExpr::var(1);
    VerifyReport rep = verify_lrf(m, x2);
    CHECK(!rep.ok);
    REQUIRE(!rep.failures.empty());
    CHECK(rep.failures[0].find("decrease") != std::string::npos);
}

TEST_CASE("lrf: the unmodified two-path loop has none; the modified one does") {
    CHECK(!synth_lrf(load_loop("mlc_no_lrf.lt")).has_value());

    MlcLoop mod = load_loop("mlc_modified.lt");
    auto rho = synth_lrf(mod);
    REQUIRE(rho.has_value());
    CHECK(verify_lrf(mod, *rho).ok);
    LinExpr sum = LinExpr::var(0) + LinExpr::var(1);
    CHECK(verify_lrf(mod, sum).ok);
}

TEST_CASE("lrf: integer loop ranks only through its integer hull") {
    MlcLoop m = load_loop("bg_loop1.lt");
    // As a rational loop there is no LRF.
    MlcLoop rat = m;
    rat.domain = Domain::Rat;
    CHECK(!synth_lrf(rat).has_value());
    // Over the integers x1 + x2 ranks it.
    auto rho = synth_lrf_int(m);
    REQUIRE(rho.has_value());
    CHECK(verify_lrf(m, *rho).ok);
    LinExpr sum = LinExpr::var(0) + LinExpr::var(1);
    CHECK(verify_lrf(m, sum).ok);
    CHECK(!verify_lrf(rat, sum).ok);
}

TEST_CASE("lrf: three-path integer loop needs the hull of its third path") {
    MlcLoop m = load_loop("mlc_int3.lt");
    MlcLoop rat = m;
    rat.domain = Domain::Rat;
    CHECK(!synth_lrf(rat).has_value());
    auto rho = synth_lrf_int(m);
    REQUIRE(rho.has_value());
    CHECK(verify_lrf(m, *rho).ok);
}

TEST_CASE("lrf: already-integral loop answers match") {
    MlcLoop m = load_loop("mlc_modified.lt");
    m.domain = Domain::Int;
    auto a = synth_lrf(m);
    auto b = synth_lrf_int(m);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(verify_lrf(m, *a).ok);
    CHECK(verify_lrf(m, *b).ok);
}

TEST_CASE("lrf: per-location functions on the first loop of the two-loop program") {
    Cfg c = apply_invariants(load_cfg("fig41.lt"));
    SccSplit split = scc_decompose(c);
    int checked = 0;
    for (const auto &scc : split.sccs) {
        if (scc.edges.empty()) continue;
        auto w = synth_lrf_cfg(scc);
        REQUIRE_MESSAGE(w.has_value(), "component should admit per-location functions");
        CHECK(verify_lrf_cfg(scc, *w).ok);
        checked++;
        if (scc.locations.size() == 1) {
            // The second loop ranks by y alone.
            Lrf by_y;
            by_y.funcs[0] = LinExpr::var(1);
            CHECK(verify_lrf_cfg(scc, by_y).ok);
        }
    }
    CHECK(checked == 2);
}

TEST_CASE("lrf: single-edge reduction agrees with the loop solver") {
    MlcLoop m = load_loop("lrf_loop1.lt");
    Cfg c = as_cfg(m);
    auto w = synth_lrf_cfg(c);
    REQUIRE(w.has_value());
    CHECK(verify_lrf_cfg(c, *w).ok);
    CHECK(verify_lrf(m, w->at(0)).ok);
}

TEST_CASE("lrf: scaling a witness scales its decrease bound") {
    MlcLoop m = load_loop("lrf_loop1.lt");
    auto rho = synth_lrf(m);
    REQUIRE(rho.has_value());
    LinExpr scaled = *rho;
    scaled *= Rat(3, 2);
    CHECK(verify_lrf(m, scaled, Rat(3, 2)).ok);
}

TEST_CASE("lrf: empty paths are rejected") {
    MlcLoop m = load_loop("lrf_loop1.lt");
    m.paths.emplace_back(m.n, Poly::empty(2 * m.n));
    CHECK_THROWS_AS(synth_lrf(m), EmptyPath);
}
