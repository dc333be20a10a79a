/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/program.hpp"

#include <map>
#include <optional>

namespace linterm {

/// A path with no transitions was passed where a live one is required;
/// callers are expected to drop empty paths first.
struct EmptyPath : std::runtime_error {
    explicit EmptyPath(const std::string &w) : std::runtime_error(w) {}
};

/// Linear ranking function: one affine function per location (loops use a
/// single entry at location 0).
struct Lrf {
    std::map<int, LinExpr> funcs;

    const LinExpr &at(int loc) const {
        auto it = funcs.find(loc);
        if (it == funcs.end()) throw ArityError("Lrf: missing location");
        return it->second;
    }
};

struct VerifyReport {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(const std::string &msg) {
        ok = false;
        failures.push_back(msg);
    }
};

/// Complete synthesis over Q/R. Nothing means no LRF exists.
/// Throws EmptyPath when a path has no transitions.
std::optional<LinExpr> synth_lrf(const MlcLoop &loop);

/// Integer case: LRF of the integer hulls, complete when the hulls fit the
/// enumeration cap (ResourceLimit otherwise).
std::optional<LinExpr> synth_lrf_int(const MlcLoop &loop);

/// Per-location functions decreasing across every edge. Invariants are used
/// as provided on the edges (apply_invariants beforehand if desired).
std::optional<Lrf> synth_lrf_cfg(const Cfg &cfg);

/// Checks conditions rho >= 0 and rho(x) - rho(x') >= bound per path/edge by
/// Farkas entailment; over integer hulls when the domain is Int and the
/// rational check fails.
VerifyReport verify_lrf(const MlcLoop &loop, const LinExpr &rho, const Rat &bound = Rat(1));
VerifyReport verify_lrf_cfg(const Cfg &cfg, const Lrf &w, const Rat &bound = Rat(1));

} // namespace linterm
