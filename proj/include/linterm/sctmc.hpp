/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/program.hpp"

#include <optional>

namespace linterm {

/// Monotonicity-constraint closure gave up before the depth cap proved or
/// refuted well-foundedness of some element.
struct DepthCapReached : std::runtime_error {
    explicit DepthCapReached(const std::string &w) : std::runtime_error(w) {}
};

/// Weighted size-change graph: arc (src -> dst') with weight delta encodes
/// the bound constraint x'_dst <= x_src + delta. At most one arc per pair
/// (the tightest bound wins).
struct SizeChangeGraph {
    int n = 0;
    std::vector<std::vector<std::optional<long>>> w; // [src][dst] -> delta

    explicit SizeChangeGraph(int n_ = 0)
        : n(n_), w(n_, std::vector<std::optional<long>>(n_)) {}

    void arc(int src, int dst, long delta) {
        if (!w[src][dst] || delta < *w[src][dst]) w[src][dst] = delta;
    }

    bool sct_flavored() const {
        for (const auto &row : w)
            for (const auto &d : row)
                if (d && (*d < -1 || *d > 0)) return false;
        return true;
    }

    int fan_in(int dst) const {
        int c = 0;
        for (int s = 0; s < n; ++s)
            if (w[s][dst]) c++;
        return c;
    }

    std::string key() const;
    Poly to_poly(bool with_nonneg) const; // over 2n, optionally with x >= 0
};

/// Conversion from a transition polyhedron. Rows x_i >= 0 are accepted and
/// dropped (the naturals are implicit); everything else must be a bound
/// constraint x'_d <= x_s + delta. Throws FlavorError otherwise, and when
/// `sct_only` is set and some delta is outside {0, -1}.
SizeChangeGraph graph_of(const TransRel &q, bool sct_only);

/// Single-relation well-foundedness over the naturals: negative-cycle
/// detection on the circular graph. Well-founded graphs carry the subset-sum
/// ranking function; the others carry a stuttering state p with (p,p) in Q.
struct DsctDecision {
    bool wf = false;
    std::vector<int> lrf_vars; // S with rho = sum of x_i over S
    RatVec point;              // n entries
};
DsctDecision dsct_wellfounded(const SizeChangeGraph &g);

/// SCT composition: strict arc when some connecting pair has a strict
/// member. Throws FlavorError on general deltas.
SizeChangeGraph sct_compose(const SizeChangeGraph &a, const SizeChangeGraph &b);

/// General min-plus composition with saturation: weights below `floor` stick
/// at floor, weights above `ceil` drop (both sound weakenings).
SizeChangeGraph dsct_compose(const SizeChangeGraph &a, const SizeChangeGraph &b, long floor_w,
                             long ceil_w);

/// Monotonicity constraints: order constraints u >= v (+1 when strict) over
/// the 2n variables, kept entailment-complete and satisfiable.
struct McRelation {
    int n = 0;
    // longest_path[u][v] in {nullopt, 0, 1}: v >= u (+1 when 1).
    std::vector<std::vector<std::optional<int>>> ge;

    explicit McRelation(int n_ = 0)
        : n(n_), ge(2 * n_, std::vector<std::optional<int>>(2 * n_)) {}

    std::string key() const;
    Poly to_poly() const; // over 2n
};

/// Validates and canonicalizes an MC edge; nothing when unsatisfiable.
/// Throws FlavorError on rows outside the order-constraint language.
std::optional<McRelation> mc_relation_of(const TransRel &q);

/// Composition via the shared mid-space; emits exactly the entailed order
/// constraints of the relational composition. Nothing when unsatisfiable.
std::optional<McRelation> mc_compose(const McRelation &a, const McRelation &b);

enum class ClosureFlavor { SCT, DSCT, MC };

struct ClosureElement {
    int src = 0, dst = 0;
    SizeChangeGraph graph; // SCT/DSCT
    McRelation mc;         // MC
    bool wf = false;
    std::vector<LinExpr> witness; // subset-sum LRF, or multiphase components
    RatVec bad_point;             // stuttering state when not well-founded
};

enum class ClosureStatus {
    AllWellFounded,
    NotWellFounded, // definitive non-termination for SCT and MC
    DepthCapped     // MC only: some element undecided within the cap
};

struct ClosureResult {
    ClosureFlavor flavor = ClosureFlavor::SCT;
    ClosureStatus status = ClosureStatus::AllWellFounded;
    std::vector<ClosureElement> elements;
    int bad_element = -1;
};

struct ClosureOptions {
    int mc_depth_cap = 0;        // 0: default 2n+1
    bool mc_complete_cap = false; // use 5^(2n); accepted for n <= 2
    long dsct_floor = -64;
    long dsct_ceil = 64;
};

/// Worklist transitive closure of the graph's edges under the flavor's
/// composition, with well-foundedness checks on every self-loop element.
ClosureResult closure(const Cfg &cfg, ClosureFlavor flavor, const ClosureOptions &opts = {});

/// The disjunctive certificate: one ranked relation per distinct function.
std::vector<LinExpr> extract_lrf_dti(const ClosureResult &res);

} // namespace linterm
