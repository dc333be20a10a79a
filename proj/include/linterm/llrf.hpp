/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/lrf.hpp"

namespace linterm {

enum class LlrfFlavor { General, BG, ADFG, BMS, MPhase, Nested };

std::string flavor_name(LlrfFlavor f);

/// Lexicographic-linear ranking function. Loop witnesses use `components`;
/// CFG witnesses carry one function per location and component in `per_loc`.
struct Llrf {
    LlrfFlavor flavor = LlrfFlavor::General;
    std::vector<LinExpr> components;
    std::vector<std::map<int, LinExpr>> per_loc;

    int depth() const {
        return static_cast<int>(per_loc.empty() ? components.size() : per_loc.size());
    }
};

/// One greedy round: the quasi-ranking function and what it eliminated.
struct QlrfOutcome {
    LinExpr rho;
    std::vector<int> eliminated_paths; // indices ranked whole (ADFG/BMS)
    bool face_elimination = false;     // BG: ranked transitions cut as faces
};

/// BG quasi-LRF: nonnegative and non-increasing on the current transitions,
/// strictly decreasing somewhere; optimal via a relative-interior pick.
std::optional<QlrfOutcome> qlrf_bg(const std::vector<TransRel> &current);

/// ADFG quasi-LRF: nonnegative over the original loop, per-path decrease
/// delta_j in [0,1] with their sum maximized; delta_j = 1 paths are ranked.
std::optional<QlrfOutcome> qlrf_adfg(const std::vector<TransRel> &current,
                                     const std::vector<TransRel> &original);

/// BMS quasi-LRF: non-increasing everywhere, a full LRF for at least one
/// current path (first rankable in input order); those paths are ranked.
std::optional<QlrfOutcome> qlrf_bms(const std::vector<TransRel> &current);

/// Greedy synthesis (BG / ADFG / BMS). Integer domains run on per-path
/// integer hulls. Every returned witness passes verify_llrf for its flavor.
std::optional<Llrf> llrfsyn(const MlcLoop &loop, LlrfFlavor flavor);

/// Exhaustive BMS path-order search for a minimal-depth witness; loops with
/// more than `max_paths` paths fall back to the greedy order.
std::optional<Llrf> llrfsyn_bms_minimal(const MlcLoop &loop, int max_paths = 6);

/// Greedy synthesis over a CFG with per-location components; coefficients
/// are shared across locations with free constants unless full_templates.
std::optional<Llrf> llrfsyn_cfg(const Cfg &cfg, LlrfFlavor flavor, bool full_templates = false);

/// Nested ranking function of exactly depth d (one LP). Complete for
/// multiphase existence at depth d on single-path loops over Q/R; integer
/// loops go through hulls.
std::optional<Llrf> synth_nlrf(const MlcLoop &loop, int d);

/// Iterative deepening over synth_nlrf. Nothing means "no multiphase
/// witness up to max_depth", not global absence.
std::optional<Llrf> synth_mlrf(const MlcLoop &loop, int max_depth);

/// Flavor-specific verification by Farkas entailment over a disjunctive
/// case split on the ranking index.
VerifyReport verify_llrf(const MlcLoop &loop, const Llrf &w);
VerifyReport verify_llrf_cfg(const Cfg &cfg, const Llrf &w);

} // namespace linterm
