/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/lrf.hpp"
#include "linterm/program.hpp"

#include <optional>
#include <variant>

namespace linterm {

/// Polyhedral recurrent set over the state variables. The closed kind keeps
/// every successor inside the set; the general kind only needs one.
struct RecurrentSet {
    Poly set; // dim n
    bool closed = true;
};

/// Geometric argument: x0 plus rays y_1..y_k with growth rates lambda and
/// carry-over rates mu generate an explicit infinite run.
struct Gnta {
    RatVec x0;
    std::vector<RatVec> ys;
    RatVec lambdas; // k entries, >= 0
    RatVec mus;     // k-1 entries, >= 0
};

/// A state with (x, x) in Q. Over the integers an integer fixpoint is
/// required; branch-and-bound may throw ResourceLimit.
std::optional<RatVec> find_fixpoint(const TransRel &q, Domain dom);

struct RsetReport {
    bool ok = false;
    bool inconclusive = false; // general kind without an affine update view
    std::vector<std::string> notes;
};

/// Checks Def-style recurrence conditions by Farkas entailment. The closed
/// kind is fully decided; the general kind is decided for deterministic
/// affine updates and otherwise falls back to the (sufficient) closed
/// conditions, reporting inconclusive on failure. Integer mode additionally
/// demands an integer member and an integer-preserving affine update.
/// `within` restricts the nonemptiness witness (initial-state intersection).
RsetReport verify_recurrent_set(const TransRel &q, const RecurrentSet &g, Domain dom,
                                const std::optional<Poly> &within = std::nullopt);

struct RsetSynthOptions {
    int template_rows = 2;
    int backward_iters = 16;
    int alt_steps = 12;
    int restarts = 16;
    unsigned long seed = 1;
};

/// Guard-as-candidate shortcut, greatest-fixpoint backward refinement for
/// affine updates, then an alternating-LP template search. Nothing means the
/// budget ran out, never that no recurrent set exists. Every returned set
/// re-verifies.
std::optional<RecurrentSet> synth_recurrent_set(const TransRel &q, Domain dom,
                                                const RsetSynthOptions &opts = {},
                                                const std::optional<Poly> &within = std::nullopt);

/// Exact-arithmetic membership checks of the designated point and rays;
/// integer mode also checks integrality of every component.
VerifyReport verify_gnta(const TransRel &q, const Gnta &g, Domain dom);

struct GntaOptions {
    int k_max = 2;
    std::vector<Rat> rate_grid = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1), Rat(2), Rat(3)};
    long candidate_cap = 4096;
};

/// Fixes the growth rates from the grid plus the update matrix's rational
/// eigenvalues, then solves the residual linear system for the point and
/// rays. Nothing means the candidate budget ran out.
std::optional<Gnta> synth_gnta(const TransRel &q, Domain dom, const GntaOptions &opts = {},
                               const std::optional<Poly> &within = std::nullopt);

/// One non-termination witness for a single-path loop.
struct SlcNontermWitness {
    std::variant<RatVec, RecurrentSet, Gnta> value; // fixpoint | set | gnta
};

std::optional<SlcNontermWitness> nonterm_slc(const TransRel &q, Domain dom,
                                             const std::optional<Poly> &within = std::nullopt,
                                             const RsetSynthOptions &rset = {},
                                             const GntaOptions &gnta = {});

/// Lasso-based CFG non-termination: enumerate lassos, project each stem onto
/// the loop head, and run the single-path pipeline with the reached states
/// as the initial-state requirement.
struct LassoWitness {
    Lasso lasso;
    Poly reached; // stem image at the head, dim n
    SlcNontermWitness inner;
};

std::optional<LassoWitness> nonterm_cfg(const Cfg &cfg, const LassoBudgets &budgets = {},
                                        const RsetSynthOptions &rset = {},
                                        const GntaOptions &gnta = {});

} // namespace linterm
