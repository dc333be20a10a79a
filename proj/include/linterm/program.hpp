/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#pragma once

#include "linterm/transition.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace linterm {

enum class Domain { Real, Rat, Int };

std::string domain_name(Domain d);

/// Multipath linear-constraint loop: a single implicit location with k
/// transition polyhedra.
struct MlcLoop {
    int n = 0;
    Domain domain = Domain::Rat;
    std::vector<std::string> vars;
    std::vector<TransRel> paths;
    std::optional<Poly> init_states; // dim n

    /// Variable names for a 2n-space: x then x'.
    std::vector<std::string> names2n() const;
};

struct Cfg {
    int n = 0;
    Domain domain = Domain::Rat;
    std::vector<std::string> vars;
    std::vector<std::string> locations;
    int initial = 0;

    struct Edge {
        int src = 0, dst = 0;
        TransRel rel;
    };
    std::vector<Edge> edges;

    std::optional<Poly> init_states;
    std::map<int, Poly> invariants;

    int loc_index(const std::string &name) const;
    std::vector<std::string> names2n() const;
};

using Program = std::variant<MlcLoop, Cfg>;

/// Parses the textual program format. Throws SyntaxError / DomainError /
/// ArityError.
Program parse_program(const std::string &text);

/// Canonical re-serialization in the same format.
std::string print_program(const Program &p);

/// Stable JSON rendering of the parsed model.
std::string program_to_json(const Program &p);

/// n, domain, and variable names of either model.
int program_dim(const Program &p);
Domain program_domain(const Program &p);
const std::vector<std::string> &program_vars(const Program &p);

/// A single-location view of a CFG (requires exactly one location).
MlcLoop as_mlc(const Cfg &c);

/// Embeds an MLC loop as a one-location CFG.
Cfg as_cfg(const MlcLoop &m);

/// Strongly connected components, with edges between components listed
/// separately. Trivial SCCs (single location, no self edge) are reported
/// with no edges.
struct SccSplit {
    std::vector<Cfg> sccs;              // locations renumbered per component
    std::vector<Cfg::Edge> bridges;     // edges between different components
    std::vector<std::vector<int>> orig; // original location ids per component
};
SccSplit scc_decompose(const Cfg &c);

/// Conjoins each edge relation with the invariant of its source location.
Cfg apply_invariants(const Cfg &c);

/// Inductiveness check: init inside the initial invariant, and each edge
/// maps the source invariant into the target invariant.
struct InvariantReport {
    bool ok = true;
    std::vector<std::string> violations;
};
InvariantReport check_invariants(const Cfg &c);

/// One lasso: a stem composition from the initial location to `head`, and a
/// cyclic composition at `head`.
struct Lasso {
    int head = 0;
    TransRel stem; // identity when the stem is empty
    TransRel loop;
    std::vector<int> stem_edges;
    std::vector<int> cycle_edges;
    int unroll = 1;
};

struct LassoBudgets {
    int max_stem = 8;
    int max_cycle = 4;
    int max_unroll = 4;
    int max_lassos = 2048;
};

/// Enumerates lassos in order of increasing stem length. Stems are walks
/// from the initial location; cycles are closed walks at the stem endpoint,
/// optionally unrolled.
std::vector<Lasso> enumerate_lassos(const Cfg &c, const LassoBudgets &budgets);

} // namespace linterm
