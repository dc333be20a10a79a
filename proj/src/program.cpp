/*
 * Copyright (c) 2026, the linterm authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "linterm/program.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace linterm {

std::string domain_name(Domain d) {
    switch (d) {
    case Domain::Real: return "real";
    case Domain::Rat: return "rat";
    case Domain::Int: return "int";
    }
    return "?";
}

static std::vector<std::string> primed_names(const std::vector<std::string> &vars) {
    std::vector<std::string> out = vars;
    for (const auto &v : vars) out.push_back(v + "'");
    return out;
}

std::vector<std::string> MlcLoop::names2n() const { return primed_names(vars); }
std::vector<std::string> Cfg::names2n() const { return primed_names(vars); }

int Cfg::loc_index(const std::string &name) const {
    for (size_t i = 0; i < locations.size(); ++i)
        if (locations[i] == name) return static_cast<int>(i);
    return -1;
}

int program_dim(const Program &p) {
    return std::visit([](const auto &m) { return m.n; }, p);
}
Domain program_domain(const Program &p) {
    return std::visit([](const auto &m) { return m.domain; }, p);
}
const std::vector<std::string> &program_vars(const Program &p) {
    return std::visit([](const auto &m) -> const std::vector<std::string> & { return m.vars; }, p);
}

MlcLoop as_mlc(const Cfg &c) {
    if (c.locations.size() != 1)
        throw ArityError("as_mlc: control-flow graph has more than one location");
    MlcLoop m;
    m.n = c.n;
    m.domain = c.domain;
    m.vars = c.vars;
    m.init_states = c.init_states;
    for (const auto &e : c.edges) m.paths.push_back(e.rel);
    return m;
}

Cfg as_cfg(const MlcLoop &m) {
    Cfg c;
    c.n = m.n;
    c.domain = m.domain;
    c.vars = m.vars;
    c.locations = {"l0"};
    c.initial = 0;
    c.init_states = m.init_states;
    for (const auto &p : m.paths) c.edges.push_back({0, 0, p});
    return c;
}

SccSplit scc_decompose(const Cfg &c) {
    int nloc = static_cast<int>(c.locations.size());
    // Tarjan's algorithm.
    std::vector<int> index(nloc, -1), low(nloc, 0), comp(nloc, -1);
    std::vector<bool> onstack(nloc, false);
    std::vector<int> stack;
    int next_index = 0, ncomp = 0;
    std::vector<std::vector<int>> out_edges(nloc);
    for (size_t i = 0; i < c.edges.size(); ++i) out_edges[c.edges[i].src].push_back(static_cast<int>(i));

    std::function<void(int)> strongconnect = [&](int v) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        onstack[v] = true;
        for (int ei : out_edges[v]) {
            int w = c.edges[ei].dst;
            if (index[w] < 0) {
                strongconnect(w);
                low[v] = std::min(low[v], low[w]);
            } else if (onstack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            for (;;) {
                int w = stack.back();
                stack.pop_back();
                onstack[w] = false;
                comp[w] = ncomp;
                if (w == v) break;
            }
            ncomp++;
        }
    };
    for (int v = 0; v < nloc; ++v)
        if (index[v] < 0) strongconnect(v);

    SccSplit out;
    out.orig.assign(ncomp, {});
    for (int v = 0; v < nloc; ++v) out.orig[comp[v]].push_back(v);
    std::vector<std::vector<int>> comp_edges(ncomp);
    for (size_t i = 0; i < c.edges.size(); ++i) {
        const auto &e = c.edges[i];
        if (comp[e.src] == comp[e.dst])
            comp_edges[comp[e.src]].push_back(static_cast<int>(i));
        else
            out.bridges.push_back(e);
    }
    for (int k = 0; k < ncomp; ++k) {
        Cfg sub;
        sub.n = c.n;
        sub.domain = c.domain;
        sub.vars = c.vars;
        std::vector<int> back(nloc, -1);
        for (size_t i = 0; i < out.orig[k].size(); ++i) {
            back[out.orig[k][i]] = static_cast<int>(i);
            sub.locations.push_back(c.locations[out.orig[k][i]]);
            auto it = c.invariants.find(out.orig[k][i]);
            if (it != c.invariants.end()) sub.invariants[static_cast<int>(i)] = it->second;
        }
        sub.initial = 0;
        for (int ei : comp_edges[k]) {
            const auto &e = c.edges[ei];
            sub.edges.push_back({back[e.src], back[e.dst], e.rel});
        }
        out.sccs.push_back(std::move(sub));
    }
    return out;
}

Cfg apply_invariants(const Cfg &c) {
    Cfg out = c;
    for (auto &e : out.edges) {
        auto it = c.invariants.find(e.src);
        if (it == c.invariants.end()) continue;
        Poly strengthened = e.rel.rel;
        std::vector<VarId> idmap(c.n);
        for (int i = 0; i < c.n; ++i) idmap[i] = i;
        strengthened.add_all(rename(it->second, idmap, 2 * c.n));
        e.rel = TransRel(c.n, std::move(strengthened));
    }
    return out;
}

InvariantReport check_invariants(const Cfg &c) {
    InvariantReport rep;
    auto inv_of = [&](int loc) -> Poly {
        auto it = c.invariants.find(loc);
        return it == c.invariants.end() ? Poly::whole(c.n) : it->second;
    };
    if (c.init_states) {
        Poly init = *c.init_states;
        Poly target = inv_of(c.initial);
        if (!is_empty(init)) {
            for (size_t r = 0; r < target.rows().size(); ++r) {
                if (!entails_unchecked(init, target.rows()[r])) {
                    rep.ok = false;
                    rep.violations.push_back("init does not entail invariant row " +
                                             std::to_string(r) + " at " +
                                             c.locations[c.initial]);
                }
            }
        }
    }
    for (size_t ei = 0; ei < c.edges.size(); ++ei) {
        const auto &e = c.edges[ei];
        Poly pre = e.rel.rel;
        std::vector<VarId> idmap(c.n);
        for (int i = 0; i < c.n; ++i) idmap[i] = i;
        pre.add_all(rename(inv_of(e.src), idmap, 2 * c.n));
        if (is_empty(pre)) continue; // unreachable under the invariant
        Poly target = inv_of(e.dst);
        std::vector<VarId> primed(c.n);
        for (int i = 0; i < c.n; ++i) primed[i] = c.n + i;
        Poly target_primed = rename(target, primed, 2 * c.n);
        for (size_t r = 0; r < target_primed.rows().size(); ++r) {
            if (!entails_unchecked(pre, target_primed.rows()[r])) {
                rep.ok = false;
                rep.violations.push_back("edge " + std::to_string(ei) + " (" +
                                         c.locations[e.src] + " -> " + c.locations[e.dst] +
                                         ") does not preserve invariant row " +
                                         std::to_string(r));
            }
        }
    }
    return rep;
}

std::vector<Lasso> enumerate_lassos(const Cfg &c, const LassoBudgets &budgets) {
    std::vector<std::vector<int>> out_edges(c.locations.size());
    for (size_t i = 0; i < c.edges.size(); ++i) out_edges[c.edges[i].src].push_back(static_cast<int>(i));

    // All closed walks at `head` up to the cycle budget, composed.
    auto cycles_at = [&](int head) {
        std::vector<std::pair<TransRel, std::vector<int>>> found;
        std::function<void(int, const std::vector<int> &)> walk = [&](int loc,
                                                                      const std::vector<int> &path) {
            if (!path.empty() && loc == head) {
                TransRel rel = c.edges[path[0]].rel;
                for (size_t i = 1; i < path.size(); ++i) rel = compose(rel, c.edges[path[i]].rel);
                found.emplace_back(std::move(rel), path);
                // closed; extending past the head is covered by stems that
                // land here again
                return;
            }
            if (static_cast<int>(path.size()) >= budgets.max_cycle) return;
            for (int ei : out_edges[loc]) {
                auto next = path;
                next.push_back(ei);
                walk(c.edges[ei].dst, next);
            }
        };
        walk(head, {});
        return found;
    };

    std::vector<Lasso> lassos;
    // Stems in BFS order (shortest first).
    struct StemState {
        int loc;
        TransRel rel;
        std::vector<int> edges;
    };
    std::deque<StemState> queue;
    queue.push_back({c.initial, identity_rel(c.n), {}});
    std::vector<std::pair<int, std::vector<std::pair<TransRel, std::vector<int>>>>> cycle_cache;
    auto cycles_of = [&](int head) -> const std::vector<std::pair<TransRel, std::vector<int>>> & {
        for (auto &e : cycle_cache)
            if (e.first == head) return e.second;
        cycle_cache.emplace_back(head, cycles_at(head));
        return cycle_cache.back().second;
    };
    while (!queue.empty() && static_cast<int>(lassos.size()) < budgets.max_lassos) {
        StemState st = std::move(queue.front());
        queue.pop_front();
        if (is_empty(st.rel.rel)) continue; // unreachable stem
        for (const auto &[cycle_rel, cycle_path] : cycles_of(st.loc)) {
            TransRel powered = cycle_rel;
            for (int u = 1; u <= budgets.max_unroll &&
                            static_cast<int>(lassos.size()) < budgets.max_lassos;
                 ++u) {
                if (u > 1) powered = compose(powered, cycle_rel);
                if (is_empty(powered.rel)) break;
                Lasso l;
                l.head = st.loc;
                l.stem = st.rel;
                l.loop = powered;
                l.stem_edges = st.edges;
                l.cycle_edges = cycle_path;
                l.unroll = u;
                lassos.push_back(std::move(l));
            }
        }
        if (static_cast<int>(st.edges.size()) < budgets.max_stem) {
            for (int ei : out_edges[st.loc]) {
                StemState next;
                next.loc = c.edges[ei].dst;
                next.rel = compose(st.rel, c.edges[ei].rel);
                next.edges = st.edges;
                next.edges.push_back(ei);
                queue.push_back(std::move(next));
            }
        }
    }
    return lassos;
}

} // namespace linterm
