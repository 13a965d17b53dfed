#pragma once

// Independent checking: decomposition verification that shares no code with
// the ILP layer, an exhaustive minimum oracle for tiny instances, and a
// greedy widest-path baseline.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "decomposition.hpp"
#include "graph.hpp"

namespace flowdec {

namespace detail {

inline std::string arc_str(const flow_network& net, int e) {
    return "(" + std::to_string(net.edges[e].tail) + "," +
           std::to_string(net.edges[e].head) + ")";
}

inline bool nodes_distinct(std::vector<int> nodes) {
    std::sort(nodes.begin(), nodes.end());
    return std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end();
}

}  // namespace detail

// Check a claimed decomposition against the network: exact superposition,
// per-element structure for the requested variant, and (when k >= 0) the
// element count bound. Returns human-readable violations; empty means ok.
inline std::vector<std::string> verify_decomposition(const flow_network& net,
                                                     const decomposition& dec,
                                                     problem_variant variant,
                                                     int k = -1) {
    std::vector<std::string> bad;
    const int m = net.edge_count();
    std::vector<__int128> rebuilt(m, 0);

    for (size_t idx = 0; idx < dec.elements.size(); ++idx) {
        const auto& el = dec.elements[idx];
        const std::string who = "element " + std::to_string(idx);
        if (el.weight < 1) {
            bad.push_back(who + ": weight " + std::to_string(el.weight) +
                          " is not positive");
            continue;
        }
        if (el.node_sequence.size() < 2) {
            bad.push_back(who + ": fewer than two nodes");
            continue;
        }
        edge_selection derived;
        if (!multiplicity_from_sequence(net, el.node_sequence, derived)) {
            std::string pair;
            for (size_t i = 0; i + 1 < el.node_sequence.size(); ++i)
                if (net.find_edge(el.node_sequence[i], el.node_sequence[i + 1]) < 0) {
                    pair = " (" + std::to_string(el.node_sequence[i]) + "," +
                           std::to_string(el.node_sequence[i + 1]) + ")";
                    break;
                }
            bad.push_back(who + ": uses a non-edge" + pair);
            continue;
        }
        if (el.edge_multiplicity.multiplicity != derived.multiplicity)
            bad.push_back(who + ": edge multiplicities do not match the node sequence");

        const int first = el.node_sequence.front();
        const int last = el.node_sequence.back();
        const bool edge_simple =
            std::all_of(derived.multiplicity.begin(), derived.multiplicity.end(),
                        [](long long c) { return c <= 1; });

        // admissible kinds per variant
        bool kind_ok = true;
        switch (variant) {
            case problem_variant::paths_or_cycles:
                kind_ok = el.kind == element_kind::path || el.kind == element_kind::cycle;
                break;
            case problem_variant::trails_cg:
            case problem_variant::trails_reach:
                kind_ok = el.kind == element_kind::path || el.kind == element_kind::trail;
                break;
            case problem_variant::walks:
                kind_ok = el.kind != element_kind::cycle;
                break;
        }
        if (!kind_ok) {
            bad.push_back(who + ": " + element_kind_name(el.kind) +
                          " is not admissible for variant " + variant_name(variant));
        }

        // structural shape per claimed kind
        switch (el.kind) {
            case element_kind::cycle:
                if (first != last)
                    bad.push_back(who + ": cycle does not close");
                else if (!detail::nodes_distinct({el.node_sequence.begin(),
                                                  el.node_sequence.end() - 1}))
                    bad.push_back(who + ": cycle repeats a node");
                break;
            case element_kind::path:
                if (!detail::nodes_distinct(el.node_sequence))
                    bad.push_back(who + ": path repeats a node");
                [[fallthrough]];
            case element_kind::trail:
            case element_kind::walk:
                if (first != net.source || last != net.sink)
                    bad.push_back(who + ": does not run from source to sink");
                break;
        }
        // edge repetition is forbidden unless both the claimed kind and the
        // variant under test actually permit walks
        if ((el.kind != element_kind::walk ||
             variant != problem_variant::walks) &&
            !edge_simple) {
            int culprit = 0;
            for (int e = 0; e < m; ++e)
                if (derived.multiplicity[e] > 1) culprit = e;
            bad.push_back(who + ": edge repeated " + detail::arc_str(net, culprit));
        }

        for (int e = 0; e < m; ++e)
            rebuilt[e] += static_cast<__int128>(el.weight) * derived.multiplicity[e];
    }

    for (int e = 0; e < m; ++e) {
        if (rebuilt[e] != net.edges[e].flow) {
            long long got = static_cast<long long>(rebuilt[e]);
            bad.push_back("edge " + detail::arc_str(net, e) + ": " +
                          std::to_string(got) + " != " +
                          std::to_string(net.edges[e].flow));
        }
    }
    if (k >= 0 && dec.elements.size() > static_cast<size_t>(k))
        bad.push_back("decomposition has " + std::to_string(dec.elements.size()) +
                      " elements, allowed " + std::to_string(k));
    return bad;
}

// ----------------------------------------------------------------------------
// brute-force oracle

struct oracle_limits {
    int max_nodes = 6;
    int max_edges = 9;
    long long max_flow = 6;
};

struct oracle_result {
    enum class verdict { found, infeasible, too_large };
    verdict kind = verdict::too_large;
    int k_star = -1;

    bool found() const { return kind == verdict::found; }
};

namespace detail {

struct oracle_piece {
    std::vector<int> edge_ids;  // each once; pieces are simple
    std::uint32_t node_mask = 0;
};

inline void collect_paths(const flow_network& net,
                          const std::vector<std::vector<int>>& out, int cur,
                          std::uint32_t visited, std::vector<int>& edges_taken,
                          std::vector<oracle_piece>& into) {
    if (cur == net.sink) {
        into.push_back({edges_taken, visited});
        return;
    }
    for (int e : out[cur]) {
        int nxt = net.edges[e].head;
        if (visited & (1u << nxt)) continue;
        edges_taken.push_back(e);
        collect_paths(net, out, nxt, visited | (1u << nxt), edges_taken, into);
        edges_taken.pop_back();
    }
}

// simple cycles, each enumerated once anchored at its smallest node
inline void collect_cycles(const flow_network& net,
                           const std::vector<std::vector<int>>& out, int anchor,
                           int cur, std::uint32_t visited,
                           std::vector<int>& edges_taken,
                           std::vector<oracle_piece>& into) {
    for (int e : out[cur]) {
        int nxt = net.edges[e].head;
        if (nxt == anchor) {
            edges_taken.push_back(e);
            into.push_back({edges_taken, visited});
            edges_taken.pop_back();
            continue;
        }
        if (nxt < anchor || (visited & (1u << nxt))) continue;
        edges_taken.push_back(e);
        collect_cycles(net, out, anchor, nxt, visited | (1u << nxt), edges_taken,
                       into);
        edges_taken.pop_back();
    }
}

struct oracle_state {
    const flow_network* net = nullptr;
    problem_variant variant{};
    std::vector<oracle_piece> paths;
    std::vector<oracle_piece> cycles;
    int key_shift = 0;  // bits per residual entry; 0 disables the memo
    std::unordered_set<std::uint64_t> dead;  // (residual, remaining) failures

    std::uint64_t key(const std::vector<long long>& residual, int remaining) const {
        std::uint64_t k = static_cast<std::uint64_t>(remaining);
        for (long long r : residual)
            k = (k << key_shift) | static_cast<std::uint64_t>(r);
        return k;
    }

    bool solvable(std::vector<long long>& residual, int remaining);
    bool try_elements(std::vector<long long>& residual, int remaining, int pivot,
                      long long w);
    bool recurse_cycles(std::vector<long long>& residual, int remaining,
                        int pivot, long long w, const oracle_piece& base,
                        std::vector<long long>& mult, size_t from,
                        std::vector<std::pair<size_t, long long>>& chosen);
    bool commit(std::vector<long long>& residual, int remaining, long long w,
                const std::vector<long long>& mult);
};

inline bool piece_fits(const oracle_piece& p, const std::vector<long long>& mult,
                       const std::vector<long long>& residual, long long w,
                       long long copies = 1) {
    for (int e : p.edge_ids)
        if ((mult[e] + copies) * w > residual[e]) return false;
    return true;
}

// the chosen cycles must hang together with the base path through shared
// nodes, otherwise no single trail/walk traverses them
inline bool touches_base(const oracle_piece& base,
                         const std::vector<const oracle_piece*>& cycles) {
    std::uint32_t reached = base.node_mask;
    std::vector<bool> in(cycles.size(), false);
    bool grew = true;
    while (grew) {
        grew = false;
        for (size_t i = 0; i < cycles.size(); ++i) {
            if (in[i] || !(cycles[i]->node_mask & reached)) continue;
            in[i] = true;
            reached |= cycles[i]->node_mask;
            grew = true;
        }
    }
    return std::all_of(in.begin(), in.end(), [](bool b) { return b; });
}

inline bool oracle_state::commit(std::vector<long long>& residual, int remaining,
                                 long long w, const std::vector<long long>& mult) {
    for (size_t e = 0; e < mult.size(); ++e) residual[e] -= mult[e] * w;
    bool ok = solvable(residual, remaining - 1);
    for (size_t e = 0; e < mult.size(); ++e) residual[e] += mult[e] * w;
    return ok;
}

inline bool oracle_state::recurse_cycles(
    std::vector<long long>& residual, int remaining, int pivot, long long w,
    const oracle_piece& base, std::vector<long long>& mult, size_t from,
    std::vector<std::pair<size_t, long long>>& chosen) {
    // close the element here if it covers the pivot and hangs together
    if (mult[pivot] > 0) {
        std::vector<const oracle_piece*> cs;
        for (auto [ci, copies] : chosen) cs.push_back(&cycles[ci]);
        if (touches_base(base, cs) && commit(residual, remaining, w, mult))
            return true;
    }
    for (size_t ci = from; ci < cycles.size(); ++ci) {
        const auto& cyc = cycles[ci];
        long long copies = 0;
        while (true) {
            ++copies;
            if (variant != problem_variant::walks && copies > 1) break;
            if (!piece_fits(cyc, mult, residual, w)) break;
            // trails: an edge may appear once in the whole element
            if (variant != problem_variant::walks) {
                bool overlap = false;
                for (int e : cyc.edge_ids)
                    if (mult[e] > 0) overlap = true;
                if (overlap) break;
            }
            for (int e : cyc.edge_ids) ++mult[e];
            chosen.emplace_back(ci, copies);
            if (recurse_cycles(residual, remaining, pivot, w, base, mult, ci + 1,
                               chosen))
                return true;
            chosen.pop_back();
        }
        // unwind all copies of this cycle
        while (copies > 1) {
            --copies;
            for (int e : cyc.edge_ids) --mult[e];
        }
    }
    return false;
}

inline bool oracle_state::try_elements(std::vector<long long>& residual,
                                       int remaining, int pivot, long long w) {
    if (variant == problem_variant::paths_or_cycles) {
        for (const auto* bank : {&paths, &cycles})
            for (const auto& p : *bank) {
                bool covers = false, fits = true;
                for (int e : p.edge_ids) {
                    if (e == pivot) covers = true;
                    if (w > residual[e]) fits = false;
                }
                if (!covers || !fits) continue;
                std::vector<long long> mult(residual.size(), 0);
                for (int e : p.edge_ids) mult[e] = 1;
                if (commit(residual, remaining, w, mult)) return true;
            }
        return false;
    }
    // trails and walks: a base path plus attached cycles
    for (const auto& base : paths) {
        bool fits = true;
        for (int e : base.edge_ids)
            if (w > residual[e]) fits = false;
        if (!fits) continue;
        std::vector<long long> mult(residual.size(), 0);
        for (int e : base.edge_ids) mult[e] = 1;
        std::vector<std::pair<size_t, long long>> chosen;
        if (recurse_cycles(residual, remaining, pivot, w, base, mult, 0, chosen))
            return true;
    }
    return false;
}

inline bool oracle_state::solvable(std::vector<long long>& residual,
                                   int remaining) {
    int pivot = -1;
    for (size_t e = 0; e < residual.size(); ++e)
        if (residual[e] > 0) {
            pivot = static_cast<int>(e);
            break;
        }
    if (pivot < 0) return true;
    if (remaining == 0) return false;
    const std::uint64_t k = key_shift ? key(residual, remaining) : 0;
    if (key_shift && dead.count(k)) return false;
    for (long long w = residual[pivot]; w >= 1; --w)
        if (try_elements(residual, remaining, pivot, w)) return true;
    if (key_shift) dead.insert(k);
    return false;
}

}  // namespace detail

// Exhaustive minimum over all valid decompositions of tiny instances. The
// pivot edge (first with positive residual) must be covered by the next
// element, which prunes permutations of the same element set. Raising the
// default limits is possible but the search is exponential in the slack:
// expect the walks variant to become impractical once several overlapping
// cycles carry double-digit flow.
inline oracle_result brute_force_min(const flow_network& net,
                                     problem_variant variant,
                                     oracle_limits limits = {}) {
    if (net.node_count > limits.max_nodes ||
        net.edge_count() > limits.max_edges ||
        net.max_flow_value() > limits.max_flow || net.node_count > 31)
        return {oracle_result::verdict::too_large, -1};

    detail::oracle_state st;
    st.net = &net;
    st.variant = variant;
    {
        int shift = 1;
        while ((1LL << shift) <= net.max_flow_value()) ++shift;
        int k_bits = 1;
        while ((1LL << k_bits) <= net.edge_count()) ++k_bits;
        // memoize only when the whole state packs into 64 bits
        if (shift * net.edge_count() + k_bits <= 63) st.key_shift = shift;
    }
    const auto out = net.out_edges();
    std::vector<int> taken;
    detail::collect_paths(net, out, net.source, 1u << net.source, taken, st.paths);
    for (int anchor = 0; anchor < net.node_count; ++anchor)
        detail::collect_cycles(net, out, anchor, anchor, 1u << anchor, taken,
                               st.cycles);

    std::vector<long long> residual(net.edge_count());
    for (int e = 0; e < net.edge_count(); ++e) residual[e] = net.edges[e].flow;
    for (int k = 1; k <= net.edge_count(); ++k)
        if (st.solvable(residual, k)) return {oracle_result::verdict::found, k};
    return {oracle_result::verdict::infeasible, -1};
}

// ----------------------------------------------------------------------------
// greedy widest-walk baseline

namespace detail {

// every edge still carrying flow must be usable by some later source-to-sink
// walk: its tail reachable from the source, its head co-reaching the sink
inline bool residual_accessible(const flow_network& net,
                                const std::vector<long long>& residual) {
    std::vector<char> enabled(residual.size());
    for (size_t e = 0; e < residual.size(); ++e) enabled[e] = residual[e] > 0;
    auto from_s = reachable_from(net.source, net.node_count, net.edges, enabled, false);
    auto to_t = reachable_from(net.sink, net.node_count, net.edges, enabled, true);
    for (size_t e = 0; e < residual.size(); ++e)
        if (residual[e] > 0 &&
            (!from_s[net.edges[e].tail] || !to_t[net.edges[e].head]))
            return false;
    return true;
}

// maximum-bottleneck source-to-sink path over positive residual; empty when
// the sink is unreachable
inline std::vector<int> widest_path(const flow_network& net,
                                    const std::vector<long long>& residual) {
    const int n = net.node_count;
    const auto out = net.out_edges();
    std::vector<long long> best(n, 0);
    std::vector<int> via_edge(n, -1);
    best[net.source] = std::numeric_limits<long long>::max();
    std::set<std::pair<long long, int>> queue = {{best[net.source], net.source}};
    while (!queue.empty()) {
        auto [b, v] = *queue.rbegin();
        queue.erase({b, v});
        if (b < best[v]) continue;
        for (int e : out[v]) {
            if (residual[e] <= 0) continue;
            long long nb = std::min(b, residual[e]);
            int head = net.edges[e].head;
            if (nb > best[head]) {
                queue.erase({best[head], head});
                best[head] = nb;
                via_edge[head] = e;
                queue.insert({nb, head});
            }
        }
    }
    if (best[net.sink] == 0) return {};
    std::vector<int> seq = {net.sink};
    for (int v = net.sink; v != net.source; v = net.edges[via_edge[v]].tail)
        seq.push_back(net.edges[via_edge[v]].tail);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

// one simple source-to-sink path in the positive residual, via BFS
inline std::vector<int> any_path(const flow_network& net,
                                 const std::vector<long long>& residual) {
    std::vector<char> enabled(residual.size());
    for (size_t e = 0; e < residual.size(); ++e) enabled[e] = residual[e] > 0;
    std::vector<int> parent_edge(net.node_count, -1);
    std::vector<bool> seen(net.node_count, false);
    std::vector<int> queue = {net.source};
    seen[net.source] = true;
    const auto out = net.out_edges();
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (int e : out[v]) {
            if (!enabled[e] || seen[net.edges[e].head]) continue;
            seen[net.edges[e].head] = true;
            parent_edge[net.edges[e].head] = e;
            queue.push_back(net.edges[e].head);
        }
    }
    if (!seen[net.sink]) return {};
    std::vector<int> seq = {net.sink};
    for (int v = net.sink; v != net.source; v = net.edges[parent_edge[v]].tail)
        seq.push_back(net.edges[parent_edge[v]].tail);
    std::reverse(seq.begin(), seq.end());
    return seq;
}

// peel one simple cycle off a positive circulation
inline std::vector<int> peel_cycle(const flow_network& net,
                                   std::vector<long long>& residual) {
    int start = -1;
    for (int e = 0; e < net.edge_count(); ++e)
        if (residual[e] > 0) {
            start = net.edges[e].tail;
            break;
        }
    if (start < 0) return {};
    const auto out = net.out_edges();
    std::vector<int> order = {start};
    std::vector<int> pos(net.node_count, -1);
    pos[start] = 0;
    int cur = start;
    while (true) {
        int chosen = -1;
        for (int e : out[cur])
            if (residual[e] > 0) {
                chosen = e;
                break;
            }
        if (chosen < 0)
            throw std::logic_error("circulation stalled while peeling a cycle");
        cur = net.edges[chosen].head;
        if (pos[cur] >= 0) {
            std::vector<int> cycle(order.begin() + pos[cur], order.end());
            cycle.push_back(cur);
            for (size_t i = 0; i + 1 < cycle.size(); ++i)
                --residual[net.find_edge(cycle[i], cycle[i + 1])];
            return cycle;
        }
        pos[cur] = static_cast<int>(order.size());
        order.push_back(cur);
    }
}

}  // namespace detail

// Greedy baseline: repeatedly send the widest source-to-sink path as one
// weighted walk, backing off the weight whenever the subtraction would
// strand residual flow. When no weight works, the remaining residual is
// split into unit-weight walks: unit paths plus the leftover circulation's
// cycles, attached to the paths they share nodes with.
inline decomposition greedy_width_baseline(const flow_network& net) {
    decomposition out;
    out.variant = {problem_variant::walks, cardinality_mode::at_most_k};
    const int m = net.edge_count();
    std::vector<long long> residual(m);
    for (int e = 0; e < m; ++e) residual[e] = net.edges[e].flow;

    auto emit = [&](const std::vector<int>& seq, long long weight) {
        decomposition_element el;
        el.node_sequence = seq;
        el.weight = weight;
        if (!multiplicity_from_sequence(net, seq, el.edge_multiplicity))
            throw std::logic_error("greedy emitted a non-walk");
        el.kind = classify_element(seq, el.edge_multiplicity);
        out.elements.push_back(std::move(el));
    };

    while (true) {
        long long left = 0;
        for (long long r : residual) left += r;
        if (left == 0) return out;

        auto seq = detail::widest_path(net, residual);
        bool committed = false;
        if (!seq.empty()) {
            long long bottleneck = std::numeric_limits<long long>::max();
            std::vector<int> eids;
            for (size_t i = 0; i + 1 < seq.size(); ++i) {
                int e = net.find_edge(seq[i], seq[i + 1]);
                eids.push_back(e);
                bottleneck = std::min(bottleneck, residual[e]);
            }
            for (long long w = bottleneck; w >= 1 && !committed; --w) {
                for (int e : eids) residual[e] -= w;
                if (detail::residual_accessible(net, residual)) {
                    emit(seq, w);
                    committed = true;
                } else {
                    for (int e : eids) residual[e] += w;
                }
            }
        }
        if (committed) continue;

        // no weight survives the accessibility guard: split everything left
        // into unit walks
        std::vector<std::vector<int>> unit_paths;
        while (true) {
            auto p = detail::any_path(net, residual);
            if (p.empty()) break;
            for (size_t i = 0; i + 1 < p.size(); ++i)
                --residual[net.find_edge(p[i], p[i + 1])];
            unit_paths.push_back(std::move(p));
        }
        std::vector<std::vector<int>> loops;
        while (true) {
            long long circ = 0;
            for (long long r : residual) circ += r;
            if (circ == 0) break;
            loops.push_back(detail::peel_cycle(net, residual));
        }
        if (unit_paths.empty() && !loops.empty())
            throw std::logic_error("residual circulation with no path to attach to");

        // cluster the loops by shared nodes, then attach each cluster to a
        // unit path it touches and read the merged multigraph as one walk
        std::vector<int> owner(loops.size(), -1);  // cluster id per loop
        int clusters = 0;
        std::vector<std::vector<bool>> cluster_nodes;
        for (size_t li = 0; li < loops.size(); ++li) {
            std::vector<int> touching;
            for (int c = 0; c < clusters; ++c)
                for (int v : loops[li])
                    if (cluster_nodes[c][v]) {
                        touching.push_back(c);
                        break;
                    }
            int home;
            if (touching.empty()) {
                home = clusters++;
                cluster_nodes.emplace_back(net.node_count, false);
            } else {
                home = touching[0];
                // merging later clusters into the first keeps owners valid
                for (size_t ti = 1; ti < touching.size(); ++ti) {
                    for (int v = 0; v < net.node_count; ++v)
                        if (cluster_nodes[touching[ti]][v])
                            cluster_nodes[home][v] = true;
                    for (auto& o : owner)
                        if (o == touching[ti]) o = home;
                }
            }
            owner[li] = home;
            for (int v : loops[li]) cluster_nodes[home][v] = true;
        }
        for (size_t pi = 0; pi < unit_paths.size(); ++pi) {
            std::vector<long long> mult(m, 0);
            for (size_t i = 0; i + 1 < unit_paths[pi].size(); ++i)
                ++mult[net.find_edge(unit_paths[pi][i], unit_paths[pi][i + 1])];
            for (size_t li = 0; li < loops.size(); ++li) {
                if (owner[li] < 0) continue;
                bool touches = false;
                for (int v : unit_paths[pi])
                    if (cluster_nodes[owner[li]][v]) touches = true;
                if (!touches) continue;
                // take every loop of this cluster
                int cl = owner[li];
                for (size_t lj = 0; lj < loops.size(); ++lj) {
                    if (owner[lj] != cl) continue;
                    for (size_t i = 0; i + 1 < loops[lj].size(); ++i)
                        ++mult[net.find_edge(loops[lj][i], loops[lj][i + 1])];
                    owner[lj] = -1;
                }
            }
            emit(euler_walk(net.source, net.sink, net.node_count, net.edges, mult), 1);
        }
        for (int o : owner)
            if (o >= 0)
                throw std::logic_error("a residual cycle touched no unit path");
        return out;
    }
}

}  // namespace flowdec
