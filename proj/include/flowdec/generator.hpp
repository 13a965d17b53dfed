#pragma once

// Synthetic feasible-instance generator: superposes random weighted elements
// of the requested kind and returns both the network and the generating
// decomposition.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "decomposition.hpp"
#include "graph.hpp"

namespace flowdec {

struct generated_instance {
    flow_network network;
    decomposition generating;
};

namespace detail {

// mt19937_64 is bit-stable across platforms; std::uniform_int_distribution is
// not, so instances stay reproducible per seed with this bounded draw.
class rng {
public:
    explicit rng(std::uint64_t seed) : gen_(seed * 0x9e3779b97f4a7c15ULL + 1) {}

    long long range(long long lo, long long hi) {  // inclusive
        return lo + static_cast<long long>(gen_() %
                                           static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(int percent) { return range(1, 100) <= percent; }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<size_t>(range(0, static_cast<long long>(v.size()) - 1))];
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace detail

inline generated_instance generate_instance(int node_count, int element_count,
                                            variant_spec variant,
                                            std::uint64_t seed) {
    if (node_count < 2) node_count = 2;
    if (element_count < 1) element_count = 1;
    detail::rng rnd(seed);

    const int s = 0;
    const int t = node_count - 1;

    // interior node pool, handed out lazily so unused budget can be compacted
    std::vector<int> used_interiors;
    int next_fresh = 1;
    auto fresh_interior = [&]() -> int {
        if (next_fresh >= t) return -1;
        int v = next_fresh++;
        used_interiors.push_back(v);
        return v;
    };
    auto some_interior = [&](std::vector<int>& avoid) -> int {
        std::vector<int> pool;
        for (int v : used_interiors)
            if (std::find(avoid.begin(), avoid.end(), v) == avoid.end())
                pool.push_back(v);
        if (!pool.empty() && !rnd.chance(40)) return rnd.pick(pool);
        int f = fresh_interior();
        if (f >= 0) return f;
        return pool.empty() ? -1 : rnd.pick(pool);
    };

    struct raw_element {
        element_kind kind;
        std::vector<int> seq;
        long long weight;
    };
    std::vector<raw_element> elements;

    auto make_path = [&]() -> std::vector<int> {
        // ascending interior ids keep the spine node-simple
        int max_len = std::min(3, t - 1);
        int len = max_len > 0 ? static_cast<int>(rnd.range(0, max_len)) : 0;
        std::vector<int> mids, avoid;
        for (int j = 0; j < len; ++j) {
            int v = some_interior(avoid);
            if (v < 0) break;
            avoid.push_back(v);
            mids.push_back(v);
        }
        std::sort(mids.begin(), mids.end());
        mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
        std::vector<int> seq{s};
        for (int v : mids) seq.push_back(v);
        seq.push_back(t);
        return seq;
    };

    for (int i = 0; i < element_count; ++i) {
        long long weight = rnd.range(1, 10);
        bool want_cycle = variant.problem == problem_variant::paths_or_cycles &&
                          i > 0 && !used_interiors.empty() && rnd.chance(50);
        if (want_cycle) {
            // node-simple cycle anchored on an already-used interior node
            std::vector<int> avoid;
            int anchor = rnd.pick(used_interiors);
            avoid.push_back(anchor);
            int extra = static_cast<int>(rnd.range(1, 2));
            std::vector<int> body{anchor};
            for (int j = 0; j < extra; ++j) {
                int v = some_interior(avoid);
                if (v < 0) break;
                avoid.push_back(v);
                body.push_back(v);
            }
            if (body.size() >= 2) {
                body.push_back(anchor);
                elements.push_back({element_kind::cycle, body, weight});
                continue;
            }
            // fall through to a path when no second node was available
        }

        std::vector<int> seq = make_path();

        bool excursions = variant.problem == problem_variant::trails_cg ||
                          variant.problem == problem_variant::trails_reach ||
                          variant.problem == problem_variant::walks;
        if (excursions && seq.size() > 2) {
            int tries = static_cast<int>(rnd.range(0, 2));
            for (int j = 0; j < tries; ++j) {
                // pick a spine node to hang a small loop on
                size_t pos = static_cast<size_t>(rnd.range(1, static_cast<long long>(seq.size()) - 2));
                int p = seq[pos];
                std::vector<int> avoid{p};
                int q;
                if (variant.problem == problem_variant::walks) {
                    q = some_interior(avoid);  // walks may revisit shared nodes
                } else {
                    q = fresh_interior();  // trails need fresh edges per element
                }
                if (q < 0 || q == p) continue;
                int repeats = variant.problem == problem_variant::walks
                                  ? static_cast<int>(rnd.range(1, 3))
                                  : 1;
                std::vector<int> loop;
                for (int r = 0; r < repeats; ++r) {
                    loop.push_back(q);
                    loop.push_back(p);
                }
                seq.insert(seq.begin() + static_cast<long long>(pos) + 1,
                           loop.begin(), loop.end());
            }
        }

        element_kind kind = element_kind::walk;
        switch (variant.problem) {
            case problem_variant::paths_or_cycles: kind = element_kind::path; break;
            case problem_variant::trails_cg:
            case problem_variant::trails_reach: kind = element_kind::trail; break;
            case problem_variant::walks: kind = element_kind::walk; break;
        }
        elements.push_back({kind, seq, weight});
    }

    // superpose flows and compact node ids
    std::map<std::pair<int, int>, long long> flow;
    std::vector<char> node_used(node_count, 0);
    node_used[s] = node_used[t] = 1;
    for (const auto& el : elements) {
        for (size_t i = 0; i + 1 < el.seq.size(); ++i) {
            flow[{el.seq[i], el.seq[i + 1]}] += el.weight;
            node_used[el.seq[i]] = 1;
            node_used[el.seq[i + 1]] = 1;
        }
    }
    std::vector<int> relabel(node_count, -1);
    int next_id = 0;
    for (int v = 0; v < node_count; ++v)
        if (node_used[v]) relabel[v] = next_id++;

    generated_instance out;
    out.network.name = "gen-" + variant_name(variant.problem) + "-" +
                       std::to_string(seed);
    out.network.node_count = next_id;
    for (const auto& [uv, f] : flow)
        out.network.edges.push_back({relabel[uv.first], relabel[uv.second], f});
    detect_terminals(out.network);

    out.generating.variant = variant;
    for (const auto& el : elements) {
        decomposition_element de;
        de.kind = el.kind;
        de.weight = el.weight;
        for (int v : el.seq) de.node_sequence.push_back(relabel[v]);
        multiplicity_from_sequence(out.network, de.node_sequence,
                                   de.edge_multiplicity);
        out.generating.elements.push_back(std::move(de));
    }
    return out;
}

}  // namespace flowdec
