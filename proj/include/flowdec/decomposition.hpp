#pragma once

// Shared decomposition value types used by the formulations, generator,
// verifier and CLI layers.

#include <algorithm>
#include <string>
#include <vector>

#include "graph.hpp"

namespace flowdec {

enum class problem_variant { paths_or_cycles, trails_cg, trails_reach, walks };
enum class cardinality_mode { at_most_k, exactly_k };

struct variant_spec {
    problem_variant problem = problem_variant::paths_or_cycles;
    cardinality_mode cardinality = cardinality_mode::at_most_k;
};

inline std::string variant_name(problem_variant p) {
    switch (p) {
        case problem_variant::paths_or_cycles: return "pc";
        case problem_variant::trails_cg: return "trail-cg";
        case problem_variant::trails_reach: return "trail-reach";
        case problem_variant::walks: return "walk";
    }
    return "?";
}

inline bool variant_from_name(const std::string& s, problem_variant& out) {
    if (s == "pc") out = problem_variant::paths_or_cycles;
    else if (s == "trail-cg") out = problem_variant::trails_cg;
    else if (s == "trail-reach") out = problem_variant::trails_reach;
    else if (s == "walk") out = problem_variant::walks;
    else return false;
    return true;
}

enum class element_kind { path, cycle, trail, walk };

inline std::string element_kind_name(element_kind k) {
    switch (k) {
        case element_kind::path: return "path";
        case element_kind::cycle: return "cycle";
        case element_kind::trail: return "trail";
        case element_kind::walk: return "walk";
    }
    return "?";
}

inline bool element_kind_from_name(const std::string& s, element_kind& out) {
    if (s == "path") out = element_kind::path;
    else if (s == "cycle") out = element_kind::cycle;
    else if (s == "trail") out = element_kind::trail;
    else if (s == "walk") out = element_kind::walk;
    else return false;
    return true;
}

struct decomposition_element {
    element_kind kind = element_kind::walk;
    std::vector<int> node_sequence;
    edge_selection edge_multiplicity;
    long long weight = 1;
};

struct decomposition {
    std::vector<decomposition_element> elements;
    variant_spec variant;
};

// Rebuild per-edge usage counts from a node sequence; returns false when a
// consecutive pair is not an edge of the network.
inline bool multiplicity_from_sequence(const flow_network& net,
                                       const std::vector<int>& seq,
                                       edge_selection& out) {
    out = edge_selection(net.edge_count());
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        int e = net.find_edge(seq[i], seq[i + 1]);
        if (e < 0) return false;
        ++out.multiplicity[e];
    }
    return true;
}

// Honest label for a source-to-sink walk: path when no node repeats, trail
// when no edge repeats, walk otherwise.
inline element_kind classify_element(const std::vector<int>& seq,
                                     const edge_selection& mult) {
    std::vector<int> nodes(seq.begin(), seq.end());
    std::sort(nodes.begin(), nodes.end());
    if (std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end())
        return element_kind::path;
    for (long long c : mult.multiplicity)
        if (c > 1) return element_kind::walk;
    return element_kind::trail;
}

}  // namespace flowdec
