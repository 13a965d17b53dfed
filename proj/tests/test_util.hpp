#pragma once

#include <string>

#include "flowdec/graph.hpp"

namespace testutil {

inline std::string fig2_text() {
    return "# fig2\n5\n0 1 1\n1 2 2\n2 3 2\n3 1 2\n1 4 1\n";
}

inline flowdec::flow_network fig2() {
    return flowdec::parse_graph_text(fig2_text()).front();
}

// k* = 5 for all variants: five unit flows into the sink, each needing its
// own element; doubling probes 1,2,4,8 then binary 6,5.
inline std::string kstar5_text() {
    return "# kstar5\n6\n0 1 2\n1 5 1\n1 2 1\n2 5 1\n0 3 2\n3 5 1\n3 4 1\n"
           "4 5 1\n0 5 1\n";
}

// strict ordering k*(pc)=4 > k*(trails)=3 > k*(walks)=2
inline std::string hub_text() {
    return "# hub\n6\n0 1 4\n1 5 4\n1 2 2\n2 1 2\n1 3 3\n3 1 3\n1 4 1\n4 1 1\n";
}

// isolated 2-cycle with mismatched access flow: trails infeasible at every k,
// constraint generation must cut the cycle component
inline std::string cg_trap_text(long long cycle_flow = 2) {
    std::string c = std::to_string(cycle_flow);
    return "# cgtrap" + c + "\n4\n0 1 1\n1 3 1\n1 2 " + c + "\n2 1 " + c + "\n";
}

// path plus node-disjoint 2-cycle reachable only through the path's middle
// node; used for figure-eight style pc checks: s->x, x->t, x<->a, x<->b
inline std::string figure_eight_text() {
    return "# fig8\n5\n0 1 1\n1 4 1\n1 2 2\n2 1 2\n1 3 2\n3 1 2\n";
}

// two disjoint planted 2-cycles hanging off separate branches; trails are
// feasible at k=2 but only after constraint generation cuts the cycle on the
// upper branch, exercising multi-component cut bookkeeping
inline std::string trap2_text() {
    return "# trap2\n6\n0 1 2\n1 5 1\n1 2 2\n2 1 2\n1 3 1\n3 5 1\n3 4 1\n"
           "4 3 1\n";
}

inline flowdec::flow_network kstar5() {
    return flowdec::parse_graph_text(kstar5_text()).front();
}

inline flowdec::flow_network trap2() {
    return flowdec::parse_graph_text(trap2_text()).front();
}

inline flowdec::flow_network hub() {
    return flowdec::parse_graph_text(hub_text()).front();
}

inline flowdec::flow_network cg_trap(long long cycle_flow = 2) {
    return flowdec::parse_graph_text(cg_trap_text(cycle_flow)).front();
}

inline flowdec::flow_network figure_eight() {
    return flowdec::parse_graph_text(figure_eight_text()).front();
}

}  // namespace testutil
