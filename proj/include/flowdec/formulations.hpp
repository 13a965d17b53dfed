#pragma once

// ILP formulations for fixed-k flow decomposition on graphs with cycles.
//
// All four builders produce pure feasibility models over integer variables:
//   build_fdpc        elements are simple paths or simple cycles
//   build_fdt_cg      elements are trails; cyclic-but-disconnected selections
//                     are cut away lazily with connectivity components
//   build_walk_reach  elements are trails (binary usage) or walks (integer
//                     usage); connectivity is enforced eagerly with a
//                     reachability ordering, so no cuts are needed
//
// Shared scheme: x[i] describes which edges element i uses (and how often),
// w[i] is its weight, and a per-edge superposition row ties the elements to
// the flow values. Products are linearized: xw[i][e] stands for x*w, and for
// walks the weight is expanded in binary digits (wbit) with per-digit
// products xbit so that integer x times integer w stays linear.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "decomposition.hpp"
#include "graph.hpp"
#include "milp.hpp"

namespace flowdec {

// A connectivity cut for the trail model: a set of nodes that some element
// kept strongly connected among themselves but unreachable from the source.
// `edges` are the element's edges inside the component, `escape_edges` the
// network edges that leave the component and are not in `edges`.
struct cg_component {
    std::vector<int> nodes;
    std::vector<int> edges;
    std::vector<int> escape_edges;
};

struct model_handles {
    problem_variant problem = problem_variant::paths_or_cycles;
    cardinality_mode cardinality = cardinality_mode::at_most_k;
    int k = 0;
    int bits = 0;  // binary digits of the weight range (walks only)

    // grids indexed [element][edge], [element][node], or [element]
    std::vector<std::vector<var_ref>> x;
    std::vector<var_ref> w;
    std::vector<std::vector<var_ref>> xw;      // x*w product (pc, trails)
    std::vector<std::vector<var_ref>> cyc;     // cycle marker, interior nodes (pc)
    std::vector<std::vector<var_ref>> dep;     // ordering depth (pc, reach)
    std::vector<std::vector<var_ref>> comp_on; // [element][component] (trail cg)
    std::vector<std::vector<var_ref>> par;     // tree-parent indicator (reach)
    std::vector<std::vector<var_ref>> ydiff;   // par*(dep_head-dep_tail) (reach)
    std::vector<std::vector<var_ref>> wbit;    // [element][bit] (walks)
    std::vector<std::vector<std::vector<var_ref>>> xbit;  // [element][edge][bit]
};

struct built_model {
    milp_model model;
    model_handles handles;
};

namespace detail {

inline void require_buildable(const flow_network& net, int k) {
    if (k < 1) throw std::invalid_argument("element count k must be >= 1");
    if (net.edge_count() == 0)
        throw std::invalid_argument("network has no edges");
    if (net.source < 0 || net.sink < 0)
        throw std::invalid_argument("network terminals are not set");
}

inline std::string arc(const flow_network& net, int e) {
    return std::to_string(net.edges[e].tail) + "," +
           std::to_string(net.edges[e].head);
}

inline int weight_bits(long long wbar) {
    int b = 1;
    while ((1LL << b) - 1 < wbar) ++b;
    return b;
}

// balance rows shared by every formulation. In at-most mode each element may
// leave the source at most once and must conserve usage at interior nodes; in
// exactly-k mode full per-node balance forces every element to be a real
// source-to-sink element.
inline void add_balance_rows(milp_model& model, const flow_network& net,
                             const std::vector<std::vector<int>>& in,
                             const std::vector<std::vector<int>>& out,
                             const std::vector<var_ref>& x, int i,
                             cardinality_mode mode) {
    const std::string si = std::to_string(i);
    if (mode == cardinality_mode::at_most_k) {
        std::vector<linear_term> src;
        for (int e : out[net.source]) src.push_back({1, x[e]});
        model.add_constraint(std::move(src), relation::le, 1, "source[" + si + "]");
        for (int v = 0; v < net.node_count; ++v) {
            if (v == net.source || v == net.sink) continue;
            std::vector<linear_term> terms;
            for (int e : in[v]) terms.push_back({1, x[e]});
            for (int e : out[v]) terms.push_back({-1, x[e]});
            model.add_constraint(std::move(terms), relation::eq, 0,
                                 "balance[" + si + "]v" + std::to_string(v));
        }
    } else {
        for (int v = 0; v < net.node_count; ++v) {
            std::vector<linear_term> terms;
            for (int e : in[v]) terms.push_back({1, x[e]});
            for (int e : out[v]) terms.push_back({-1, x[e]});
            long long rhs = v == net.sink ? 1 : v == net.source ? -1 : 0;
            model.add_constraint(std::move(terms), relation::eq, rhs,
                                 "balance[" + si + "]v" + std::to_string(v));
        }
    }
}

// xw[e] = x[e]*w with binary x, integer w in [1, wbar]:
//   xw <= f_e * x,  xw <= w,  xw >= w - (1-x)*wbar
inline void add_product_rows(milp_model& model, const flow_network& net,
                             const std::vector<var_ref>& x, var_ref w,
                             const std::vector<var_ref>& xw, long long wbar,
                             int i) {
    const std::string si = std::to_string(i);
    for (int e = 0; e < net.edge_count(); ++e) {
        const std::string tag = "[" + si + "](" + arc(net, e) + ")";
        model.add_constraint({{1, xw[e]}, {-net.edges[e].flow, x[e]}},
                             relation::le, 0, "xw_cap" + tag);
        model.add_constraint({{1, xw[e]}, {-1, w}}, relation::le, 0,
                             "xw_w" + tag);
        model.add_constraint({{1, xw[e]}, {-1, w}, {-wbar, x[e]}}, relation::ge,
                             -wbar, "xw_lo" + tag);
    }
}

// one superposition row per edge: the element products must rebuild the flow
inline void add_superposition_rows(milp_model& model, const flow_network& net,
                                   const model_handles& h) {
    for (int e = 0; e < net.edge_count(); ++e) {
        std::vector<linear_term> terms;
        if (h.problem == problem_variant::walks) {
            for (int i = 0; i < h.k; ++i)
                for (int j = 0; j < h.bits; ++j)
                    terms.push_back({1LL << j, h.xbit[i][e][j]});
        } else {
            for (int i = 0; i < h.k; ++i) terms.push_back({1, h.xw[i][e]});
        }
        model.add_constraint(std::move(terms), relation::eq, net.edges[e].flow,
                             "flow(" + arc(net, e) + ")");
    }
}

}  // namespace detail

// ----------------------------------------------------------------------------
// paths or cycles
//
// Per element: binary edge usage with at most one outgoing selected edge per
// node, balance at interior nodes, and a depth ordering that admits a cycle
// only where the element's cycle marker sits. The budget row lets each
// element be one path (leaves the source) or one cycle (one marker), and the
// out-degree cap keeps those shapes from overlapping inside one element.
inline built_model build_fdpc(const flow_network& net, int k,
                              cardinality_mode mode = cardinality_mode::at_most_k) {
    detail::require_buildable(net, k);
    const int n = net.node_count;
    const int m = net.edge_count();
    const long long wbar = net.max_flow_value();
    const auto in = net.in_edges();
    const auto out = net.out_edges();

    built_model bm;
    auto& model = bm.model;
    auto& h = bm.handles;
    h.problem = problem_variant::paths_or_cycles;
    h.cardinality = mode;
    h.k = k;
    h.x.resize(k);
    h.w.resize(k);
    h.xw.resize(k);
    h.cyc.resize(k);
    h.dep.resize(k);

    for (int i = 0; i < k; ++i) {
        const std::string si = std::to_string(i);
        for (int e = 0; e < m; ++e)
            h.x[i].push_back(model.add_binary("x[" + si + "](" + detail::arc(net, e) + ")"));
        h.w[i] = model.add_integer(1, wbar, "w[" + si + "]");
        for (int e = 0; e < m; ++e)
            h.xw[i].push_back(model.add_integer(0, net.edges[e].flow,
                                                "xw[" + si + "](" + detail::arc(net, e) + ")"));
        for (int v = 0; v < n; ++v)
            h.cyc[i].push_back(v == net.source || v == net.sink
                                   ? var_ref{}
                                   : model.add_binary("cyc[" + si + "]v" + std::to_string(v)));
        for (int v = 0; v < n; ++v)
            h.dep[i].push_back(model.add_integer(1, n, "dep[" + si + "]v" + std::to_string(v)));
    }

    for (int i = 0; i < k; ++i) {
        const std::string si = std::to_string(i);
        for (int v = 0; v < n; ++v) {
            if (v == net.source || v == net.sink) continue;
            std::vector<linear_term> terms;
            for (int e : in[v]) terms.push_back({1, h.x[i][e]});
            for (int e : out[v]) terms.push_back({-1, h.x[i][e]});
            model.add_constraint(std::move(terms), relation::eq, 0,
                                 "balance[" + si + "]v" + std::to_string(v));
        }
        // at most one outgoing edge per node: an element is never two shapes
        for (int v = 0; v < n; ++v) {
            std::vector<linear_term> terms;
            for (int e : out[v]) terms.push_back({1, h.x[i][e]});
            model.add_constraint(std::move(terms), relation::le, 1,
                                 "outdeg[" + si + "]v" + std::to_string(v));
        }
        detail::add_product_rows(model, net, h.x[i], h.w[i], h.xw[i], wbar, i);
        // depth ordering: a selected edge must climb by one, except into the
        // one node whose cycle marker is set
        for (int e = 0; e < m; ++e) {
            int u = net.edges[e].tail, v = net.edges[e].head;
            std::vector<linear_term> terms = {
                {1, h.dep[i][v]}, {-1, h.dep[i][u]}, {-(n - 1), h.x[i][e]}};
            if (h.cyc[i][v].valid()) terms.push_back({n - 1, h.cyc[i][v]});
            model.add_constraint(std::move(terms), relation::ge, 2 - n,
                                 "order[" + si + "](" + detail::arc(net, e) + ")");
        }
        // budget: one path start or one cycle marker (or neither in at-most
        // mode, leaving the element empty)
        std::vector<linear_term> budget;
        for (int e : out[net.source]) budget.push_back({1, h.x[i][e]});
        for (int v = 0; v < n; ++v)
            if (h.cyc[i][v].valid()) budget.push_back({1, h.cyc[i][v]});
        model.add_constraint(std::move(budget),
                             mode == cardinality_mode::exactly_k ? relation::eq
                                                                 : relation::le,
                             1, "budget[" + si + "]");
    }
    detail::add_superposition_rows(model, net, h);
    return bm;
}

// ----------------------------------------------------------------------------
// trails with lazily generated connectivity cuts
//
// The base model only enforces balance, so a solution may park flow on a
// cycle that never meets its element's source-to-sink trail. Each discovered
// component C adds, per element, an activation comp_on that is forced to 1
// exactly when all of C's internal edges are selected again, and then an
// escape edge out of C must be selected too.
inline built_model build_fdt_cg(const flow_network& net, int k,
                                const std::vector<cg_component>& components,
                                cardinality_mode mode = cardinality_mode::at_most_k) {
    detail::require_buildable(net, k);
    const int m = net.edge_count();
    const long long wbar = net.max_flow_value();
    const auto in = net.in_edges();
    const auto out = net.out_edges();

    for (const auto& comp : components) {
        if (comp.edges.empty())
            throw std::invalid_argument("component with no internal edges");
        for (int e : comp.edges)
            if (e < 0 || e >= m)
                throw std::invalid_argument("component edge out of range");
        for (int e : comp.escape_edges) {
            if (e < 0 || e >= m)
                throw std::invalid_argument("component escape edge out of range");
            if (std::find(comp.edges.begin(), comp.edges.end(), e) != comp.edges.end())
                throw std::invalid_argument("escape edge listed as internal");
        }
    }

    built_model bm;
    auto& model = bm.model;
    auto& h = bm.handles;
    h.problem = problem_variant::trails_cg;
    h.cardinality = mode;
    h.k = k;
    h.x.resize(k);
    h.w.resize(k);
    h.xw.resize(k);
    h.comp_on.resize(k);

    for (int i = 0; i < k; ++i) {
        const std::string si = std::to_string(i);
        for (int e = 0; e < m; ++e)
            h.x[i].push_back(model.add_binary("x[" + si + "](" + detail::arc(net, e) + ")"));
        h.w[i] = model.add_integer(1, wbar, "w[" + si + "]");
        for (int e = 0; e < m; ++e)
            h.xw[i].push_back(model.add_integer(0, net.edges[e].flow,
                                                "xw[" + si + "](" + detail::arc(net, e) + ")"));
        for (size_t c = 0; c < components.size(); ++c)
            h.comp_on[i].push_back(model.add_binary("comp[" + si + "]#" + std::to_string(c)));
    }

    for (int i = 0; i < k; ++i) {
        const std::string si = std::to_string(i);
        detail::add_balance_rows(model, net, in, out, h.x[i], i, mode);
        detail::add_product_rows(model, net, h.x[i], h.w[i], h.xw[i], wbar, i);
        for (size_t c = 0; c < components.size(); ++c) {
            const auto& comp = components[c];
            const long long sz = static_cast<long long>(comp.edges.size());
            const std::string tag = "[" + si + "]#" + std::to_string(c);
            // comp_on = 1 iff every internal edge is selected again
            std::vector<linear_term> all_on;
            for (int e : comp.edges) all_on.push_back({1, h.x[i][e]});
            all_on.push_back({-sz, h.comp_on[i][c]});
            model.add_constraint(std::move(all_on), relation::ge, 0,
                                 "comp_all" + tag);
            std::vector<linear_term> not_all;
            for (int e : comp.edges) not_all.push_back({1, h.x[i][e]});
            not_all.push_back({-sz, h.comp_on[i][c]});
            model.add_constraint(std::move(not_all), relation::le, sz - 1,
                                 "comp_partial" + tag);
            // an active component must be entered or left through an escape
            std::vector<linear_term> escape;
            for (int e : comp.escape_edges) escape.push_back({1, h.x[i][e]});
            escape.push_back({-1, h.comp_on[i][c]});
            model.add_constraint(std::move(escape), relation::ge, 0,
                                 "comp_escape" + tag);
        }
    }
    detail::add_superposition_rows(model, net, h);
    return bm;
}

// ----------------------------------------------------------------------------
// trails or walks with an eager reachability ordering
//
// Every node an element touches picks exactly one selected tree-parent edge
// (par) along which its depth rises by at least one; chasing parents
// strictly downhill in depth must end at the source, so no selected part can
// float free of the trail or walk. ydiff linearizes par*(dep_head-dep_tail).
// Trails use binary edge usage and the xw product; walks use integer usage
// and expand the weight into binary digits (wbit, xbit).
inline built_model build_walk_reach(const flow_network& net, int k,
                                    problem_variant variant = problem_variant::walks,
                                    cardinality_mode mode = cardinality_mode::at_most_k) {
    detail::require_buildable(net, k);
    if (variant != problem_variant::walks && variant != problem_variant::trails_reach)
        throw std::invalid_argument("build_walk_reach handles trails_reach or walks");
    const bool integer_use = variant == problem_variant::walks;
    const int n = net.node_count;
    const int m = net.edge_count();
    const long long wbar = net.max_flow_value();
    // how often one node can be visited: selected edge count for trails,
    // total flow for walks (each traversal consumes one unit of some edge)
    const long long visits = integer_use ? net.total_flow() : m;
    const auto in = net.in_edges();
    const auto out = net.out_edges();

    built_model bm;
    auto& model = bm.model;
    auto& h = bm.handles;
    h.problem = variant;
    h.cardinality = mode;
    h.k = k;
    h.bits = integer_use ? detail::weight_bits(wbar) : 0;
    h.x.resize(k);
    h.w.resize(k);
    h.dep.resize(k);
    h.par.resize(k);
    h.ydiff.resize(k);
    if (integer_use) {
        h.wbit.resize(k);
        h.xbit.resize(k);
    } else {
        h.xw.resize(k);
    }

    for (int i = 0; i < k; ++i) {
        const std::string si = std::to_string(i);
        for (int e = 0; e < m; ++e) {
            const std::string a = "[" + si + "](" + detail::arc(net, e) + ")";
            h.x[i].push_back(integer_use
                                 ? model.add_integer(0, net.edges[e].flow, "x" + a)
                                 : model.add_binary("x" + a));
        }
        h.w[i] = model.add_integer(1, wbar, "w[" + si + "]");
        for (int v = 0; v < n; ++v)
            h.dep[i].push_back(v == net.source
                                   ? model.add_integer(1, 1, "dep[" + si + "]v" + std::to_string(v))
                                   : model.add_integer(0, n, "dep[" + si + "]v" + std::to_string(v)));
        for (int e = 0; e < m; ++e)
            h.par[i].push_back(model.add_binary("par[" + si + "](" + detail::arc(net, e) + ")"));
        for (int e = 0; e < m; ++e)
            h.ydiff[i].push_back(model.add_integer(-n, n, "ydiff[" + si + "](" + detail::arc(net, e) + ")"));
        if (integer_use) {
            for (int j = 0; j < h.bits; ++j)
                h.wbit[i].push_back(model.add_binary("wbit[" + si + "]#" + std::to_string(j)));
            h.xbit[i].resize(m);
            for (int e = 0; e < m; ++e)
                for (int j = 0; j < h.bits; ++j)
                    h.xbit[i][e].push_back(model.add_integer(
                        0, net.edges[e].flow,
                        "xbit[" + si + "](" + detail::arc(net, e) + ")#" + std::to_string(j)));
        } else {
            for (int e = 0; e < m; ++e)
                h.xw[i].push_back(model.add_integer(0, net.edges[e].flow,
                                                    "xw[" + si + "](" + detail::arc(net, e) + ")"));
        }
    }

    for (int i = 0; i < k; ++i) {
        const std::string si = std::to_string(i);
        detail::add_balance_rows(model, net, in, out, h.x[i], i, mode);
        // a tree-parent edge must be used
        for (int e = 0; e < m; ++e)
            model.add_constraint({{1, h.x[i][e]}, {-1, h.par[i][e]}}, relation::ge,
                                 0, "use_par[" + si + "](" + detail::arc(net, e) + ")");
        for (int v = 0; v < n; ++v) {
            if (v == net.source) continue;
            const std::string sv = "[" + si + "]v" + std::to_string(v);
            std::vector<linear_term> one_parent;
            for (int e : in[v]) one_parent.push_back({1, h.par[i][e]});
            model.add_constraint(std::move(one_parent), relation::le, 1,
                                 "one_par" + sv);
            // untouched nodes sit at depth zero
            std::vector<linear_term> depth_cap = {{1, h.dep[i][v]}};
            for (int e : in[v]) depth_cap.push_back({-static_cast<long long>(n), h.x[i][e]});
            model.add_constraint(std::move(depth_cap), relation::le, 0,
                                 "dep_cap" + sv);
            // touched nodes climb: their parent edges carry positive ydiff
            std::vector<linear_term> climb;
            for (int e : in[v]) climb.push_back({1, h.x[i][e]});
            for (int e : in[v]) climb.push_back({-visits, h.ydiff[i][e]});
            model.add_constraint(std::move(climb), relation::le, 0,
                                 "climb" + sv);
            // and touched nodes have a parent at all
            std::vector<linear_term> parented;
            for (int e : in[v]) parented.push_back({1, h.x[i][e]});
            for (int e : in[v]) parented.push_back({-visits, h.par[i][e]});
            model.add_constraint(std::move(parented), relation::le, 0,
                                 "parented" + sv);
        }
        // ydiff = par * (dep_head - dep_tail)
        for (int e = 0; e < m; ++e) {
            int u = net.edges[e].tail, v = net.edges[e].head;
            const std::string a = "[" + si + "](" + detail::arc(net, e) + ")";
            model.add_constraint({{1, h.ydiff[i][e]}, {-static_cast<long long>(n), h.par[i][e]}},
                                 relation::le, 0, "ydiff_hi" + a);
            model.add_constraint({{1, h.ydiff[i][e]}, {static_cast<long long>(n), h.par[i][e]}},
                                 relation::ge, 0, "ydiff_lo" + a);
            model.add_constraint({{1, h.ydiff[i][e]},
                                  {-1, h.dep[i][v]},
                                  {1, h.dep[i][u]},
                                  {static_cast<long long>(n), h.par[i][e]}},
                                 relation::le, n, "ydiff_gap_hi" + a);
            model.add_constraint({{1, h.ydiff[i][e]},
                                  {-1, h.dep[i][v]},
                                  {1, h.dep[i][u]},
                                  {-static_cast<long long>(n), h.par[i][e]}},
                                 relation::ge, -n, "ydiff_gap_lo" + a);
        }
        if (integer_use) {
            // weight in binary digits, and per-digit products with x
            std::vector<linear_term> digits = {{1, h.w[i]}};
            for (int j = 0; j < h.bits; ++j)
                digits.push_back({-(1LL << j), h.wbit[i][j]});
            model.add_constraint(std::move(digits), relation::eq, 0,
                                 "w_digits[" + si + "]");
            for (int e = 0; e < m; ++e) {
                const long long fe = net.edges[e].flow;
                for (int j = 0; j < h.bits; ++j) {
                    const std::string a = "[" + si + "](" + detail::arc(net, e) +
                                          ")#" + std::to_string(j);
                    model.add_constraint({{1, h.xbit[i][e][j]}, {-fe, h.wbit[i][j]}},
                                         relation::le, 0, "xbit_cap" + a);
                    model.add_constraint({{1, h.xbit[i][e][j]}, {-1, h.x[i][e]}},
                                         relation::le, 0, "xbit_x" + a);
                    model.add_constraint({{1, h.xbit[i][e][j]}, {-1, h.x[i][e]}, {-fe, h.wbit[i][j]}},
                                         relation::ge, -fe, "xbit_lo" + a);
                }
            }
        } else {
            detail::add_product_rows(model, net, h.x[i], h.w[i], h.xw[i], wbar, i);
        }
    }
    detail::add_superposition_rows(model, net, h);
    return bm;
}

// ----------------------------------------------------------------------------
// reading solutions back

namespace detail {

// follow the unique selected successor chain of a paths-or-cycles element
inline std::vector<int> chase_selection(const flow_network& net,
                                        const std::vector<long long>& mult,
                                        int from, bool until_repeat) {
    std::vector<int> seq = {from};
    int cur = from;
    for (int steps = 0; steps <= net.edge_count(); ++steps) {
        int chosen = -1;
        for (int e = 0; e < net.edge_count(); ++e) {
            if (mult[e] == 0 || net.edges[e].tail != cur) continue;
            if (chosen >= 0)
                throw std::logic_error("element has two successors at one node");
            chosen = e;
        }
        if (chosen < 0) {
            if (until_repeat)
                throw std::logic_error("cycle chase ran off the selection");
            return seq;
        }
        cur = net.edges[chosen].head;
        seq.push_back(cur);
        if (until_repeat && cur == from) return seq;
    }
    throw std::logic_error("selection chase did not terminate");
}

}  // namespace detail

// Turn a feasible assignment back into weighted elements. Empty elements
// (and, in exactly-k mode, cycle markers that guard no edges) are dropped.
inline decomposition extract_decomposition(const flow_network& net,
                                           const model_handles& h,
                                           const assignment& a) {
    decomposition out;
    out.variant = {h.problem, h.cardinality};
    const int m = net.edge_count();
    for (int i = 0; i < h.k; ++i) {
        std::vector<long long> mult(m, 0);
        long long used = 0;
        for (int e = 0; e < m; ++e) {
            mult[e] = a.at(h.x[i][e]);
            used += mult[e];
        }
        if (used == 0) continue;

        decomposition_element el;
        el.weight = a.at(h.w[i]);
        if (h.problem == problem_variant::paths_or_cycles) {
            long long from_source = 0;
            for (int e = 0; e < m; ++e)
                if (net.edges[e].tail == net.source) from_source += mult[e];
            if (from_source > 0) {
                el.kind = element_kind::path;
                el.node_sequence = detail::chase_selection(net, mult, net.source, false);
                if (el.node_sequence.back() != net.sink)
                    throw std::logic_error("path element does not reach the sink");
            } else {
                el.kind = element_kind::cycle;
                int anchor = net.node_count;
                for (int e = 0; e < m; ++e)
                    if (mult[e] > 0) anchor = std::min(anchor, net.edges[e].tail);
                el.node_sequence = detail::chase_selection(net, mult, anchor, true);
            }
            if (static_cast<long long>(el.node_sequence.size()) != used + 1)
                throw std::logic_error("element selected more than one shape");
        } else {
            el.node_sequence = euler_walk(net.source, net.sink, net.node_count,
                                          net.edges, mult);
        }
        edge_selection sel(m);
        if (!multiplicity_from_sequence(net, el.node_sequence, sel) ||
            sel.multiplicity != mult)
            throw std::logic_error("extracted sequence does not match selection");
        el.edge_multiplicity = sel;
        if (h.problem != problem_variant::paths_or_cycles)
            el.kind = classify_element(el.node_sequence, sel);
        out.elements.push_back(std::move(el));
    }
    return out;
}

// Exact replay of the product linearizations on a solved assignment; any
// string returned names an identity that does not hold.
inline std::vector<std::string> check_linearization_identities(
    const flow_network& net, const model_handles& h, const assignment& a) {
    std::vector<std::string> bad;
    const int m = net.edge_count();
    for (int e = 0; e < m; ++e) {
        long long rebuilt = 0;
        for (int i = 0; i < h.k; ++i) {
            const long long w = a.at(h.w[i]);
            const long long x = a.at(h.x[i][e]);
            if (h.problem == problem_variant::walks) {
                long long digits = 0;
                for (int j = 0; j < h.bits; ++j) {
                    const long long bit = a.at(h.wbit[i][j]);
                    const long long xb = a.at(h.xbit[i][e][j]);
                    if (xb != bit * x)
                        bad.push_back("xbit[" + std::to_string(i) + "](" +
                                      detail::arc(net, e) + ")#" + std::to_string(j) +
                                      " is not wbit*x");
                    digits += (1LL << j) * xb;
                }
                rebuilt += digits;
            } else {
                const long long xw = a.at(h.xw[i][e]);
                if (xw != x * w)
                    bad.push_back("xw[" + std::to_string(i) + "](" +
                                  detail::arc(net, e) + ") is not x*w");
                rebuilt += xw;
            }
        }
        if (rebuilt != net.edges[e].flow)
            bad.push_back("flow(" + detail::arc(net, e) + ") is not rebuilt");
    }
    if (h.problem == problem_variant::walks) {
        for (int i = 0; i < h.k; ++i) {
            long long w = 0;
            for (int j = 0; j < h.bits; ++j)
                w += (1LL << j) * a.at(h.wbit[i][j]);
            if (w != a.at(h.w[i]))
                bad.push_back("w[" + std::to_string(i) + "] digits do not add up");
        }
    }
    if (h.problem == problem_variant::walks ||
        h.problem == problem_variant::trails_reach) {
        for (int i = 0; i < h.k; ++i)
            for (int e = 0; e < m; ++e) {
                const long long par = a.at(h.par[i][e]);
                const long long gap = a.at(h.dep[i][net.edges[e].head]) -
                                      a.at(h.dep[i][net.edges[e].tail]);
                if (a.at(h.ydiff[i][e]) != par * gap)
                    bad.push_back("ydiff[" + std::to_string(i) + "](" +
                                  detail::arc(net, e) + ") is not par*gap");
            }
    }
    return bad;
}

}  // namespace flowdec
