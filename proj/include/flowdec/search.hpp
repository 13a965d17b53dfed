#pragma once

// Fixed-k feasibility probes (with the constraint-generation loop for the
// trail-CG variant) and the outer minimum-k search.

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "backend.hpp"
#include "formulations.hpp"
#include "verify.hpp"

namespace flowdec {

enum class probe_verdict {
    feasible,
    infeasible,
    budget_exceeded,
    backend_unavailable,
    error,
};

inline const char* probe_verdict_name(probe_verdict v) {
    switch (v) {
        case probe_verdict::feasible: return "feasible";
        case probe_verdict::infeasible: return "infeasible";
        case probe_verdict::budget_exceeded: return "budget-exceeded";
        case probe_verdict::backend_unavailable: return "backend-unavailable";
        case probe_verdict::error: return "error";
    }
    return "?";
}

// one cut added by the constraint-generation loop, with the element selection
// that exposed it (kept so checks can replay the violation independently)
struct cg_event {
    int round = 0;
    int element = 0;
    edge_selection element_selection;
    cg_component component;
};

struct fixed_k_result {
    probe_verdict verdict = probe_verdict::error;
    decomposition dec;  // populated when feasible
    int cg_rounds = 0;  // re-solves forced by new cuts
    int components_added = 0;
    std::vector<cg_event> cg_events;
    double seconds = 0;
    std::string detail;
};

struct search_budget {
    double per_probe_seconds = 60;
    double total_seconds = 600;
    int component_cap = 1000;
};

enum class search_strategy { linear, doubling };

inline const char* search_strategy_name(search_strategy s) {
    return s == search_strategy::linear ? "linear" : "doubling";
}

enum class search_outcome {
    found,
    infeasible_up_to_m,
    budget_exceeded,
    backend_unavailable,
    error,
};

inline const char* search_outcome_name(search_outcome o) {
    switch (o) {
        case search_outcome::found: return "found";
        case search_outcome::infeasible_up_to_m: return "infeasible-up-to-m";
        case search_outcome::budget_exceeded: return "budget-exceeded";
        case search_outcome::backend_unavailable: return "backend-unavailable";
        case search_outcome::error: return "error";
    }
    return "?";
}

struct probe_record {
    int k = 0;
    probe_verdict verdict = probe_verdict::error;
    double seconds = 0;
    int cg_rounds = 0;
    int components_added = 0;
};

struct search_report {
    variant_spec variant;
    search_outcome outcome = search_outcome::error;
    int k_star = -1;
    decomposition witness;
    std::vector<probe_record> probes;
    double total_seconds = 0;
    std::string detail;
};

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

inline probe_verdict verdict_of(solve_status s) {
    switch (s) {
        case solve_status::feasible: return probe_verdict::feasible;
        case solve_status::infeasible: return probe_verdict::infeasible;
        case solve_status::budget_exceeded: return probe_verdict::budget_exceeded;
        case solve_status::backend_unavailable:
            return probe_verdict::backend_unavailable;
        case solve_status::error: return probe_verdict::error;
    }
    return probe_verdict::error;
}

// a solved model is only reported feasible after the witness survives the
// linearization replay and the independent decomposition check
inline bool accept_witness(const flow_network& net, const built_model& built,
                           const assignment& a, int k, problem_variant variant,
                           fixed_k_result& out) {
    auto broken = check_linearization_identities(net, built.handles, a);
    if (!broken.empty()) {
        out.verdict = probe_verdict::error;
        out.detail = "linearization identity failed: " + broken.front();
        return false;
    }
    decomposition dec;
    try {
        dec = extract_decomposition(net, built.handles, a);
    } catch (const std::logic_error& e) {
        out.verdict = probe_verdict::error;
        out.detail = std::string("extraction failed: ") + e.what();
        return false;
    }
    auto bad = verify_decomposition(net, dec, variant, k);
    if (!bad.empty()) {
        out.verdict = probe_verdict::error;
        out.detail = "witness failed verification: " + bad.front();
        return false;
    }
    out.verdict = probe_verdict::feasible;
    out.dec = std::move(dec);
    return true;
}

}  // namespace detail

// Decide feasibility of the variant at exactly this k (or at most this k,
// per the variant_spec), returning a verified witness when feasible.
inline fixed_k_result solve_fixed_k(const flow_network& net, int k,
                                    variant_spec vspec,
                                    double budget_seconds = 60,
                                    int component_cap = 1000) {
    const auto t0 = std::chrono::steady_clock::now();
    fixed_k_result out;
    auto done = [&](probe_verdict v, std::string detail = "") {
        out.verdict = v;
        if (!detail.empty()) out.detail = std::move(detail);
        out.seconds = detail::seconds_since(t0);
        return out;
    };

    try {
        if (vspec.problem != problem_variant::trails_cg) {
            built_model built =
                vspec.problem == problem_variant::paths_or_cycles
                    ? build_fdpc(net, k, vspec.cardinality)
                    : build_walk_reach(net, k, vspec.problem, vspec.cardinality);
            auto res = solve_feasibility(built.model, budget_seconds);
            if (res.status != solve_status::feasible)
                return done(detail::verdict_of(res.status), res.detail);
            detail::accept_witness(net, built, res.assign, k, vspec.problem, out);
            return done(out.verdict, out.detail);
        }

        // constraint generation for trails
        std::vector<cg_component> comps;
        std::set<std::vector<int>> known;  // component edge sets already cut
        while (true) {
            double remaining = budget_seconds - detail::seconds_since(t0);
            if (budget_seconds > 0 && remaining <= 0)
                return done(probe_verdict::budget_exceeded,
                            "budget exhausted after " +
                                std::to_string(out.cg_rounds) + " cut rounds");
            built_model built = build_fdt_cg(net, k, comps, vspec.cardinality);
            auto res = solve_feasibility(built.model,
                                         budget_seconds > 0 ? remaining : 0);
            if (res.status != solve_status::feasible)
                return done(detail::verdict_of(res.status), res.detail);

            // connectivity audit of each element's selected edge set
            bool all_connected = true;
            int fresh = 0;
            for (int i = 0; i < k; ++i) {
                edge_selection sel(net.edge_count());
                for (int e = 0; e < net.edge_count(); ++e)
                    sel.multiplicity[e] = res.assign.at(built.handles.x[i][e]);
                auto cert = check_walk_connectivity(net, sel);
                if (cert.ok()) continue;
                all_connected = false;
                auto key = cert.component_edges;
                std::sort(key.begin(), key.end());
                if (!known.insert(key).second) continue;  // already cut
                cg_component comp;
                comp.nodes = cert.component_nodes;
                comp.edges = cert.component_edges;
                comp.escape_edges = cert.escape_edges;
                comps.push_back(comp);
                cg_event ev;
                ev.round = out.cg_rounds;
                ev.element = i;
                ev.element_selection = sel;
                ev.component = std::move(comp);
                out.cg_events.push_back(std::move(ev));
                ++fresh;
            }
            if (all_connected) {
                detail::accept_witness(net, built, res.assign, k, vspec.problem,
                                       out);
                return done(out.verdict, out.detail);
            }
            if (fresh == 0)
                return done(probe_verdict::error,
                            "disconnected selection but every violating "
                            "component was already cut");
            out.components_added += fresh;
            if (static_cast<int>(comps.size()) > component_cap)
                return done(probe_verdict::error,
                            "component cap " + std::to_string(component_cap) +
                                " exceeded");
            ++out.cg_rounds;
        }
    } catch (const std::exception& e) {
        return done(probe_verdict::error, e.what());
    }
}

// Minimum k such that the variant is feasible, probing with the chosen
// strategy. Trails can be infeasible at every k; that is reported once k
// has reached m = |E|, which bounds every variant's minimum when feasible.
inline search_report min_k(const flow_network& net, problem_variant problem,
                           search_strategy strategy = search_strategy::doubling,
                           search_budget budget = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    search_report rep;
    rep.variant = {problem, cardinality_mode::at_most_k};
    const int m = net.edge_count();

    // probes return feasible/infeasible; anything else aborts the search
    bool aborted = false;
    auto probe = [&](int k) -> probe_verdict {
        double remaining = budget.total_seconds - detail::seconds_since(t0);
        if (remaining <= 0) {
            rep.outcome = search_outcome::budget_exceeded;
            rep.detail = "total budget exhausted before probing k=" +
                         std::to_string(k);
            aborted = true;
            return probe_verdict::budget_exceeded;
        }
        auto r = solve_fixed_k(net, k, rep.variant,
                               std::min(budget.per_probe_seconds, remaining),
                               budget.component_cap);
        rep.probes.push_back(
            {k, r.verdict, r.seconds, r.cg_rounds, r.components_added});
        switch (r.verdict) {
            case probe_verdict::feasible:
                rep.witness = std::move(r.dec);
                return r.verdict;
            case probe_verdict::infeasible:
                return r.verdict;
            case probe_verdict::budget_exceeded:
                rep.outcome = search_outcome::budget_exceeded;
                break;
            case probe_verdict::backend_unavailable:
                rep.outcome = search_outcome::backend_unavailable;
                break;
            case probe_verdict::error:
                rep.outcome = search_outcome::error;
                break;
        }
        rep.detail = r.detail;
        aborted = true;
        return r.verdict;
    };
    auto finish = [&]() -> search_report& {
        rep.total_seconds = detail::seconds_since(t0);
        return rep;
    };

    if (strategy == search_strategy::linear) {
        for (int k = 1; k <= m; ++k) {
            auto v = probe(k);
            if (aborted) return finish();
            if (v == probe_verdict::feasible) {
                rep.outcome = search_outcome::found;
                rep.k_star = k;
                return finish();
            }
        }
        rep.outcome = search_outcome::infeasible_up_to_m;
        return finish();
    }

    // doubling phase: 1, 2, 4, ... capped at m
    int last_infeasible = 0;
    int first_feasible = -1;
    int k = 1;
    while (true) {
        auto v = probe(k);
        if (aborted) return finish();
        if (v == probe_verdict::feasible) {
            first_feasible = k;
            break;
        }
        last_infeasible = k;
        if (k == m) {
            rep.outcome = search_outcome::infeasible_up_to_m;
            return finish();
        }
        k = std::min(2 * k, m);
    }
    // binary phase on (last_infeasible, first_feasible]
    int lo = last_infeasible + 1;
    int hi = first_feasible;
    decomposition witness = std::move(rep.witness);
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        auto v = probe(mid);
        if (aborted) return finish();
        if (v == probe_verdict::feasible) {
            hi = mid;
            witness = std::move(rep.witness);
        } else {
            lo = mid + 1;
        }
    }
    rep.outcome = search_outcome::found;
    rep.k_star = hi;
    rep.witness = std::move(witness);
    return finish();
}

}  // namespace flowdec
