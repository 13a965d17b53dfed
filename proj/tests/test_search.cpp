#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <vector>

#include "flowdec/generator.hpp"
#include "flowdec/search.hpp"
#include "test_util.hpp"

using namespace flowdec;
using namespace testutil;

namespace {

std::vector<int> probed_ks(const search_report& rep) {
    std::vector<int> ks;
    for (const auto& p : rep.probes) ks.push_back(p.k);
    return ks;
}

}  // namespace

TEST_CASE("doubling probes 1,2,4,8,6,5 on the k*=5 instance") {
    auto net = kstar5();
    auto rep = min_k(net, problem_variant::paths_or_cycles,
                     search_strategy::doubling);
    INFO("detail " << rep.detail);
    REQUIRE(rep.outcome == search_outcome::found);
    CHECK(rep.k_star == 5);
    CHECK(probed_ks(rep) == std::vector<int>{1, 2, 4, 8, 6, 5});
    CHECK(verify_decomposition(net, rep.witness,
                               problem_variant::paths_or_cycles, 5)
              .empty());

    auto lin = min_k(net, problem_variant::paths_or_cycles,
                     search_strategy::linear);
    REQUIRE(lin.outcome == search_outcome::found);
    CHECK(lin.k_star == 5);
    CHECK(probed_ks(lin) == std::vector<int>{1, 2, 3, 4, 5});
}

TEST_CASE("walks on fig2 settle at k*=1 with a single probe") {
    auto net = fig2();
    for (auto strat : {search_strategy::linear, search_strategy::doubling}) {
        auto rep = min_k(net, problem_variant::walks, strat);
        INFO("strategy " << search_strategy_name(strat) << " detail "
                         << rep.detail);
        REQUIRE(rep.outcome == search_outcome::found);
        CHECK(rep.k_star == 1);
        CHECK(probed_ks(rep) == std::vector<int>{1});
        CHECK(verify_decomposition(net, rep.witness, problem_variant::walks, 1)
                  .empty());
    }
}

TEST_CASE("trails on fig2 are infeasible up to m under both strategies") {
    auto net = fig2();

    auto lin = min_k(net, problem_variant::trails_cg, search_strategy::linear);
    CHECK(lin.outcome == search_outcome::infeasible_up_to_m);
    CHECK(probed_ks(lin) == std::vector<int>{1, 2, 3, 4, 5});
    REQUIRE(lin.probes.size() == 5);
    CHECK(lin.probes[0].cg_rounds == 0);  // k=1 dies on superposition alone
    for (size_t i = 1; i < lin.probes.size(); ++i) {
        CHECK(lin.probes[i].cg_rounds == 1);
        CHECK(lin.probes[i].components_added == 1);
    }

    auto dbl = min_k(net, problem_variant::trails_cg, search_strategy::doubling);
    CHECK(dbl.outcome == search_outcome::infeasible_up_to_m);
    CHECK(probed_ks(dbl) == std::vector<int>{1, 2, 4, 5});

    auto reach = min_k(net, problem_variant::trails_reach,
                       search_strategy::doubling);
    CHECK(reach.outcome == search_outcome::infeasible_up_to_m);
}

TEST_CASE("constraint generation on the trap fixture") {
    auto net = cg_trap();  // cycle flow 2
    variant_spec vspec{problem_variant::trails_cg, cardinality_mode::at_most_k};

    SECTION("k=1 is infeasible before any cut") {
        auto r = solve_fixed_k(net, 1, vspec);
        CHECK(r.verdict == probe_verdict::infeasible);
        CHECK(r.cg_rounds == 0);
        CHECK(r.components_added == 0);
    }
    SECTION("k=2 needs one cut on the isolated cycle, then closes") {
        auto r = solve_fixed_k(net, 2, vspec);
        CHECK(r.verdict == probe_verdict::infeasible);
        CHECK(r.cg_rounds == 1);
        CHECK(r.components_added == 1);
        REQUIRE(r.cg_events.size() == 1);
        const auto& ev = r.cg_events[0];
        // the trapped component is the 1<->2 cycle; its only escape is (1,3)
        std::vector<int> edges = ev.component.edges;
        std::sort(edges.begin(), edges.end());
        CHECK(edges == std::vector<int>{net.find_edge(1, 2), net.find_edge(2, 1)});
        CHECK(ev.component.escape_edges ==
              std::vector<int>{net.find_edge(1, 3)});
        // the triggering element really selected the whole component
        for (int e : ev.component.edges)
            CHECK(ev.element_selection.multiplicity[e] > 0);
    }
    SECTION("the walk model shrugs the trap off at k=1") {
        auto rep = min_k(net, problem_variant::walks);
        REQUIRE(rep.outcome == search_outcome::found);
        CHECK(rep.k_star == 1);
    }
    SECTION("paths-or-cycles settles at 2") {
        auto rep = min_k(net, problem_variant::paths_or_cycles);
        REQUIRE(rep.outcome == search_outcome::found);
        CHECK(rep.k_star == 2);
    }
}

TEST_CASE("hub fixture orders the three variants strictly") {
    auto net = hub();
    auto pc = min_k(net, problem_variant::paths_or_cycles);
    auto tr = min_k(net, problem_variant::trails_cg);
    auto wk = min_k(net, problem_variant::walks);
    REQUIRE(pc.outcome == search_outcome::found);
    REQUIRE(tr.outcome == search_outcome::found);
    REQUIRE(wk.outcome == search_outcome::found);
    CHECK(pc.k_star == 4);
    CHECK(tr.k_star == 3);
    CHECK(wk.k_star == 2);
    CHECK(verify_decomposition(net, pc.witness,
                               problem_variant::paths_or_cycles, 4)
              .empty());
    CHECK(verify_decomposition(net, tr.witness, problem_variant::trails_cg, 3)
              .empty());
    CHECK(verify_decomposition(net, wk.witness, problem_variant::walks, 2)
              .empty());
}

TEST_CASE("both trail formulations agree on the fixtures") {
    for (auto net : {fig2(), hub(), kstar5(), cg_trap(), figure_eight()}) {
        INFO("network " << net.name);
        auto cg = min_k(net, problem_variant::trails_cg);
        auto reach = min_k(net, problem_variant::trails_reach);
        CHECK(cg.outcome == reach.outcome);
        CHECK(cg.k_star == reach.k_star);
    }
}

TEST_CASE("strategies and oracle agree on generated instances") {
    for (std::uint64_t seed = 7; seed < 13; ++seed) {
        problem_variant v = seed % 2 ? problem_variant::walks
                                     : problem_variant::paths_or_cycles;
        auto gen =
            generate_instance(4, 2, {v, cardinality_mode::at_most_k}, seed);
        INFO("network " << gen.network.name);
        auto lin = min_k(gen.network, v, search_strategy::linear);
        auto dbl = min_k(gen.network, v, search_strategy::doubling);
        REQUIRE(lin.outcome == search_outcome::found);
        REQUIRE(dbl.outcome == search_outcome::found);
        CHECK(lin.k_star == dbl.k_star);
        CHECK(verify_decomposition(gen.network, dbl.witness, v, dbl.k_star)
                  .empty());
        auto oracle = brute_force_min(gen.network, v, {6, 9, 30});
        if (oracle.found()) CHECK(oracle.k_star == dbl.k_star);
    }
}

TEST_CASE("fixed-k probes honor the exactly-k cardinality") {
    auto net = fig2();
    SECTION("walks exactly 1 is feasible, exactly 2 is not") {
        auto one = solve_fixed_k(
            net, 1, {problem_variant::walks, cardinality_mode::exactly_k});
        CHECK(one.verdict == probe_verdict::feasible);
        auto two = solve_fixed_k(
            net, 2, {problem_variant::walks, cardinality_mode::exactly_k});
        CHECK(two.verdict == probe_verdict::infeasible);
    }
    SECTION("paths-or-cycles exactly 4 pads with idle cycle markers") {
        auto r = solve_fixed_k(
            net, 4,
            {problem_variant::paths_or_cycles, cardinality_mode::exactly_k});
        REQUIRE(r.verdict == probe_verdict::feasible);
        CHECK(r.dec.elements.size() >= 2);
        CHECK(r.dec.elements.size() <= 4);
        CHECK(verify_decomposition(net, r.dec,
                                   problem_variant::paths_or_cycles, 4)
                  .empty());
    }
}

TEST_CASE("a zero total budget aborts before the first probe") {
    auto net = fig2();
    search_budget budget;
    budget.total_seconds = 0;
    auto rep = min_k(net, problem_variant::walks, search_strategy::doubling,
                     budget);
    CHECK(rep.outcome == search_outcome::budget_exceeded);
    CHECK(rep.probes.empty());
}

TEST_CASE("an unknown backend surfaces as backend_unavailable") {
    setenv("FLOWDEC_MILP_BACKEND", "no-such-solver", 1);
    auto rep = min_k(fig2(), problem_variant::walks);
    unsetenv("FLOWDEC_MILP_BACKEND");
    CHECK(rep.outcome == search_outcome::backend_unavailable);
    REQUIRE(rep.probes.size() == 1);
    CHECK(rep.probes[0].verdict == probe_verdict::backend_unavailable);

    auto fixed = solve_fixed_k(
        fig2(), 1, {problem_variant::walks, cardinality_mode::at_most_k});
    CHECK(fixed.verdict == probe_verdict::feasible);  // env restored
}
