#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flowdec/cli.hpp"
#include "test_util.hpp"

using namespace flowdec;
using namespace testutil;
namespace fs = std::filesystem;

namespace {

struct cli_run {
    int exit_code = 0;
    std::string out;
    std::string err;
};

cli_run run(std::vector<std::string> args) {
    args.insert(args.begin(), "flowdec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    auto* old_out = std::cout.rdbuf(out.rdbuf());
    auto* old_err = std::cerr.rdbuf(err.rdbuf());
    cli_run r;
    try {
        r.exit_code = run_cli(static_cast<int>(argv.size()), argv.data());
    } catch (...) {
        std::cout.rdbuf(old_out);
        std::cerr.rdbuf(old_err);
        throw;
    }
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "flowdec_test_cli";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& body) {
    auto path = work_dir() / name;
    std::ofstream out(path);
    out << body;
    REQUIRE(out.good());
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("decompose answers the fixture triple and exit codes") {
    auto graph = write_file("fig2.graph", fig2_text());

    auto walk = run({"decompose", graph, "--variant", "walk"});
    CHECK(walk.exit_code == 0);
    CHECK(walk.out.find("found k=1") != std::string::npos);

    auto pc = run({"decompose", graph, "--variant", "pc"});
    CHECK(pc.exit_code == 0);
    CHECK(pc.out.find("found k=2") != std::string::npos);

    auto trail = run({"decompose", graph, "--variant", "trail-cg"});
    CHECK(trail.exit_code == 0);
    CHECK(trail.out.find("infeasible-up-to-m") != std::string::npos);

    auto strict = run(
        {"decompose", graph, "--variant", "trail-reach", "--fail-on-infeasible"});
    CHECK(strict.exit_code == 2);

    auto missing = run({"decompose", (work_dir() / "nope.graph").string(),
                        "--variant", "walk"});
    CHECK(missing.exit_code == 1);
}

TEST_CASE("witness JSON round-trips through verify") {
    auto graph = write_file("roundtrip.graph",
                            fig2_text() + kstar5_text() + hub_text());
    auto witness = (work_dir() / "roundtrip.json").string();

    for (std::string variant : {"pc", "trail-reach", "walk"}) {
        auto dec = run({"decompose", graph, "--variant", variant, "--json",
                        witness});
        CHECK(dec.exit_code == 0);
        auto ver = run({"verify", graph, witness});
        CHECK(ver.exit_code == 0);
        CHECK(ver.out.find("ok") != std::string::npos);
    }
}

TEST_CASE("decompose --json - prints only the document") {
    auto graph = write_file("jsononly.graph", fig2_text());
    auto r = run({"decompose", graph, "--variant", "pc", "--json", "-"});
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out, nullptr, false);
    REQUIRE(!doc.is_discarded());
    CHECK(doc["schema"] == 1);
    REQUIRE(doc["results"].size() == 1);
    CHECK(doc["results"][0]["instance"] == "fig2");
    CHECK(doc["results"][0]["k_star"] == 2);
    CHECK(doc["results"][0]["elements"].size() == 2);
    // probe trace is part of the record
    CHECK(doc["results"][0]["probes"].size() >= 2);
}

TEST_CASE("verify rejects tampered and misfiled witnesses") {
    auto graph = write_file("tamper.graph", fig2_text());
    auto witness = (work_dir() / "tamper.json").string();
    REQUIRE(run({"decompose", graph, "--variant", "walk", "--json", witness})
                .exit_code == 0);

    SECTION("malformed JSON exits 1") {
        auto bad = write_file("malformed.json", "{\"results\": [");
        auto r = run({"verify", graph, bad});
        CHECK(r.exit_code == 1);
    }
    SECTION("wrong schema exits 1") {
        auto doc = nlohmann::json::parse(slurp(witness));
        doc["schema"] = 99;
        auto bad = write_file("schema.json", doc.dump());
        CHECK(run({"verify", graph, bad}).exit_code == 1);
    }
    SECTION("perturbed weight exits 2 naming the edge") {
        auto doc = nlohmann::json::parse(slurp(witness));
        doc["results"][0]["elements"][0]["weight"] = 3;
        auto bad = write_file("perturbed.json", doc.dump());
        auto r = run({"verify", graph, bad});
        CHECK(r.exit_code == 2);
        CHECK(r.out.find("edge (0,1)") != std::string::npos);
    }
    SECTION("walk checked as a trail exits 2 with edge repeated") {
        auto r = run({"verify", graph, witness, "--variant", "trail-reach"});
        CHECK(r.exit_code == 2);
        CHECK(r.out.find("edge repeated") != std::string::npos);
    }
    SECTION("witness for an unknown instance exits 1") {
        auto doc = nlohmann::json::parse(slurp(witness));
        doc["results"][0]["instance"] = "who";
        auto bad = write_file("misfiled.json", doc.dump());
        CHECK(run({"verify", graph, bad}).exit_code == 1);
    }
}

TEST_CASE("exactly-k probes a single cardinality") {
    auto graph = write_file("exact.graph", fig2_text());
    auto feasible = run(
        {"decompose", graph, "--variant", "walk", "--exactly-k", "1"});
    CHECK(feasible.exit_code == 0);
    CHECK(feasible.out.find("feasible") != std::string::npos);

    // two walks would push 2 units into the sink edge that carries 1
    auto infeasible = run(
        {"decompose", graph, "--variant", "walk", "--exactly-k", "2"});
    CHECK(infeasible.exit_code == 0);
    CHECK(infeasible.out.find("infeasible") != std::string::npos);
}

TEST_CASE("gen writes instances whose sidecars verify") {
    auto out = (work_dir() / "gen").string();
    fs::remove_all(out);
    auto r = run({"gen", "--nodes", "8", "--elements", "3", "--variant", "walk",
                  "--count", "5", "--seed", "1", "--out", out});
    REQUIRE(r.exit_code == 0);

    int graphs = 0;
    for (const auto& entry : fs::directory_iterator(out)) {
        if (entry.path().extension() != ".graph") continue;
        ++graphs;
        auto graph = entry.path().string();
        auto witness = entry.path();
        witness.replace_extension(".witness.json");
        REQUIRE(fs::exists(witness));
        CHECK(run({"verify", graph, witness.string()}).exit_code == 0);

        auto doc = nlohmann::json::parse(slurp(witness.string()));
        CHECK(doc["results"][0]["elements"].size() <= 3);

        // generated instances parse and validate on their own
        std::ifstream in(graph);
        auto nets = parse_graph_file(in);
        REQUIRE(nets.size() == 1);
        CHECK(validate(nets[0]).empty());
    }
    CHECK(graphs == 5);

    // identical invocation reproduces byte-identical files
    auto again = (work_dir() / "gen_again").string();
    fs::remove_all(again);
    REQUIRE(run({"gen", "--nodes", "8", "--elements", "3", "--variant", "walk",
                 "--count", "5", "--seed", "1", "--out", again})
                .exit_code == 0);
    for (const auto& entry : fs::directory_iterator(out))
        CHECK(slurp(entry.path().string()) ==
              slurp((fs::path(again) / entry.path().filename()).string()));
}

TEST_CASE("bench summarises the fig2-only directory") {
    auto dir = (work_dir() / "benchdir").string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file("benchdir/fig2.graph", fig2_text());

    auto r = run({"bench", dir});
    REQUIRE(r.exit_code == 0);

    std::istringstream lines(r.out);
    std::string header, row;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK(header.rfind("bucket,instances,n_mean,n_std,m_mean,m_std", 0) == 0);
    CHECK(header.find("pc_k_mean") != std::string::npos);
    CHECK(header.find("walk_seconds_mean") != std::string::npos);
    CHECK(header.find("trail-cg_cg_rounds_mean") != std::string::npos);
    CHECK(header.find("trail_feasible_pct") != std::string::npos);

    auto field = [&](const std::string& line, const std::string& name) {
        std::vector<std::string> hs, vs;
        std::istringstream h(header), v(line);
        std::string tok;
        while (std::getline(h, tok, ',')) hs.push_back(tok);
        while (std::getline(v, tok, ',')) vs.push_back(tok);
        for (size_t i = 0; i < hs.size() && i < vs.size(); ++i)
            if (hs[i] == name) return vs[i];
        return std::string("<missing>");
    };
    CHECK(field(row, "bucket") == "1-3");
    CHECK(field(row, "instances") == "1");
    CHECK(field(row, "pc_k_mean") == "2");
    CHECK(field(row, "walk_k_mean") == "1");
    CHECK(field(row, "trail_feasible_pct") == "0");
    // trails never finish feasible, so their k columns stay empty
    CHECK(field(row, "trail-cg_k_mean").empty());
}

TEST_CASE("bench rejects an empty directory and honours variant lists") {
    auto empty = (work_dir() / "benchempty").string();
    fs::remove_all(empty);
    fs::create_directories(empty);
    auto r = run({"bench", empty});
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("no instances") != std::string::npos);

    auto dir = (work_dir() / "benchsubset").string();
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_file("benchsubset/fig2.graph", fig2_text());
    auto subset = run({"bench", dir, "--variants", "walk", "--jobs", "2"});
    REQUIRE(subset.exit_code == 0);
    CHECK(subset.out.find("pc_k_mean") == std::string::npos);
    CHECK(subset.out.find("walk_k_mean") != std::string::npos);

    auto garbage = run({"bench", dir, "--variants", "warp"});
    CHECK(garbage.exit_code == 1);
}

TEST_CASE("usage errors and unknown subcommands exit non-zero") {
    CHECK(run({"decompose"}).exit_code != 0);
    CHECK(run({"decompose", "x.graph", "--variant", "bogus"}).exit_code != 0);
    CHECK(run({"frobnicate"}).exit_code != 0);
    CHECK(run({}).exit_code != 0);
}
