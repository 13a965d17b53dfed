#pragma once

// Command-line front end: decompose, verify, gen, bench. Exit codes:
//   0 success
//   1 usage, parse, generation or solver errors
//   2 infeasible trails when --fail-on-infeasible is set, or a failed verify
//   3 solver backend missing
// When several apply the most actionable wins: 3 over 1 over 2 over 0.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "generator.hpp"
#include "json_io.hpp"
#include "search.hpp"
#include "verify.hpp"

namespace flowdec {

namespace detail {

// exit-code precedence 3 > 1 > 2 > 0
inline int worse_exit(int a, int b) {
    auto rank = [](int c) {
        switch (c) {
            case 3: return 3;
            case 1: return 2;
            case 2: return 1;
            default: return 0;
        }
    };
    return rank(a) >= rank(b) ? a : b;
}

inline std::vector<flow_network> load_graphs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(0, "cannot open '" + path + "'");
    return parse_graph_file(in);
}

inline bool is_trail_variant(problem_variant v) {
    return v == problem_variant::trails_cg || v == problem_variant::trails_reach;
}

struct running_stat {
    double sum = 0, sumsq = 0;
    long long n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    double mean() const { return n ? sum / static_cast<double>(n) : 0; }
    double stdev() const {
        if (n < 2) return 0;
        double m = mean();
        double var = sumsq / static_cast<double>(n) - m * m;
        return var > 0 ? std::sqrt(var) : 0;
    }
};

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// decompose

inline int cmd_decompose(const std::string& input, problem_variant variant,
                         search_strategy strategy, int exactly_k,
                         double timeout, double per_probe, int component_cap,
                         const std::string& json_path, bool fail_on_infeasible) {
    std::vector<flow_network> nets;
    try {
        nets = detail::load_graphs(input);
    } catch (const parse_error& e) {
        std::cerr << input << ": " << e.what() << "\n";
        return 1;
    }

    const bool quiet = json_path == "-";
    int exit_code = 0;
    std::vector<witness_record> records;
    for (const auto& net : nets) {
        witness_record rec;
        rec.instance = net.name;
        rec.dec.variant = {variant, cardinality_mode::at_most_k};
        int severity = 0;

        if (exactly_k >= 1) {
            rec.mode = "fixed-k";
            auto r = solve_fixed_k(net, exactly_k,
                                   {variant, cardinality_mode::exactly_k},
                                   timeout, component_cap);
            rec.status = probe_verdict_name(r.verdict);
            rec.total_seconds = r.seconds;
            rec.detail = r.detail;
            rec.probes.push_back({exactly_k, r.verdict, r.seconds, r.cg_rounds,
                                  r.components_added});
            switch (r.verdict) {
                case probe_verdict::feasible:
                    rec.k_star = exactly_k;
                    rec.dec = std::move(r.dec);
                    break;
                case probe_verdict::infeasible:
                    if (fail_on_infeasible && detail::is_trail_variant(variant))
                        severity = 2;
                    break;
                case probe_verdict::backend_unavailable: severity = 3; break;
                default: severity = 1; break;
            }
        } else {
            auto rep = min_k(net, variant, strategy,
                             {per_probe, timeout, component_cap});
            rec.status = search_outcome_name(rep.outcome);
            rec.k_star = rep.k_star;
            rec.probes = rep.probes;
            rec.total_seconds = rep.total_seconds;
            rec.detail = rep.detail;
            switch (rep.outcome) {
                case search_outcome::found:
                    rec.dec = std::move(rep.witness);
                    break;
                case search_outcome::infeasible_up_to_m:
                    if (fail_on_infeasible && detail::is_trail_variant(variant))
                        severity = 2;
                    break;
                case search_outcome::backend_unavailable: severity = 3; break;
                default: severity = 1; break;
            }
        }
        rec.dec.variant.problem = variant;

        if (!quiet) {
            std::cout << rec.instance << " [" << variant_name(variant) << "] "
                      << rec.status;
            if (rec.k_star >= 0 && rec.status != "infeasible")
                std::cout << " k=" << rec.k_star;
            std::cout << " (" << detail::fmt(rec.total_seconds) << " s)";
            if (!rec.detail.empty()) std::cout << " — " << rec.detail;
            std::cout << "\n";
        }
        exit_code = detail::worse_exit(exit_code, severity);
        records.push_back(std::move(rec));
    }

    if (!json_path.empty()) {
        auto doc = witness_document(records);
        if (json_path == "-") {
            std::cout << doc.dump(2) << "\n";
        } else {
            std::ofstream out(json_path);
            if (!out) {
                std::cerr << "cannot write '" << json_path << "'\n";
                return detail::worse_exit(exit_code, 1);
            }
            out << doc.dump(2) << "\n";
        }
    }
    return exit_code;
}

// ---------------------------------------------------------------------------
// verify

inline int cmd_verify(const std::string& graph_path,
                      const std::string& witness_path,
                      const std::string& variant_override) {
    std::vector<flow_network> nets;
    try {
        nets = detail::load_graphs(graph_path);
    } catch (const parse_error& e) {
        std::cerr << graph_path << ": " << e.what() << "\n";
        return 1;
    }
    std::ifstream in(witness_path);
    if (!in) {
        std::cerr << "cannot open '" << witness_path << "'\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto records = read_witness_document(buf.str());
    if (!records) {
        std::cerr << witness_path << ": malformed witness document\n";
        return 1;
    }

    problem_variant forced{};
    const bool have_override =
        !variant_override.empty() && variant_from_name(variant_override, forced);
    if (!variant_override.empty() && !have_override) {
        std::cerr << "unknown variant '" << variant_override << "'\n";
        return 1;
    }

    int exit_code = 0;
    int checked = 0;
    for (auto& rec : *records) {
        if (rec.status != "found" && rec.status != "feasible" &&
            rec.status != "generated")
            continue;  // nothing claimed, nothing to check
        const flow_network* net = nullptr;
        for (const auto& n : nets)
            if (n.name == rec.instance) net = &n;
        if (!net) {
            std::cerr << "witness references unknown instance '" << rec.instance
                      << "'\n";
            exit_code = detail::worse_exit(exit_code, 1);
            continue;
        }
        // the document carries node sequences only; derive the multiplicities
        for (auto& el : rec.dec.elements)
            multiplicity_from_sequence(*net, el.node_sequence,
                                       el.edge_multiplicity);
        auto variant = have_override ? forced : rec.dec.variant.problem;
        auto bad = verify_decomposition(*net, rec.dec, variant);
        ++checked;
        if (bad.empty()) {
            std::cout << rec.instance << " [" << variant_name(variant)
                      << "] ok\n";
            continue;
        }
        exit_code = detail::worse_exit(exit_code, 2);
        for (const auto& v : bad)
            std::cout << rec.instance << " [" << variant_name(variant) << "] "
                      << v << "\n";
    }
    if (checked == 0) std::cout << "nothing to verify\n";
    return exit_code;
}

// ---------------------------------------------------------------------------
// gen

inline int cmd_gen(int nodes, int elements, problem_variant variant, int count,
                   std::uint64_t seed, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "cannot create '" << out_dir << "': " << ec.message()
                  << "\n";
        return 1;
    }
    for (int i = 0; i < count; ++i) {
        auto gen = generate_instance(nodes, elements,
                                     {variant, cardinality_mode::at_most_k},
                                     seed + static_cast<std::uint64_t>(i));
        auto bad = validate(gen.network);
        if (bad.empty())
            bad = verify_decomposition(gen.network, gen.generating, variant);
        if (!bad.empty()) {
            std::cerr << gen.network.name
                      << ": generator self-check failed: " << bad.front()
                      << "\n";
            return 1;
        }
        fs::path graph_path = fs::path(out_dir) / (gen.network.name + ".graph");
        std::ofstream gout(graph_path);
        gout << serialize_graph(gen.network);
        if (!gout) {
            std::cerr << "cannot write '" << graph_path.string() << "'\n";
            return 1;
        }
        witness_record rec;
        rec.instance = gen.network.name;
        rec.mode = "generated";
        rec.status = "generated";
        rec.k_star = static_cast<int>(gen.generating.elements.size());
        rec.dec = gen.generating;
        fs::path side_path =
            fs::path(out_dir) / (gen.network.name + ".witness.json");
        std::ofstream sout(side_path);
        sout << witness_document({rec}).dump(2) << "\n";
        if (!sout) {
            std::cerr << "cannot write '" << side_path.string() << "'\n";
            return 1;
        }
        std::cout << graph_path.string() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bench

inline int cmd_bench(const std::string& input,
                     const std::vector<problem_variant>& variants,
                     const std::vector<long long>& bucket_bounds, int jobs,
                     double timeout, const std::string& csv_path) {
    namespace fs = std::filesystem;

    std::vector<std::string> files;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::directory_iterator(input))
            if (entry.is_regular_file() && entry.path().extension() == ".graph")
                files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
    } else if (fs::exists(input)) {
        files.push_back(input);
    }
    std::vector<flow_network> nets;
    try {
        for (const auto& f : files)
            for (auto& net : detail::load_graphs(f)) nets.push_back(std::move(net));
    } catch (const parse_error& e) {
        std::cerr << input << ": " << e.what() << "\n";
        return 1;
    }
    if (nets.empty()) {
        std::cerr << input << ": no instances found\n";
        return 1;
    }

    struct cell {
        search_outcome outcome = search_outcome::error;
        int k_star = -1;
        double seconds = 0;
        int cg_rounds = 0;
    };
    const size_t v_count = variants.size();
    std::vector<cell> cells(nets.size() * v_count);

    std::atomic<size_t> next{0};
    auto work = [&]() {
        while (true) {
            size_t task = next.fetch_add(1);
            if (task >= cells.size()) return;
            const auto& net = nets[task / v_count];
            auto variant = variants[task % v_count];
            auto rep = min_k(net, variant, search_strategy::doubling,
                             {60, timeout, 1000});
            cell c;
            c.outcome = rep.outcome;
            c.k_star = rep.k_star;
            c.seconds = rep.total_seconds;
            for (const auto& p : rep.probes) c.cg_rounds += p.cg_rounds;
            cells[task] = c;
        }
    };
    if (jobs <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // bucket instances by k*(pc) when pc was benchmarked
    int pc_pos = -1;
    for (size_t v = 0; v < v_count; ++v)
        if (variants[v] == problem_variant::paths_or_cycles)
            pc_pos = static_cast<int>(v);
    auto bucket_label = [&](size_t inst) -> std::string {
        if (pc_pos < 0) return "all";
        const auto& c = cells[inst * v_count + static_cast<size_t>(pc_pos)];
        if (c.outcome != search_outcome::found) return "unsolved";
        long long lo = 1;
        for (long long hi : bucket_bounds) {
            if (c.k_star <= hi)
                return std::to_string(lo) + "-" + std::to_string(hi);
            lo = hi + 1;
        }
        return std::to_string(lo) + "+";
    };

    // first trail variant benchmarked feeds the feasibility percentage
    int trail_pos = -1;
    for (size_t v = 0; v < v_count; ++v)
        if (detail::is_trail_variant(variants[v]) && trail_pos < 0)
            trail_pos = static_cast<int>(v);

    std::vector<std::string> order;  // buckets in first-seen order, then "all"
    std::vector<std::string> labels(nets.size());
    for (size_t i = 0; i < nets.size(); ++i) {
        labels[i] = bucket_label(i);
        if (std::find(order.begin(), order.end(), labels[i]) == order.end())
            order.push_back(labels[i]);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        auto head = [](const std::string& s) {
            size_t cut = s.find_first_not_of("0123456789");
            return cut == 0 ? std::numeric_limits<long long>::max()
                            : std::stoll(s.substr(0, cut == std::string::npos
                                                         ? s.size()
                                                         : cut));
        };
        return head(a) < head(b);
    });
    order.push_back("all");

    std::ostringstream csv;
    csv << "bucket,instances,n_mean,n_std,m_mean,m_std";
    for (auto v : variants) {
        auto name = variant_name(v);
        csv << "," << name << "_k_mean," << name << "_k_std," << name
            << "_seconds_mean," << name << "_seconds_std," << name
            << "_cg_rounds_mean";
    }
    if (trail_pos >= 0) csv << ",trail_feasible_pct";
    csv << "\n";

    for (const auto& bucket : order) {
        long long count = 0;
        detail::running_stat n_stat, m_stat;
        std::vector<detail::running_stat> k_stat(v_count), sec_stat(v_count),
            cg_stat(v_count);
        long long trail_total = 0, trail_feasible = 0;
        for (size_t i = 0; i < nets.size(); ++i) {
            if (bucket != "all" && labels[i] != bucket) continue;
            ++count;
            n_stat.add(static_cast<double>(nets[i].node_count));
            m_stat.add(static_cast<double>(nets[i].edge_count()));
            for (size_t v = 0; v < v_count; ++v) {
                const auto& c = cells[i * v_count + v];
                sec_stat[v].add(c.seconds);
                cg_stat[v].add(c.cg_rounds);
                if (c.outcome == search_outcome::found)
                    k_stat[v].add(c.k_star);
                if (static_cast<int>(v) == trail_pos) {
                    ++trail_total;
                    if (c.outcome == search_outcome::found) ++trail_feasible;
                }
            }
        }
        if (count == 0) continue;
        csv << bucket << "," << count << "," << detail::fmt(n_stat.mean())
            << "," << detail::fmt(n_stat.stdev()) << ","
            << detail::fmt(m_stat.mean()) << "," << detail::fmt(m_stat.stdev());
        for (size_t v = 0; v < v_count; ++v) {
            csv << ",";
            if (k_stat[v].n) csv << detail::fmt(k_stat[v].mean());
            csv << ",";
            if (k_stat[v].n) csv << detail::fmt(k_stat[v].stdev());
            csv << "," << detail::fmt(sec_stat[v].mean()) << ","
                << detail::fmt(sec_stat[v].stdev()) << ","
                << detail::fmt(cg_stat[v].mean());
        }
        if (trail_pos >= 0)
            csv << ","
                << detail::fmt(trail_total ? 100.0 *
                                                 static_cast<double>(
                                                     trail_feasible) /
                                                 static_cast<double>(trail_total)
                                           : 0);
        csv << "\n";
    }

    if (csv_path.empty() || csv_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(csv_path);
        out << csv.str();
        if (!out) {
            std::cerr << "cannot write '" << csv_path << "'\n";
            return 1;
        }
    }

    // surface solver failures after reporting: they make the stats partial
    for (size_t i = 0; i < nets.size(); ++i)
        for (size_t v = 0; v < v_count; ++v) {
            auto o = cells[i * v_count + v].outcome;
            if (o == search_outcome::backend_unavailable) return 3;
            if (o == search_outcome::error ||
                o == search_outcome::budget_exceeded)
                return 1;
        }
    return 0;
}

// ---------------------------------------------------------------------------
// argument wiring

inline int run_cli(int argc, const char* const* argv) {
    CLI::App app{"exact minimum flow decomposition into paths/cycles, trails, "
                 "or walks on directed graphs with cycles"};
    app.require_subcommand(1);

    const std::vector<std::string> variant_names = {"pc", "trail-cg",
                                                    "trail-reach", "walk"};

    // decompose
    auto* dec = app.add_subcommand("decompose",
                                   "find the minimum number of elements");
    std::string dec_input, dec_variant, dec_strategy = "doubling";
    std::string dec_json;
    int dec_exactly = 0, dec_cap = 1000;
    double dec_timeout = 600, dec_probe_timeout = 60;
    bool dec_fail_infeasible = false;
    dec->add_option("input", dec_input, "graph file")->required();
    dec->add_option("--variant", dec_variant, "problem variant")
        ->required()
        ->check(CLI::IsMember(variant_names));
    dec->add_option("--strategy", dec_strategy, "search strategy")
        ->check(CLI::IsMember({"linear", "doubling"}));
    dec->add_option("--exactly-k", dec_exactly,
                    "probe exactly this k instead of searching");
    dec->add_option("--timeout", dec_timeout, "total seconds per instance");
    dec->add_option("--per-probe-timeout", dec_probe_timeout,
                    "seconds per feasibility probe");
    dec->add_option("--component-cap", dec_cap,
                    "constraint-generation component cap");
    dec->add_option("--json", dec_json, "witness JSON path ('-' for stdout)");
    dec->add_flag("--fail-on-infeasible", dec_fail_infeasible,
                  "exit 2 when a trail instance is infeasible");

    // verify
    auto* ver = app.add_subcommand("verify", "check a witness document");
    std::string ver_graph, ver_witness, ver_variant;
    ver->add_option("graph", ver_graph, "graph file")->required();
    ver->add_option("witness", ver_witness, "witness JSON file")->required();
    ver->add_option("--variant", ver_variant,
                    "check under this variant instead of the recorded one")
        ->check(CLI::IsMember(variant_names));

    // gen
    auto* gen = app.add_subcommand("gen", "generate feasible instances");
    int gen_nodes = 6, gen_elements = 3, gen_count = 1;
    std::uint64_t gen_seed = 1;
    std::string gen_variant, gen_out = ".";
    gen->add_option("--nodes", gen_nodes, "node budget")->required();
    gen->add_option("--elements", gen_elements, "generating element count")
        ->required();
    gen->add_option("--variant", gen_variant, "element variant")
        ->required()
        ->check(CLI::IsMember(variant_names));
    gen->add_option("--count", gen_count, "number of instances");
    gen->add_option("--seed", gen_seed, "base seed");
    gen->add_option("--out", gen_out, "output directory");

    // bench
    auto* ben = app.add_subcommand("bench", "benchmark a directory of graphs");
    std::string ben_input, ben_variants = "pc,trail-cg,trail-reach,walk";
    std::string ben_buckets = "3,10,15,20", ben_csv;
    int ben_jobs = 1;
    double ben_timeout = 600;
    ben->add_option("input", ben_input, "graph file or directory")->required();
    ben->add_option("--variants", ben_variants, "comma-separated variants");
    ben->add_option("--buckets", ben_buckets,
                    "comma-separated upper bounds for k*(pc) buckets");
    ben->add_option("--jobs", ben_jobs, "parallel instances");
    ben->add_option("--timeout", ben_timeout, "total seconds per variant run");
    ben->add_option("--csv", ben_csv, "CSV path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (dec->parsed()) {
        problem_variant variant{};
        variant_from_name(dec_variant, variant);
        auto strategy = dec_strategy == "linear" ? search_strategy::linear
                                                 : search_strategy::doubling;
        return cmd_decompose(dec_input, variant, strategy, dec_exactly,
                             dec_timeout, dec_probe_timeout, dec_cap, dec_json,
                             dec_fail_infeasible);
    }
    if (ver->parsed()) return cmd_verify(ver_graph, ver_witness, ver_variant);
    if (gen->parsed()) {
        problem_variant variant{};
        variant_from_name(gen_variant, variant);
        return cmd_gen(gen_nodes, gen_elements, variant, gen_count, gen_seed,
                       gen_out);
    }
    if (ben->parsed()) {
        std::vector<problem_variant> variants;
        std::stringstream names(ben_variants);
        std::string name;
        while (std::getline(names, name, ',')) {
            problem_variant v{};
            if (!variant_from_name(name, v)) {
                std::cerr << "unknown variant '" << name << "'\n";
                return 1;
            }
            variants.push_back(v);
        }
        std::vector<long long> bounds;
        std::stringstream nums(ben_buckets);
        while (std::getline(nums, name, ',')) {
            try {
                bounds.push_back(std::stoll(name));
            } catch (const std::exception&) {
                std::cerr << "bad bucket bound '" << name << "'\n";
                return 1;
            }
        }
        if (variants.empty() || bounds.empty() ||
            !std::is_sorted(bounds.begin(), bounds.end())) {
            std::cerr << "need at least one variant and ascending buckets\n";
            return 1;
        }
        return cmd_bench(ben_input, variants, bounds, ben_jobs, ben_timeout,
                         ben_csv);
    }
    return 1;
}

}  // namespace flowdec
