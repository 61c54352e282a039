#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "locpc/bench.hpp"
#include "locpc/cpdag.hpp"
#include "locpc/datagen.hpp"
#include "locpc/discovery.hpp"
#include "locpc/local.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

locpc::NodeId resolve_node(const std::vector<std::string>& names, const std::string& token) {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == token) return static_cast<locpc::NodeId>(i);
    return std::stoi(token);
}

nlohmann::json report_json(const locpc::CdeReport& report,
                           const std::vector<std::string>& names) {
    nlohmann::json out;
    out["identifiable"] = report.identifiable;
    if (report.adjustment_set) {
        nlohmann::json set = nlohmann::json::array();
        for (locpc::NodeId v : *report.adjustment_set) set.push_back(names[v]);
        out["adjustment_set"] = set;
    } else {
        out["adjustment_set"] = nullptr;
    }
    out["hops_used"] = report.hops_used;
    out["stop_reason"] = locpc::to_string(report.stop_reason);
    out["ci_count"] = report.ci_count;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local causal discovery around a target variable"};
    app.require_subcommand(1);

    // oracle-leg
    std::string dag_path, target_token;
    int hop = 0;
    bool check_noc = false;
    auto* oracle_leg = app.add_subcommand(
        "oracle-leg", "Construct the local essential graph from a DAG file");
    oracle_leg->add_option("--dag", dag_path, "edge-list DAG file")->required();
    oracle_leg->add_option("--target", target_token, "target node")->required();
    oracle_leg->add_option("--hop", hop, "neighborhood hop")->required();
    oracle_leg->add_flag("--check-noc", check_noc,
                         "also print the grown candidate set and the NOC verdict");

    // discover
    std::string data_path, treatment_token, bk_path, audit_path, kind_name = "continuous";
    double alpha = 0.05;
    auto* discover = app.add_subcommand("discover", "Decide CDE identifiability from data");
    discover->add_option("--data", data_path, "CSV dataset")->required();
    discover->add_option("--target", target_token, "outcome variable")->required();
    discover->add_option("--treatment", treatment_token, "treatment variable")->required();
    discover->add_option("--alpha", alpha, "significance level");
    discover->add_option("--kind", kind_name, "continuous or binary");
    discover->add_option("--bk", bk_path, "background knowledge file (nondesc lines)");
    discover->add_option("--audit", audit_path, "write one line per CI query");

    // generate
    int n_vars = 10, n_samples = 5000;
    std::uint64_t seed = 7;
    std::string setting = "linear", out_dag, out_data, out_meta;
    bool want_identifiable = false, want_non_identifiable = false;
    auto* generate = app.add_subcommand("generate", "Sample a benchmark instance");
    generate->add_option("--n-vars", n_vars, "number of variables");
    generate->add_option("--setting", setting, "linear or binary");
    generate->add_flag("--identifiable", want_identifiable, "require identifiable effect");
    generate->add_flag("--non-identifiable", want_non_identifiable,
                       "require non-identifiable effect");
    generate->add_option("--samples", n_samples, "sample count");
    generate->add_option("--seed", seed, "random seed");
    generate->add_option("--out-dag", out_dag, "DAG output path");
    generate->add_option("--out-data", out_data, "CSV output path");
    generate->add_option("--out-meta", out_meta, "metadata JSON output path");

    // bench
    locpc::BenchConfig cfg;
    std::string sizes_arg = "10,20,50", out_csv = "results.csv";
    bool bench_identifiable = false, bench_non_identifiable = false, bench_oracle = false;
    auto* bench = app.add_subcommand("bench", "Run the benchmark sweep");
    bench->add_option("--setting", setting, "linear or binary");
    bench->add_flag("--identifiable", bench_identifiable, "identifiable ground truth");
    bench->add_flag("--non-identifiable", bench_non_identifiable,
                    "non-identifiable ground truth");
    bench->add_option("--sizes", sizes_arg, "comma-separated variable counts");
    bench->add_option("--reps", cfg.reps, "replicates per size");
    bench->add_option("--alpha", cfg.alpha, "significance level");
    bench->add_option("--samples", cfg.n_samples, "sample count");
    bench->add_option("--seed", cfg.seed, "random seed");
    bench->add_option("--out", out_csv, "records CSV path");
    bench->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    bench->add_flag("--oracle", bench_oracle, "answer CI queries from the true DAG");

    // summarize
    std::string in_csv, out_summary, out_json;
    auto* summarize_cmd = app.add_subcommand("summarize", "Aggregate a records CSV");
    summarize_cmd->add_option("--in", in_csv, "records CSV")->required();
    summarize_cmd->add_option("--out", out_summary, "summary CSV path")->required();
    summarize_cmd->add_option("--json", out_json, "summary JSON path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle_leg->parsed()) {
            locpc::Dag g = locpc::parse_dag(read_file(dag_path));
            locpc::NodeId y = resolve_node(g.names(), target_token);
            locpc::Leg leg = locpc::build_true_leg(g, y, hop);
            std::cout << locpc::to_text(leg);
            if (check_noc) {
                locpc::NodeSet grown =
                    locpc::grow_noc_candidate(leg, locpc::NodeSet{y});
                std::cout << "candidate";
                for (locpc::NodeId v : grown) std::cout << " " << v;
                std::cout << "\nnoc "
                          << (locpc::noc_satisfied(leg, grown) ? "satisfied" : "violated")
                          << "\n";
            }
            return 0;
        }

        if (discover->parsed()) {
            auto kind = kind_name == "binary" ? locpc::DataKind::Binary
                                              : locpc::DataKind::Continuous;
            locpc::Dataset data = locpc::Dataset::from_csv(read_file(data_path), kind);
            locpc::NodeId y = resolve_node(data.names, target_token);
            locpc::NodeId x = resolve_node(data.names, treatment_token);
            locpc::BackgroundKnowledge bk;
            if (!bk_path.empty())
                bk = locpc::BackgroundKnowledge::parse(read_file(bk_path), data.names);

            std::shared_ptr<locpc::CiSource> base =
                kind == locpc::DataKind::Binary
                    ? locpc::g_square_source(data, alpha)
                    : locpc::fisher_z_source(data, alpha);
            std::ofstream audit_stream;
            if (!audit_path.empty()) {
                audit_stream.open(audit_path);
                if (!audit_stream) throw std::runtime_error("cannot write " + audit_path);
                base = std::make_shared<locpc::AuditCi>(base, audit_stream);
            }
            auto source = locpc::counted(base);
            locpc::CdeReport report = locpc::loc_pc_cde(source, data.n_vars, x, y, bk);
            std::cout << report_json(report, data.names).dump(2) << "\n";
            std::cout << locpc::to_text(report.leg);
            return 0;
        }

        if (generate->parsed()) {
            if (want_identifiable == want_non_identifiable)
                throw std::runtime_error(
                    "generate: pass exactly one of --identifiable/--non-identifiable");
            auto kind = setting == "binary" ? locpc::ScmKind::BinaryLogistic
                                            : locpc::ScmKind::LinearGaussian;
            locpc::BenchInstance inst =
                locpc::gen_instance(n_vars, want_identifiable, seed, kind);
            locpc::Dataset data = locpc::simulate(inst.scm, n_samples);
            if (!out_dag.empty()) write_file(out_dag, locpc::to_text(inst.scm.dag));
            if (!out_data.empty()) write_file(out_data, data.to_csv());
            if (!out_meta.empty()) write_file(out_meta, locpc::instance_meta_json(inst));
            std::cout << "instance n=" << n_vars << " treatment="
                      << inst.scm.dag.names()[inst.treatment]
                      << " target=" << inst.scm.dag.names()[inst.target]
                      << " identifiable=" << (inst.identifiable ? "true" : "false")
                      << "\n";
            return 0;
        }

        if (bench->parsed()) {
            if (bench_identifiable == bench_non_identifiable)
                throw std::runtime_error(
                    "bench: pass exactly one of --identifiable/--non-identifiable");
            cfg.identifiable = bench_identifiable;
            cfg.setting = setting == "binary" ? locpc::ScmKind::BinaryLogistic
                                              : locpc::ScmKind::LinearGaussian;
            cfg.oracle = bench_oracle;
            cfg.sizes.clear();
            std::istringstream sizes_in(sizes_arg);
            std::string token;
            while (std::getline(sizes_in, token, ','))
                cfg.sizes.push_back(std::stoi(token));
            auto records = locpc::run_benchmark(cfg);
            write_file(out_csv, locpc::records_to_csv(records));
            std::cout << locpc::summary_to_csv(locpc::summarize(records));
            return 0;
        }

        if (summarize_cmd->parsed()) {
            auto records = locpc::records_from_csv(read_file(in_csv));
            auto rows = locpc::summarize(records);
            write_file(out_summary, locpc::summary_to_csv(rows));
            if (!out_json.empty()) write_file(out_json, locpc::summary_to_json(rows));
            return 0;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
