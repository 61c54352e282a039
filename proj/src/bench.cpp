#include "locpc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "locpc/cpdag.hpp"
#include "locpc/discovery.hpp"
#include "locpc/local.hpp"

namespace locpc {

void BenchConfig::check() const {
    if (sizes.empty()) throw std::invalid_argument("bench: sizes must be nonempty");
    if (reps < 1) throw std::invalid_argument("bench: reps must be >= 1");
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("bench: alpha in (0,1)");
    if (algorithms.empty()) throw std::invalid_argument("bench: no algorithms selected");
    for (const auto& a : algorithms)
        if (a != "locpc_cde" && a != "pc")
            throw std::invalid_argument("bench: unknown algorithm '" + a + "'");
}

double f1_parents(const NodeSet& estimated, const NodeSet& truth) {
    if (truth.empty()) throw std::invalid_argument("f1_parents: empty truth set");
    if (estimated.empty()) return 0.0;
    int hit = 0;
    for (NodeId v : estimated)
        if (truth.count(v)) ++hit;
    if (hit == 0) return 0.0;
    double precision = static_cast<double>(hit) / estimated.size();
    double recall = static_cast<double>(hit) / truth.size();
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

std::uint64_t task_seed(std::uint64_t base, int n_vars, int replicate) {
    Rng rng(base, (static_cast<std::uint64_t>(n_vars) << 20) + replicate + 11);
    return rng.next_u64();
}

std::vector<BenchRecord> run_one(const BenchConfig& cfg, int n_vars, int replicate) {
    std::vector<BenchRecord> out;
    BenchInstance inst =
        gen_instance(n_vars, cfg.identifiable, task_seed(cfg.seed, n_vars, replicate),
                     cfg.setting);
    Dataset data = cfg.oracle ? Dataset{} : simulate(inst.scm, cfg.n_samples);
    NodeSet true_parents = inst.scm.dag.parents(inst.target);

    for (const auto& algorithm : cfg.algorithms) {
        BenchRecord rec;
        rec.algorithm = algorithm;
        rec.n_vars = n_vars;
        rec.replicate = replicate;
        try {
            std::shared_ptr<CiSource> base;
            if (cfg.oracle) base = oracle_ci(inst.scm.dag);
            else if (cfg.setting == ScmKind::LinearGaussian)
                base = fisher_z_source(data, cfg.alpha);
            else base = g_square_source(data, cfg.alpha);
            auto source = counted(std::move(base));

            auto start = std::chrono::steady_clock::now();
            bool verdict = false;
            NodeSet estimated;
            if (algorithm == "locpc_cde") {
                CdeReport report =
                    loc_pc_cde(source, n_vars, inst.treatment, inst.target);
                verdict = report.identifiable;
                if (report.adjustment_set) estimated = *report.adjustment_set;
            } else {
                Leg cpdag = pc_baseline(source, n_vars);
                verdict = cde_identifiable_from_graph(cpdag, inst.target);
                if (verdict) estimated = cpdag.parents(inst.target);
            }
            auto stop = std::chrono::steady_clock::now();

            rec.wall_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();
            rec.ci_count = source->query_count();
            rec.verdict_correct = verdict == inst.identifiable;
            if (inst.identifiable && verdict)
                rec.f1 = f1_parents(estimated, true_parents);
        } catch (const std::exception&) {
            rec.failed = true;
            rec.verdict_correct = false;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
    cfg.check();
    struct Task {
        int size_index;
        int n_vars;
        int replicate;
    };
    std::vector<Task> tasks;
    for (size_t si = 0; si < cfg.sizes.size(); ++si)
        for (int rep = 0; rep < cfg.reps; ++rep)
            tasks.push_back({static_cast<int>(si), cfg.sizes[si], rep});

    int workers = cfg.threads > 0
                      ? cfg.threads
                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<int>(workers, static_cast<int>(tasks.size()));

    std::vector<std::vector<BenchRecord>> results(tasks.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            size_t i = cursor.fetch_add(1);
            if (i >= tasks.size()) break;
            results[i] = run_one(cfg, tasks[i].n_vars, tasks[i].replicate);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // Keyed merge in (size, replicate, algorithm) order.
    std::vector<BenchRecord> merged;
    for (auto& group : results)
        for (auto& rec : group) merged.push_back(std::move(rec));
    return merged;
}

std::vector<BenchSummaryRow> summarize(const std::vector<BenchRecord>& records) {
    if (records.empty()) throw std::invalid_argument("summarize: no records");
    std::map<std::pair<std::string, int>, std::vector<const BenchRecord*>> groups;
    for (const auto& rec : records) groups[{rec.algorithm, rec.n_vars}].push_back(&rec);

    std::vector<BenchSummaryRow> rows;
    for (const auto& [key, members] : groups) {
        BenchSummaryRow row;
        row.algorithm = key.first;
        row.n_vars = key.second;
        row.records = static_cast<int>(members.size());

        double mean = 0.0;
        for (const auto* rec : members) mean += static_cast<double>(rec->ci_count);
        mean /= members.size();
        double var = 0.0;
        for (const auto* rec : members) {
            double delta = static_cast<double>(rec->ci_count) - mean;
            var += delta * delta;
        }
        double sd = members.size() > 1 ? std::sqrt(var / (members.size() - 1)) : 0.0;
        row.mean_ci_count = mean;
        row.ci_count_band = 1.96 * sd;

        int correct = 0;
        for (const auto* rec : members) correct += rec->verdict_correct ? 1 : 0;
        row.tpr = static_cast<double>(correct) / members.size();

        double f1_sum = 0.0;
        int f1_n = 0;
        for (const auto* rec : members)
            if (rec->f1) {
                f1_sum += *rec->f1;
                ++f1_n;
            }
        if (f1_n > 0) row.mean_f1 = f1_sum / f1_n;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.algorithm, a.n_vars) < std::tie(b.algorithm, b.n_vars);
    });
    return rows;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string records_to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << "algorithm,n_vars,replicate,ci_count,verdict_correct,f1,wall_ms\n";
    char wall[64];
    for (const auto& rec : records) {
        std::snprintf(wall, sizeof wall, "%.3f", rec.wall_ms);
        out << rec.algorithm << "," << rec.n_vars << "," << rec.replicate << ","
            << rec.ci_count << "," << (rec.verdict_correct ? "true" : "false") << ","
            << (rec.f1 ? format_double(*rec.f1) : "") << "," << wall << "\n";
    }
    return out.str();
}

std::vector<BenchRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("records_from_csv: empty");
    std::vector<BenchRecord> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) fields.push_back(field);
        while (fields.size() < 7) fields.push_back("");
        BenchRecord rec;
        rec.algorithm = fields[0];
        rec.n_vars = std::stoi(fields[1]);
        rec.replicate = std::stoi(fields[2]);
        rec.ci_count = std::stoull(fields[3]);
        rec.verdict_correct = fields[4] == "true";
        if (!fields[5].empty()) rec.f1 = std::stod(fields[5]);
        rec.wall_ms = std::stod(fields[6]);
        out.push_back(std::move(rec));
    }
    return out;
}

std::string summary_to_csv(const std::vector<BenchSummaryRow>& rows) {
    std::ostringstream out;
    out << "# tpr counts per-record failures as incorrect verdicts\n";
    out << "algorithm,n_vars,records,mean_ci_count,ci_count_band,tpr,mean_f1\n";
    for (const auto& row : rows) {
        out << row.algorithm << "," << row.n_vars << "," << row.records << ","
            << format_double(row.mean_ci_count) << "," << format_double(row.ci_count_band)
            << "," << format_double(row.tpr) << ","
            << (row.mean_f1 ? format_double(*row.mean_f1) : "") << "\n";
    }
    return out.str();
}

std::string summary_to_json(const std::vector<BenchSummaryRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json item;
        item["algorithm"] = row.algorithm;
        item["n_vars"] = row.n_vars;
        item["records"] = row.records;
        item["mean_ci_count"] = row.mean_ci_count;
        item["ci_count_band"] = row.ci_count_band;
        item["tpr"] = row.tpr;
        if (row.mean_f1) item["mean_f1"] = *row.mean_f1;
        out.push_back(std::move(item));
    }
    return out.dump(2) + "\n";
}

}  // namespace locpc
