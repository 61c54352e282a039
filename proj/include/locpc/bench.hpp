#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "locpc/datagen.hpp"
#include "locpc/graph.hpp"

namespace locpc {

struct BenchConfig {
    std::vector<int> sizes;
    int reps = 20;
    ScmKind setting = ScmKind::LinearGaussian;
    bool identifiable = true;
    double alpha = 0.05;
    int n_samples = 5000;
    std::vector<std::string> algorithms{"locpc_cde", "pc"};
    std::uint64_t seed = 42;
    bool oracle = false;  // answer CI queries from the true DAG
    int threads = 0;      // 0 = hardware concurrency

    void check() const;
};

struct BenchRecord {
    std::string algorithm;
    int n_vars = 0;
    int replicate = 0;
    std::uint64_t ci_count = 0;
    bool verdict_correct = false;
    std::optional<double> f1;
    double wall_ms = 0.0;
    bool failed = false;
};

struct BenchSummaryRow {
    std::string algorithm;
    int n_vars = 0;
    int records = 0;
    double mean_ci_count = 0.0;
    double ci_count_band = 0.0;  // 1.96 * sample sd
    double tpr = 0.0;            // failures count as incorrect
    std::optional<double> mean_f1;
};

/// Harmonic precision/recall of an estimated parent set against a nonempty
/// truth; empty estimates score 0.
double f1_parents(const NodeSet& estimated, const NodeSet& truth);

/// One record per (size, replicate, algorithm); replicates run on a worker
/// pool and merge in deterministic order. Failures are captured per record.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);

std::vector<BenchSummaryRow> summarize(const std::vector<BenchRecord>& records);

// results.csv columns exactly:
// algorithm,n_vars,replicate,ci_count,verdict_correct,f1,wall_ms
std::string records_to_csv(const std::vector<BenchRecord>& records);
std::vector<BenchRecord> records_from_csv(const std::string& text);
std::string summary_to_csv(const std::vector<BenchSummaryRow>& rows);
std::string summary_to_json(const std::vector<BenchSummaryRow>& rows);

}  // namespace locpc
