#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "locpc/ci.hpp"
#include "locpc/graph.hpp"

namespace locpc {

/// Splittable counter-based generator: every (seed, stream) pair is an
/// independent deterministic sequence, identical across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);
    std::uint64_t next_u64();
    double uniform();                      // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)
    double normal();                       // standard normal, Box-Muller
    /// Child generator for a named purpose; independent of this one.
    Rng split(std::uint64_t stream) const;

  private:
    std::uint64_t state_;
};

enum class ScmKind { LinearGaussian, BinaryLogistic };

/// A structural causal model over a DAG: one coefficient per edge, one noise
/// variance per node (linear kind only).
struct ScmSpec {
    Dag dag;
    ScmKind kind = ScmKind::LinearGaussian;
    std::map<std::pair<NodeId, NodeId>, double> coefficients;
    std::vector<double> noise_variances;
    std::uint64_t seed = 0;
};

struct BenchInstance {
    ScmSpec scm;
    NodeId treatment = 0;
    NodeId target = 0;
    bool identifiable = false;
};

/// Erdos-Renyi DAG: undirected edges kept with probability 2/(n-1) (clamped
/// to [0,1]), oriented by a uniformly random permutation order.
Dag gen_er_dag(int n_vars, std::uint64_t seed);

/// Coefficients and variances per the benchmark protocol: linear weights
/// uniform on +/-[0.2, 1], logistic weights on +/-[0.2, 5], variances on
/// [0.8, 1].
ScmSpec make_scm(Dag dag, ScmKind kind, std::uint64_t seed);

/// Rejection-samples DAGs until a treatment->target pair exists whose direct
/// effect is identifiable (or not) in the essential graph. Throws
/// RetryExhausted after max_draws attempts.
struct RetryExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};
BenchInstance gen_instance(int n_vars, bool want_identifiable, std::uint64_t seed,
                           ScmKind kind = ScmKind::LinearGaussian,
                           int max_draws = 10000);

/// Forward simulation in topological order; deterministic given the spec.
Dataset simulate(const ScmSpec& spec, int n_samples);

/// Instance metadata (treatment, target, flag, coefficients) as JSON text.
std::string instance_meta_json(const BenchInstance& inst);

}  // namespace locpc
