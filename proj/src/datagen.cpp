#include "locpc/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "json.hpp"
#include "locpc/cpdag.hpp"
#include "locpc/local.hpp"

namespace locpc {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    // Fold the stream id into the seed so streams never overlap in practice.
    state_ = seed ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull);
    next_u64();
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Rng Rng::split(std::uint64_t stream) const {
    std::uint64_t s = state_;
    return Rng(splitmix64(s), stream);
}

Dag gen_er_dag(int n_vars, std::uint64_t seed) {
    if (n_vars < 2) throw std::invalid_argument("gen_er_dag: needs at least two nodes");
    Rng rng(seed, 1);
    double p = std::clamp(2.0 / (n_vars - 1), 0.0, 1.0);

    std::vector<std::pair<NodeId, NodeId>> undirected;
    for (NodeId i = 0; i < n_vars; ++i)
        for (NodeId j = i + 1; j < n_vars; ++j)
            if (rng.uniform() < p) undirected.emplace_back(i, j);

    // Random causal order via Fisher-Yates.
    std::vector<int> order(n_vars);
    for (int i = 0; i < n_vars; ++i) order[i] = i;
    for (int i = n_vars - 1; i > 0; --i) {
        int j = static_cast<int>(rng.next_u64() % (i + 1));
        std::swap(order[i], order[j]);
    }
    std::vector<int> rank(n_vars);
    for (int i = 0; i < n_vars; ++i) rank[order[i]] = i;

    std::vector<std::pair<NodeId, NodeId>> edges;
    for (auto [i, j] : undirected) {
        if (rank[i] < rank[j]) edges.emplace_back(i, j);
        else edges.emplace_back(j, i);
    }
    return Dag(n_vars, std::move(edges));
}

ScmSpec make_scm(Dag dag, ScmKind kind, std::uint64_t seed) {
    ScmSpec spec{std::move(dag), kind, {}, {}, seed};
    Rng rng(seed, 2);
    const double hi = kind == ScmKind::LinearGaussian ? 1.0 : 5.0;
    for (auto [a, b] : spec.dag.edges()) {
        double magnitude = rng.uniform(0.2, hi);
        double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        spec.coefficients[{a, b}] = sign * magnitude;
    }
    spec.noise_variances.resize(spec.dag.num_nodes());
    for (double& v : spec.noise_variances) v = rng.uniform(0.8, 1.0);
    return spec;
}

BenchInstance gen_instance(int n_vars, bool want_identifiable, std::uint64_t seed,
                           ScmKind kind, int max_draws) {
    if (n_vars < 3) throw std::invalid_argument("gen_instance: needs at least three nodes");
    Rng stream(seed, 3);
    for (int attempt = 0; attempt < max_draws; ++attempt) {
        std::uint64_t draw_seed = stream.next_u64();
        Dag dag = gen_er_dag(n_vars, draw_seed);
        Leg cpdag = dag_to_cpdag(dag);
        for (NodeId y = 0; y < n_vars; ++y) {
            if (dag.parents(y).empty()) continue;
            bool oriented = cde_identifiable_from_graph(cpdag, y);
            if (oriented != want_identifiable) continue;
            NodeId x = *dag.parents(y).begin();
            return BenchInstance{make_scm(dag, kind, draw_seed), x, y, want_identifiable};
        }
    }
    throw RetryExhausted("gen_instance: no suitable pair found within the draw cap");
}

Dataset simulate(const ScmSpec& spec, int n_samples) {
    if (n_samples < 1) throw std::invalid_argument("simulate: needs at least one sample");
    const int n = spec.dag.num_nodes();
    if (static_cast<int>(spec.noise_variances.size()) != n &&
        spec.kind == ScmKind::LinearGaussian)
        throw std::invalid_argument("simulate: noise variance per node required");

    Dataset data;
    data.kind = spec.kind == ScmKind::LinearGaussian ? DataKind::Continuous
                                                     : DataKind::Binary;
    data.n_samples = n_samples;
    data.n_vars = n;
    data.names = spec.dag.names();
    data.values.assign(static_cast<size_t>(n_samples) * n, 0.0);

    Rng rng(spec.seed, 4);
    const auto& topo = spec.dag.topological_order();
    std::vector<double> row(n, 0.0);
    for (int i = 0; i < n_samples; ++i) {
        for (NodeId v : topo) {
            double parent_sum = 0.0;
            for (NodeId parent : spec.dag.parents(v))
                parent_sum += spec.coefficients.at({parent, v}) * row[parent];
            if (spec.kind == ScmKind::LinearGaussian) {
                row[v] = parent_sum + rng.normal() * std::sqrt(spec.noise_variances[v]);
            } else {
                double p = 1.0 / (1.0 + std::exp(-parent_sum));
                row[v] = rng.uniform() <= p ? 1.0 : 0.0;
            }
        }
        for (int j = 0; j < n; ++j) data.at(i, j) = row[j];
    }
    return data;
}

std::string instance_meta_json(const BenchInstance& inst) {
    nlohmann::json meta;
    meta["treatment"] = inst.scm.dag.names()[inst.treatment];
    meta["target"] = inst.scm.dag.names()[inst.target];
    meta["treatment_index"] = inst.treatment;
    meta["target_index"] = inst.target;
    meta["identifiable"] = inst.identifiable;
    meta["kind"] = inst.scm.kind == ScmKind::LinearGaussian ? "linear" : "binary";
    meta["seed"] = inst.scm.seed;
    nlohmann::json coefs = nlohmann::json::array();
    for (const auto& [edge, value] : inst.scm.coefficients)
        coefs.push_back({{"from", edge.first}, {"to", edge.second}, {"value", value}});
    meta["coefficients"] = coefs;
    meta["noise_variances"] = inst.scm.noise_variances;
    return meta.dump(2) + "\n";
}

}  // namespace locpc
