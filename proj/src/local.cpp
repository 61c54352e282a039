#include "locpc/local.hpp"

#include <algorithm>
#include <stdexcept>

#include "locpc/cpdag.hpp"
#include "locpc/dsep.hpp"

namespace locpc {

AdjacencyTrace adjacency_trace(const Dag& g, NodeId target, SepsetCache* sepsets) {
    const int n = g.num_nodes();
    if (n < 2) throw std::invalid_argument("adjacency_trace: needs at least two nodes");

    AdjacencyTrace trace;
    trace.target = target;
    auto independent = [&](NodeId x, NodeId y, const NodeSet& z) {
        return d_separated(g, x, y, z);
    };
    auto found = targeted_prune(independent, n, target, &trace.sets);
    if (sepsets)
        for (auto& [partner, set] : found)
            sepsets->record_separated(target, partner, std::move(set));
    return trace;
}

NodeSet spurious_neighbors(const Dag& g, NodeId d) {
    AdjacencyTrace trace = adjacency_trace(g, d);
    NodeSet out;
    for (NodeId v : trace.final_set())
        if (!g.adjacent(d, v)) out.insert(v);
    return out;
}

NodeSet descendant_inducing_neighbors(const Dag& g, NodeId a) {
    NodeSet out;
    auto independent = [&](NodeId x, NodeId y, const NodeSet& z) {
        return d_separated(g, x, y, z);
    };
    std::vector<NodeId> nbrs(g.neighbors(a).begin(), g.neighbors(a).end());
    for (NodeId b = 0; b < g.num_nodes(); ++b) {
        if (b == a || g.adjacent(a, b)) continue;
        if (!first_separator(independent, a, b, nbrs)) out.insert(b);
    }
    return out;
}

bool check_dip(const Dag& g, const DipWitness& w) {
    const auto& path = w.path;
    if (path.size() < 2) throw std::invalid_argument("check_dip: path too short");
    for (size_t i = 0; i + 1 < path.size(); ++i)
        if (!g.adjacent(path[i], path[i + 1]))
            throw std::invalid_argument("check_dip: path step not an edge");
    NodeSet distinct(path.begin(), path.end());
    if (distinct.size() != path.size())
        throw std::invalid_argument("check_dip: path revisits a node");

    const NodeId a = path.front(), b = path.back();
    if (g.adjacent(a, b)) return false;

    // Landmarks must be {a, b} plus the Ne(a) members of the path, in order.
    std::vector<NodeId> expected{a};
    for (size_t i = 1; i + 1 < path.size(); ++i)
        if (g.adjacent(a, path[i])) expected.push_back(path[i]);
    expected.push_back(b);
    if (w.landmarks != expected)
        throw std::invalid_argument("check_dip: landmarks do not match the path");

    NodeSet colliders;
    for (size_t i = 1; i + 1 < path.size(); ++i)
        if (g.has_edge(path[i - 1], path[i]) && g.has_edge(path[i + 1], path[i]))
            colliders.insert(path[i]);
    NodeSet interior(expected.begin() + 1, expected.end() - 1);
    if (colliders != interior) return false;

    for (size_t i = 0; i + 1 < expected.size(); ++i)
        if (!g.descendants(expected[i]).count(expected[i + 1])) return false;
    return true;
}

Leg build_true_leg(const Dag& g, NodeId y, int h) {
    if (h < 0) throw std::invalid_argument("build_true_leg: negative hop");
    const int n = g.num_nodes();
    auto independent = [&](NodeId x, NodeId w, const NodeSet& z) {
        return d_separated(g, x, w, z);
    };

    // Local skeleton with boundary survivors. The hop-expanding search is the
    // operational reading of the construction: survivors of an inner ring are
    // retested once visited, which confines spurious edges to the periphery.
    SepsetCache sepsets;
    LocalSkeleton skeleton = local_skeleton_search(independent, n, y, h, sepsets);
    Leg leg(n, y, h, g.names());
    for (auto [a, b, mark] : skeleton.graph.marked_edges()) leg.add_undirected(a, b);
    NodeSet nehood = leg.hop_neighborhood(y, h);

    // In-scope unshielded colliders, straight from the DAG.
    for (NodeId b : nehood) {
        std::vector<NodeId> pa(g.parents(b).begin(), g.parents(b).end());
        for (size_t i = 0; i < pa.size(); ++i)
            for (size_t j = i + 1; j < pa.size(); ++j) {
                if (!nehood.count(pa[i]) || !nehood.count(pa[j])) continue;
                if (g.adjacent(pa[i], pa[j])) continue;
                if (leg.is_undirected(pa[i], b)) leg.orient(pa[i], b);
                if (leg.is_undirected(pa[j], b)) leg.orient(pa[j], b);
            }
    }
    apply_meek_rules_inplace(leg, nehood, nullptr);
    apply_boundary_bars(leg, nehood, independent);
    return leg;
}

bool noc_satisfied(const Leg& leg, const NodeSet& d_set) {
    if (leg.hop() < 1) throw std::invalid_argument("noc_satisfied: hop must be >= 1");
    NodeSet ball = leg.hop_neighborhood(leg.target(), leg.hop());
    for (NodeId d : d_set)
        if (!ball.count(d))
            throw std::invalid_argument("noc_satisfied: candidate node outside hop ball");

    for (NodeId d : d_set) {
        int bars_out = 0;
        for (NodeId a : leg.adjacency(d)) {
            if (d_set.count(a)) continue;
            if (leg.is_undirected(d, a)) return false;
            if (leg.is_double_bar(d, a)) ++bars_out;
        }
        if (bars_out > 1) return false;
    }
    return true;
}

NodeSet grow_noc_candidate(const Leg& leg, const NodeSet& seed) {
    if (seed.empty() || !seed.count(leg.target()))
        throw std::invalid_argument("grow_noc_candidate: seed must contain the target");
    NodeSet ball = leg.hop_neighborhood(leg.target(), leg.hop());
    NodeSet out = seed;
    bool grew = true;
    while (grew) {
        grew = false;
        for (NodeId d : std::vector<NodeId>(out.begin(), out.end()))
            for (NodeId a : leg.nonarrow_neighbors(d))
                if (ball.count(a) && out.insert(a).second) grew = true;
    }
    return out;
}

bool cde_identifiable_from_graph(const Leg& p, NodeId y) {
    for (NodeId a : p.adjacency(y))
        if (p.is_undirected(y, a) || p.is_double_bar(y, a)) return false;
    return true;
}

}  // namespace locpc
