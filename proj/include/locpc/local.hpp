#pragma once

#include <optional>
#include <vector>

#include "locpc/ci.hpp"
#include "locpc/graph.hpp"

namespace locpc {

/// The iteration-indexed adjacency sets of a PC-style search targeted at one
/// node: C_0 = V \ {target}; level s prunes with conditioning sets of size s
/// drawn from the level snapshot, yielding C_{s+1}. Holds C_0 .. C_{n-2}.
struct AdjacencyTrace {
    NodeId target;
    std::vector<NodeSet> sets;

    const NodeSet& final_set() const { return sets.back(); }
};

AdjacencyTrace adjacency_trace(const Dag& g, NodeId target,
                               SepsetCache* sepsets = nullptr);

/// Non-neighbors of d that survive every pruning level: C_{n-2}(d) \ Ne(d).
NodeSet spurious_neighbors(const Dag& g, NodeId d);

/// Nodes b not adjacent to a such that no subset of Ne(a) d-separates a and b.
NodeSet descendant_inducing_neighbors(const Dag& g, NodeId a);

/// A path from a to b together with its landmark subsequence.
struct DipWitness {
    std::vector<NodeId> path;       // a = path.front(), b = path.back()
    std::vector<NodeId> landmarks;  // ordered along the path
};

/// True iff the witness is a descendant inducing path: the landmarks are
/// {a, b} plus Ne(a) members on the path in path order, the path's colliders
/// are exactly the interior landmarks, and each landmark is a descendant of
/// the previous one. Throws on malformed witnesses.
bool check_dip(const Dag& g, const DipWitness& w);

/// Oracle construction of the local essential graph at hop h: local skeleton,
/// boundary edges to Ne and spurious survivors, in-scope collider
/// orientation, scoped Meek closure, then the boundary double-bar rule driven
/// by d-separation.
Leg build_true_leg(const Dag& g, NodeId y, int h);

/// Non-orientability check for a candidate set inside the hop ball: every
/// member has no undirected edge leaving the set and at most one double bar.
bool noc_satisfied(const Leg& leg, const NodeSet& d_set);

/// Closure of seed (which must contain the target) under non-arrow neighbors
/// restricted to the hop ball.
NodeSet grow_noc_candidate(const Leg& leg, const NodeSet& seed);

/// Identifiability of a controlled direct effect on y from a partially
/// directed graph: no undirected or double-bar mark may touch y.
bool cde_identifiable_from_graph(const Leg& p, NodeId y);

}  // namespace locpc
