#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "locpc/ci.hpp"
#include "locpc/graph.hpp"

namespace locpc {

/// Independence query: true iff x and y are independent given z.
using CiQuery = std::function<bool(NodeId, NodeId, const NodeSet&)>;

/// For each unshielded triple a-b-c with a, b, c in scope and
/// b not in sepset(a, c), orients a->b and c->b. Conflicting demands keep the
/// first orientation and append a warning.
Leg orient_unshielded_colliders(const Leg& p, const SepsetCache& sepsets,
                                const NodeSet& scope,
                                std::vector<std::string>* warnings = nullptr);

/// Fixpoint of Meek rules 1-4; only undirected edges with both endpoints in
/// scope are oriented. Existing arrows are never reversed; demanded reversals
/// append a warning. DoubleBar marks neither fire rules nor get oriented.
Leg apply_meek_rules(const Leg& p, const NodeSet& scope,
                     std::vector<std::string>* warnings = nullptr);

/// Skeleton of g, v-structures oriented, Meek closure; hop = n.
Leg dag_to_cpdag(const Dag& g);

/// One node's level-wise prune against every other node: level s tests
/// conditioning sets of size s drawn from the current snapshot, separated
/// partners drop out. Returns the separator found per separated partner;
/// partners without an entry stayed adjacent through every level. When
/// trace is non-null it receives the snapshot after every level.
std::map<NodeId, NodeSet> targeted_prune(const CiQuery& independent, int n_vars,
                                         NodeId d,
                                         std::vector<NodeSet>* trace = nullptr);

/// Hop-expanding skeleton search around y: each ring connects its frontier
/// to every pair without a recorded separator, prunes level-wise with
/// per-level snapshots (retesting surviving edges to visited nodes), then
/// expands through the survivors. Edges with both ends outside the explored
/// ball are dropped at the end. skip_test suppresses individual frontier
/// tests (background-knowledge hook).
struct LocalSkeleton {
    Leg graph;
    NodeSet visited;
};
LocalSkeleton local_skeleton_search(
    const CiQuery& independent, int n_vars, NodeId y, int h, SepsetCache& sepsets,
    const std::function<bool(NodeId d, NodeId b, const NodeSet& visited)>& skip_test =
        {});

/// Boundary double-bar rule shared by the oracle construction and the
/// CI-driven discovery. For each undirected boundary edge D-A (D inside the
/// neighborhood, A outside), scans partners W outside the neighborhood that
/// the targeted prune of D separated, with separator S(D, W):
///   veto     A in S(D, W)       (A was required to separate the pair)
///   witness  S(D, W) empty and (D not-independent W | {A})
/// and replaces D-A by a double bar iff some witness exists and no veto does.
void apply_boundary_bars(Leg& p, const NodeSet& nehood, const CiQuery& independent);

/// First separating set found for (x, y) among subsets of candidates,
/// level-wise by size then lexicographically. Warns once per call when the
/// level exceeds 12.
std::optional<NodeSet> first_separator(const CiQuery& independent, NodeId x, NodeId y,
                                       const std::vector<NodeId>& candidates,
                                       int max_size = -1);

// In-place variants used by the discovery loop.
void orient_unshielded_colliders_inplace(Leg& p, const SepsetCache& sepsets,
                                         const NodeSet& scope,
                                         std::vector<std::string>* warnings);
void apply_meek_rules_inplace(Leg& p, const NodeSet& scope,
                              std::vector<std::string>* warnings);

}  // namespace locpc
