#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace locpc {

using NodeId = int;
using NodeSet = std::set<NodeId>;

/// Immutable directed acyclic graph over nodes 0..n-1.
/// Construction verifies acyclicity and rejects self-loops and duplicates.
class Dag {
  public:
    Dag(int n, std::vector<std::pair<NodeId, NodeId>> edges,
        std::vector<std::string> names = {});

    int num_nodes() const { return n_; }
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    const std::vector<std::string>& names() const { return names_; }
    NodeId node_by_name(const std::string& name) const;

    bool has_edge(NodeId tail, NodeId head) const;
    bool adjacent(NodeId a, NodeId b) const;

    const NodeSet& parents(NodeId v) const { return parents_[v]; }
    const NodeSet& children(NodeId v) const { return children_[v]; }
    const NodeSet& neighbors(NodeId v) const { return neighbors_[v]; }

    /// Nodes reachable from v by a directed path, excluding v.
    NodeSet descendants(NodeId v) const;
    /// Nodes that reach v by a directed path, excluding v.
    NodeSet ancestors(NodeId v) const;

    /// A topological order (parents before children).
    const std::vector<NodeId>& topological_order() const { return topo_; }

    /// All nodes at undirected shortest-path distance <= h from y, including y.
    NodeSet hop_neighborhood(NodeId y, int h) const;

  private:
    int n_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<std::string> names_;
    std::vector<NodeSet> parents_, children_, neighbors_;
    std::vector<NodeId> topo_;
};

enum class EdgeMark : std::uint8_t {
    Undirected,  // a - b
    Directed,    // a -> b, stored on the ordered pair
    DoubleBar,   // a || b, symmetric annotation on a boundary edge
};

/// Partially directed graph around a target: each unordered pair carries at
/// most one mark. Doubles as a CPDAG container (hop = n, no DoubleBar marks).
class Leg {
  public:
    Leg(int n, NodeId target, int hop, std::vector<std::string> names = {});

    int num_nodes() const { return n_; }
    NodeId target() const { return target_; }
    int hop() const { return hop_; }
    const std::vector<std::string>& names() const { return names_; }

    void add_undirected(NodeId a, NodeId b);
    void add_directed(NodeId tail, NodeId head);
    void add_double_bar(NodeId a, NodeId b);
    void remove_edge(NodeId a, NodeId b);
    /// Turns an existing undirected edge into tail -> head.
    void orient(NodeId tail, NodeId head);

    bool adjacent(NodeId a, NodeId b) const;
    bool is_undirected(NodeId a, NodeId b) const;
    bool is_directed(NodeId tail, NodeId head) const;
    bool is_double_bar(NodeId a, NodeId b) const;

    const NodeSet& adjacency(NodeId v) const { return adj_[v]; }
    /// Directed in-neighbors of v.
    NodeSet parents(NodeId v) const;
    /// Neighbors of v linked by an Undirected or DoubleBar mark.
    NodeSet nonarrow_neighbors(NodeId v) const;

    /// Nodes within skeleton distance <= h of y in this graph.
    NodeSet hop_neighborhood(NodeId y, int h) const;

    /// (a, b, mark) triples, a < b for symmetric marks, tail/head for Directed.
    std::vector<std::tuple<NodeId, NodeId, EdgeMark>> marked_edges() const;
    int num_edges() const;

    /// Checks the structural invariants: directed subgraph acyclic, every
    /// DoubleBar edge with exactly one endpoint inside the stored hop ball.
    void validate() const;

    bool operator==(const Leg& other) const;

  private:
    int index(NodeId a, NodeId b) const { return a * n_ + b; }

    int n_;
    NodeId target_;
    int hop_;
    std::vector<std::string> names_;
    // mark_[a*n+b]: 0 none, 1 undirected, 2 directed a->b, 3 double bar.
    std::vector<std::uint8_t> mark_;
    std::vector<NodeSet> adj_;
};

// Edge-list text formats. Both round-trip exactly.
//   dag <n>        followed by lines  <i> -> <j>
//   leg <n> target=<i> hop=<h>   followed by  <i> -- <j> | <i> -> <j> | <i> || <j>
std::string to_text(const Dag& g);
std::string to_text(const Leg& p);
Dag parse_dag(const std::string& text);
Leg parse_leg(const std::string& text);

}  // namespace locpc
