#include "locpc/graph.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace locpc {

Dag::Dag(int n, std::vector<std::pair<NodeId, NodeId>> edges,
         std::vector<std::string> names)
    : n_(n), edges_(std::move(edges)), names_(std::move(names)) {
    if (n_ < 0) throw std::invalid_argument("Dag: negative node count");
    if (names_.empty()) {
        names_.reserve(n_);
        for (int i = 0; i < n_; ++i) names_.push_back("V" + std::to_string(i));
    }
    if (static_cast<int>(names_.size()) != n_)
        throw std::invalid_argument("Dag: name count does not match node count");

    parents_.assign(n_, {});
    children_.assign(n_, {});
    neighbors_.assign(n_, {});
    for (auto [a, b] : edges_) {
        if (a < 0 || a >= n_ || b < 0 || b >= n_)
            throw std::invalid_argument("Dag: edge endpoint out of range");
        if (a == b) throw std::invalid_argument("Dag: self-loop");
        if (children_[a].count(b)) throw std::invalid_argument("Dag: duplicate edge");
        if (children_[b].count(a))
            throw std::invalid_argument("Dag: edge present in both directions");
        children_[a].insert(b);
        parents_[b].insert(a);
        neighbors_[a].insert(b);
        neighbors_[b].insert(a);
    }

    // Kahn's algorithm; failure to place every node means a cycle.
    std::vector<int> indeg(n_, 0);
    for (int v = 0; v < n_; ++v) indeg[v] = static_cast<int>(parents_[v].size());
    std::queue<NodeId> ready;
    for (int v = 0; v < n_; ++v)
        if (indeg[v] == 0) ready.push(v);
    topo_.reserve(n_);
    while (!ready.empty()) {
        NodeId v = ready.front();
        ready.pop();
        topo_.push_back(v);
        for (NodeId c : children_[v])
            if (--indeg[c] == 0) ready.push(c);
    }
    if (static_cast<int>(topo_.size()) != n_)
        throw std::invalid_argument("Dag: edge set contains a cycle");
}

NodeId Dag::node_by_name(const std::string& name) const {
    for (int i = 0; i < n_; ++i)
        if (names_[i] == name) return i;
    throw std::invalid_argument("Dag: unknown node name '" + name + "'");
}

bool Dag::has_edge(NodeId tail, NodeId head) const {
    return children_[tail].count(head) > 0;
}

bool Dag::adjacent(NodeId a, NodeId b) const { return neighbors_[a].count(b) > 0; }

NodeSet Dag::descendants(NodeId v) const {
    NodeSet out;
    std::deque<NodeId> work(children_[v].begin(), children_[v].end());
    while (!work.empty()) {
        NodeId u = work.front();
        work.pop_front();
        if (!out.insert(u).second) continue;
        for (NodeId c : children_[u]) work.push_back(c);
    }
    out.erase(v);
    return out;
}

NodeSet Dag::ancestors(NodeId v) const {
    NodeSet out;
    std::deque<NodeId> work(parents_[v].begin(), parents_[v].end());
    while (!work.empty()) {
        NodeId u = work.front();
        work.pop_front();
        if (!out.insert(u).second) continue;
        for (NodeId p : parents_[u]) work.push_back(p);
    }
    out.erase(v);
    return out;
}

NodeSet Dag::hop_neighborhood(NodeId y, int h) const {
    if (h < 0) throw std::invalid_argument("hop_neighborhood: negative hop");
    NodeSet ball{y};
    NodeSet frontier{y};
    for (int d = 0; d < h && !frontier.empty(); ++d) {
        NodeSet next;
        for (NodeId v : frontier)
            for (NodeId u : neighbors_[v])
                if (!ball.count(u)) {
                    ball.insert(u);
                    next.insert(u);
                }
        frontier = std::move(next);
    }
    return ball;
}

Leg::Leg(int n, NodeId target, int hop, std::vector<std::string> names)
    : n_(n), target_(target), hop_(hop), names_(std::move(names)) {
    if (n_ < 0) throw std::invalid_argument("Leg: negative node count");
    if (target_ < 0 || target_ >= n_) throw std::invalid_argument("Leg: target out of range");
    if (hop_ < 0) throw std::invalid_argument("Leg: negative hop");
    if (names_.empty()) {
        names_.reserve(n_);
        for (int i = 0; i < n_; ++i) names_.push_back("V" + std::to_string(i));
    }
    if (static_cast<int>(names_.size()) != n_)
        throw std::invalid_argument("Leg: name count does not match node count");
    mark_.assign(static_cast<size_t>(n_) * n_, 0);
    adj_.assign(n_, {});
}

namespace {
constexpr std::uint8_t kNone = 0, kUndirected = 1, kDirected = 2, kBar = 3;
}

void Leg::add_undirected(NodeId a, NodeId b) {
    if (a == b) throw std::invalid_argument("Leg: self-loop");
    if (adjacent(a, b)) throw std::invalid_argument("Leg: pair already marked");
    mark_[index(a, b)] = kUndirected;
    mark_[index(b, a)] = kUndirected;
    adj_[a].insert(b);
    adj_[b].insert(a);
}

void Leg::add_directed(NodeId tail, NodeId head) {
    if (tail == head) throw std::invalid_argument("Leg: self-loop");
    if (adjacent(tail, head)) throw std::invalid_argument("Leg: pair already marked");
    mark_[index(tail, head)] = kDirected;
    adj_[tail].insert(head);
    adj_[head].insert(tail);
}

void Leg::add_double_bar(NodeId a, NodeId b) {
    if (a == b) throw std::invalid_argument("Leg: self-loop");
    if (adjacent(a, b)) throw std::invalid_argument("Leg: pair already marked");
    mark_[index(a, b)] = kBar;
    mark_[index(b, a)] = kBar;
    adj_[a].insert(b);
    adj_[b].insert(a);
}

void Leg::remove_edge(NodeId a, NodeId b) {
    mark_[index(a, b)] = kNone;
    mark_[index(b, a)] = kNone;
    adj_[a].erase(b);
    adj_[b].erase(a);
}

void Leg::orient(NodeId tail, NodeId head) {
    if (!is_undirected(tail, head))
        throw std::invalid_argument("Leg: orient on a non-undirected pair");
    mark_[index(tail, head)] = kDirected;
    mark_[index(head, tail)] = kNone;
}

bool Leg::adjacent(NodeId a, NodeId b) const {
    return mark_[index(a, b)] != kNone || mark_[index(b, a)] != kNone;
}

bool Leg::is_undirected(NodeId a, NodeId b) const {
    return mark_[index(a, b)] == kUndirected;
}

bool Leg::is_directed(NodeId tail, NodeId head) const {
    return mark_[index(tail, head)] == kDirected;
}

bool Leg::is_double_bar(NodeId a, NodeId b) const { return mark_[index(a, b)] == kBar; }

NodeSet Leg::parents(NodeId v) const {
    NodeSet out;
    for (NodeId u : adj_[v])
        if (is_directed(u, v)) out.insert(u);
    return out;
}

NodeSet Leg::nonarrow_neighbors(NodeId v) const {
    NodeSet out;
    for (NodeId u : adj_[v])
        if (is_undirected(u, v) || is_double_bar(u, v)) out.insert(u);
    return out;
}

NodeSet Leg::hop_neighborhood(NodeId y, int h) const {
    if (h < 0) throw std::invalid_argument("hop_neighborhood: negative hop");
    NodeSet ball{y};
    NodeSet frontier{y};
    for (int d = 0; d < h && !frontier.empty(); ++d) {
        NodeSet next;
        for (NodeId v : frontier)
            for (NodeId u : adj_[v])
                if (!ball.count(u)) {
                    ball.insert(u);
                    next.insert(u);
                }
        frontier = std::move(next);
    }
    return ball;
}

std::vector<std::tuple<NodeId, NodeId, EdgeMark>> Leg::marked_edges() const {
    std::vector<std::tuple<NodeId, NodeId, EdgeMark>> out;
    for (NodeId a = 0; a < n_; ++a)
        for (NodeId b : adj_[a]) {
            if (is_directed(a, b)) out.emplace_back(a, b, EdgeMark::Directed);
            else if (a < b && is_undirected(a, b)) out.emplace_back(a, b, EdgeMark::Undirected);
            else if (a < b && is_double_bar(a, b)) out.emplace_back(a, b, EdgeMark::DoubleBar);
        }
    return out;
}

int Leg::num_edges() const {
    int count = 0;
    for (NodeId a = 0; a < n_; ++a) count += static_cast<int>(adj_[a].size());
    return count / 2;
}

void Leg::validate() const {
    // Directed subgraph must be acyclic.
    std::vector<int> indeg(n_, 0);
    for (NodeId a = 0; a < n_; ++a)
        for (NodeId b : adj_[a])
            if (is_directed(a, b)) ++indeg[b];
    std::queue<NodeId> ready;
    for (int v = 0; v < n_; ++v)
        if (indeg[v] == 0) ready.push(v);
    int placed = 0;
    while (!ready.empty()) {
        NodeId v = ready.front();
        ready.pop();
        ++placed;
        for (NodeId b : adj_[v])
            if (is_directed(v, b) && --indeg[b] == 0) ready.push(b);
    }
    if (placed != n_) throw std::logic_error("Leg: directed subgraph has a cycle");

    NodeSet ball = hop_neighborhood(target_, hop_);
    for (NodeId a = 0; a < n_; ++a)
        for (NodeId b : adj_[a])
            if (a < b && is_double_bar(a, b)) {
                bool a_in = ball.count(a) > 0, b_in = ball.count(b) > 0;
                if (a_in == b_in)
                    throw std::logic_error("Leg: double-bar edge not on the hop boundary");
            }
}

bool Leg::operator==(const Leg& other) const {
    return n_ == other.n_ && target_ == other.target_ && hop_ == other.hop_ &&
           mark_ == other.mark_;
}

std::string to_text(const Dag& g) {
    std::ostringstream out;
    out << "dag " << g.num_nodes() << "\n";
    auto edges = g.edges();
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) out << a << " -> " << b << "\n";
    return out.str();
}

std::string to_text(const Leg& p) {
    std::ostringstream out;
    out << "leg " << p.num_nodes() << " target=" << p.target() << " hop=" << p.hop()
        << "\n";
    auto edges = p.marked_edges();
    std::sort(edges.begin(), edges.end());
    for (auto [a, b, mark] : edges) {
        const char* sep = mark == EdgeMark::Undirected ? "--"
                          : mark == EdgeMark::Directed ? "->"
                                                       : "||";
        out << a << " " << sep << " " << b << "\n";
    }
    return out.str();
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

}  // namespace

Dag parse_dag(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw std::invalid_argument("parse_dag: empty input");
    std::istringstream head(lines[0]);
    std::string tag;
    int n = -1;
    head >> tag >> n;
    if (tag != "dag" || n < 0) throw std::invalid_argument("parse_dag: bad header");
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream in(lines[i]);
        int a, b;
        std::string sep;
        if (!(in >> a >> sep >> b) || sep != "->")
            throw std::invalid_argument("parse_dag: bad edge line '" + lines[i] + "'");
        edges.emplace_back(a, b);
    }
    return Dag(n, std::move(edges));
}

Leg parse_leg(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw std::invalid_argument("parse_leg: empty input");
    std::istringstream head(lines[0]);
    std::string tag, target_field, hop_field;
    int n = -1;
    head >> tag >> n >> target_field >> hop_field;
    if (tag != "leg" || n < 0 || target_field.rfind("target=", 0) != 0 ||
        hop_field.rfind("hop=", 0) != 0)
        throw std::invalid_argument("parse_leg: bad header");
    NodeId target = std::stoi(target_field.substr(7));
    int hop = std::stoi(hop_field.substr(4));
    Leg p(n, target, hop);
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream in(lines[i]);
        int a, b;
        std::string sep;
        if (!(in >> a >> sep >> b))
            throw std::invalid_argument("parse_leg: bad edge line '" + lines[i] + "'");
        if (sep == "--") p.add_undirected(a, b);
        else if (sep == "->") p.add_directed(a, b);
        else if (sep == "||") p.add_double_bar(a, b);
        else throw std::invalid_argument("parse_leg: bad mark '" + sep + "'");
    }
    return p;
}

}  // namespace locpc
