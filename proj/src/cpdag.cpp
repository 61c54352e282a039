#include "locpc/cpdag.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace locpc {

namespace {

void warn(std::vector<std::string>* warnings, const std::string& message) {
    if (warnings) warnings->push_back(message);
    else std::cerr << "locpc: " << message << "\n";
}

// Orients tail->head unless the pair already carries an opposing arrow.
void direct_edge(Leg& p, NodeId tail, NodeId head, const char* rule,
                 std::vector<std::string>* warnings) {
    if (p.is_directed(tail, head)) return;
    if (p.is_directed(head, tail)) {
        std::ostringstream msg;
        msg << rule << " demands " << tail << "->" << head
            << " against existing " << head << "->" << tail << "; keeping first";
        warn(warnings, msg.str());
        return;
    }
    if (!p.is_undirected(tail, head)) return;  // double bar or absent
    p.orient(tail, head);
}

}  // namespace

void orient_unshielded_colliders_inplace(Leg& p, const SepsetCache& sepsets,
                                         const NodeSet& scope,
                                         std::vector<std::string>* warnings) {
    const int n = p.num_nodes();
    for (NodeId b = 0; b < n; ++b) {
        if (!scope.count(b)) continue;
        std::vector<NodeId> nbrs(p.adjacency(b).begin(), p.adjacency(b).end());
        for (size_t i = 0; i < nbrs.size(); ++i)
            for (size_t j = i + 1; j < nbrs.size(); ++j) {
                NodeId a = nbrs[i], c = nbrs[j];
                if (!scope.count(a) || !scope.count(c)) continue;
                if (p.adjacent(a, c)) continue;
                if (sepsets.status(a, c) != SepsetCache::Status::SeparatedBy) continue;
                if (sepsets.sepset(a, c).count(b)) continue;
                direct_edge(p, a, b, "collider", warnings);
                direct_edge(p, c, b, "collider", warnings);
            }
    }
}

Leg orient_unshielded_colliders(const Leg& p, const SepsetCache& sepsets,
                                const NodeSet& scope,
                                std::vector<std::string>* warnings) {
    Leg out = p;
    orient_unshielded_colliders_inplace(out, sepsets, scope, warnings);
    return out;
}

namespace {

// True iff some rule wants the undirected-or-contested edge b-c as b->c.
const char* meek_demand(const Leg& p, NodeId b, NodeId c) {
    // Rule 1: a->b, b-c, a and c nonadjacent.
    for (NodeId a : p.adjacency(b))
        if (a != c && p.is_directed(a, b) && !p.adjacent(a, c)) return "meek r1";
    // Rule 2: b->a->c.
    for (NodeId a : p.adjacency(b))
        if (p.is_directed(b, a) && p.is_directed(a, c)) return "meek r2";
    // Rule 3: b-a1, b-a2, a1->c, a2->c, a1 and a2 nonadjacent.
    std::vector<NodeId> spokes;
    for (NodeId a : p.adjacency(b))
        if (p.is_undirected(b, a) && p.is_directed(a, c)) spokes.push_back(a);
    for (size_t i = 0; i < spokes.size(); ++i)
        for (size_t j = i + 1; j < spokes.size(); ++j)
            if (!p.adjacent(spokes[i], spokes[j])) return "meek r3";
    // Rule 4: d->a->c with b adjacent to both d and a, d and c nonadjacent.
    for (NodeId a : p.adjacency(c)) {
        if (!p.is_directed(a, c) || !p.adjacent(b, a) || a == b) continue;
        for (NodeId d : p.adjacency(a))
            if (d != b && d != c && p.is_directed(d, a) && p.adjacent(b, d) &&
                !p.adjacent(d, c))
                return "meek r4";
    }
    return nullptr;
}

// One sweep of rules 1-4; returns whether anything was oriented.
bool meek_sweep(Leg& p, const NodeSet& scope, std::vector<std::string>* warnings,
                std::set<std::pair<NodeId, NodeId>>& reported) {
    const int n = p.num_nodes();
    bool changed = false;
    for (NodeId b = 0; b < n; ++b) {
        if (!scope.count(b)) continue;
        for (NodeId c : std::vector<NodeId>(p.adjacency(b).begin(), p.adjacency(b).end())) {
            if (c < b || !scope.count(c) || !p.is_undirected(b, c)) continue;
            const char* forward = meek_demand(p, b, c);
            const char* backward = meek_demand(p, c, b);
            if (!forward && !backward) continue;
            if (forward && backward) {
                // Both orientations demanded at once: corrupted input marks.
                if (reported.emplace(b, c).second) {
                    std::ostringstream msg;
                    msg << forward << "/" << backward << " demand both orientations of "
                        << b << "-" << c << "; keeping " << b << "->" << c;
                    warn(warnings, msg.str());
                }
                p.orient(b, c);
            } else if (forward) {
                p.orient(b, c);
            } else {
                p.orient(c, b);
            }
            changed = true;
        }
    }
    return changed;
}

}  // namespace

void apply_meek_rules_inplace(Leg& p, const NodeSet& scope,
                              std::vector<std::string>* warnings) {
    std::set<std::pair<NodeId, NodeId>> reported;
    while (meek_sweep(p, scope, warnings, reported)) {
    }
}

Leg apply_meek_rules(const Leg& p, const NodeSet& scope,
                     std::vector<std::string>* warnings) {
    Leg out = p;
    apply_meek_rules_inplace(out, scope, warnings);
    return out;
}

Leg dag_to_cpdag(const Dag& g) {
    const int n = g.num_nodes();
    Leg p(n, 0, n, g.names());
    for (auto [a, b] : g.edges())
        p.add_undirected(std::min(a, b), std::max(a, b));

    NodeSet scope;
    for (NodeId v = 0; v < n; ++v) scope.insert(v);

    // V-structures straight from the DAG.
    for (NodeId b = 0; b < n; ++b) {
        std::vector<NodeId> pa(g.parents(b).begin(), g.parents(b).end());
        for (size_t i = 0; i < pa.size(); ++i)
            for (size_t j = i + 1; j < pa.size(); ++j)
                if (!g.adjacent(pa[i], pa[j])) {
                    if (p.is_undirected(pa[i], b)) p.orient(pa[i], b);
                    if (p.is_undirected(pa[j], b)) p.orient(pa[j], b);
                }
    }
    apply_meek_rules_inplace(p, scope, nullptr);
    return p;
}

std::optional<NodeSet> first_separator(const CiQuery& independent, NodeId x, NodeId y,
                                       const std::vector<NodeId>& candidates,
                                       int max_size) {
    std::vector<NodeId> pool;
    for (NodeId v : candidates)
        if (v != x && v != y) pool.push_back(v);
    std::sort(pool.begin(), pool.end());
    const int limit = max_size < 0 ? static_cast<int>(pool.size())
                                   : std::min<int>(max_size, pool.size());
    bool warned = false;
    for (int s = 0; s <= limit; ++s) {
        if (s > 12 && !warned) {
            std::cerr << "locpc: enumerating conditioning sets of size " << s << "\n";
            warned = true;
        }
        // Lexicographic combinations of size s.
        std::vector<int> idx(s);
        for (int i = 0; i < s; ++i) idx[i] = i;
        while (true) {
            NodeSet z;
            for (int i : idx) z.insert(pool[i]);
            if (independent(x, y, z)) return z;
            int k = s - 1;
            while (k >= 0 && idx[k] == static_cast<int>(pool.size()) - s + k) --k;
            if (k < 0) break;
            ++idx[k];
            for (int i = k + 1; i < s; ++i) idx[i] = idx[i - 1] + 1;
        }
        if (s == 0 && pool.empty()) break;
    }
    return std::nullopt;
}

std::map<NodeId, NodeSet> targeted_prune(const CiQuery& independent, int n_vars,
                                         NodeId d, std::vector<NodeSet>* trace) {
    std::map<NodeId, NodeSet> sepsets;
    NodeSet adj;
    for (NodeId v = 0; v < n_vars; ++v)
        if (v != d) adj.insert(v);
    std::vector<NodeSet> levels{adj};

    for (int s = 0; static_cast<int>(adj.size()) - 1 >= s; ++s) {
        const std::vector<NodeId> snapshot(adj.begin(), adj.end());
        for (NodeId a : snapshot) {
            if (static_cast<int>(snapshot.size()) - 1 < s) break;
            std::vector<NodeId> pool;
            for (NodeId v : snapshot)
                if (v != a) pool.push_back(v);
            auto sep = first_separator(independent, d, a, pool, s);
            // Smaller sets were exhausted at earlier levels; only a size-s
            // separator belongs to this one.
            if (sep && static_cast<int>(sep->size()) == s) {
                adj.erase(a);
                sepsets.emplace(a, std::move(*sep));
            }
        }
        levels.push_back(adj);
    }
    if (trace) {
        // Exactly n-1 recorded sets, the last being the exhausted survivors.
        trace->assign(levels.begin(),
                      levels.begin() + std::min<size_t>(levels.size(), n_vars - 2));
        while (static_cast<int>(trace->size()) < n_vars - 1) trace->push_back(adj);
        if (static_cast<int>(trace->size()) == n_vars - 1) trace->back() = adj;
    }
    return sepsets;
}

LocalSkeleton local_skeleton_search(
    const CiQuery& independent, int n_vars, NodeId y, int h, SepsetCache& sepsets,
    const std::function<bool(NodeId, NodeId, const NodeSet&)>& skip_test) {
    LocalSkeleton out{Leg(n_vars, y, h), {y}};
    Leg& work = out.graph;
    NodeSet& visited = out.visited;
    NodeSet frontier{y};

    for (int k = 0; k <= h && !frontier.empty(); ++k) {
        for (NodeId d : frontier)
            for (NodeId b = 0; b < n_vars; ++b)
                if (b != d && !work.adjacent(d, b) &&
                    sepsets.status(d, b) != SepsetCache::Status::SeparatedBy)
                    work.add_undirected(d, b);

        int s = 0;
        while (true) {
            bool any = false;
            for (NodeId d : frontier)
                if (static_cast<int>(work.adjacency(d).size()) - 1 >= s) any = true;
            if (!any) break;

            std::map<NodeId, std::vector<NodeId>> snapshot;
            for (NodeId d : frontier)
                snapshot[d] = std::vector<NodeId>(work.adjacency(d).begin(),
                                                  work.adjacency(d).end());

            for (NodeId d : frontier) {
                visited.insert(d);
                const auto& adj_d = snapshot[d];
                for (NodeId b : adj_d) {
                    if (!work.adjacent(d, b)) continue;  // removed this level
                    if (skip_test && skip_test(d, b, visited)) continue;
                    std::vector<NodeId> pool;
                    for (NodeId v : adj_d)
                        if (v != b) pool.push_back(v);
                    if (static_cast<int>(pool.size()) < s) continue;
                    auto sep = first_separator(independent, d, b, pool, s);
                    if (sep && static_cast<int>(sep->size()) == s) {
                        sepsets.record_separated(d, b, *sep);
                        work.remove_edge(d, b);
                    }
                }
            }
            ++s;
        }
        for (NodeId d : frontier)
            for (NodeId b : work.adjacency(d)) sepsets.record_no_sepset(d, b);

        NodeSet next;
        for (NodeId d : frontier)
            for (NodeId b : work.adjacency(d))
                if (!visited.count(b)) next.insert(b);
        frontier = std::move(next);
    }

    // The temporary frontier connections leave no trace outside the explored
    // ball: edges with both endpoints outside it carry no information.
    NodeSet nehood = work.hop_neighborhood(y, h);
    for (auto [a, b, mark] : work.marked_edges())
        if (!nehood.count(a) && !nehood.count(b)) work.remove_edge(a, b);
    return out;
}

void apply_boundary_bars(Leg& p, const NodeSet& nehood, const CiQuery& independent) {
    const int n = p.num_nodes();
    for (NodeId d = 0; d < n; ++d) {
        if (!nehood.count(d)) continue;
        std::vector<NodeId> boundary;
        for (NodeId a : p.adjacency(d))
            if (!nehood.count(a) && p.is_undirected(d, a)) boundary.push_back(a);
        if (boundary.empty()) continue;

        // Separators from d's own level-wise prune; partners it never
        // separated play no role, matching the neighbor/survivor exclusion.
        std::map<NodeId, NodeSet> sepsets = targeted_prune(independent, n, d);

        for (NodeId a : boundary) {
            bool veto = false, witness = false;
            for (const auto& [w, sep] : sepsets) {
                if (nehood.count(w) || w == a) continue;
                if (sep.count(a)) {
                    veto = true;
                    break;
                }
                if (!witness && sep.empty() && !independent(d, w, NodeSet{a}))
                    witness = true;
            }
            if (witness && !veto) {
                p.remove_edge(d, a);
                p.add_double_bar(d, a);
            }
        }
    }
}

}  // namespace locpc
