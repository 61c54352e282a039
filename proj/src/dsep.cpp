#include "locpc/dsep.hpp"

#include <deque>
#include <stdexcept>

namespace locpc {

// Ball passing over (node, arrival direction) states. A trail stays active
// through a non-collider not in z, and through a collider whose
// descendant-or-self set meets z.
bool d_separated(const Dag& g, NodeId x, NodeId y, const NodeSet& z) {
    if (x == y) throw std::invalid_argument("d_separated: identical endpoints");
    if (z.count(x) || z.count(y))
        throw std::invalid_argument("d_separated: endpoint inside conditioning set");

    const int n = g.num_nodes();
    // Colliders open iff they are in z or have a descendant in z, i.e. they
    // are ancestors-or-members of z.
    std::vector<char> z_or_anc(n, 0);
    {
        std::deque<NodeId> work;
        for (NodeId v : z) {
            z_or_anc[v] = 1;
            work.push_back(v);
        }
        while (!work.empty()) {
            NodeId v = work.front();
            work.pop_front();
            for (NodeId p : g.parents(v))
                if (!z_or_anc[p]) {
                    z_or_anc[p] = 1;
                    work.push_back(p);
                }
        }
    }

    // State: node * 2 + dir, dir 0 = entered along an edge into the node
    // (head side), dir 1 = entered from a child (tail side).
    std::vector<char> seen(static_cast<size_t>(n) * 2, 0);
    std::deque<std::pair<NodeId, int>> work;
    auto visit = [&](NodeId v, int dir) {
        if (v == y) return true;
        if (seen[v * 2 + dir]) return false;
        seen[v * 2 + dir] = 1;
        work.emplace_back(v, dir);
        return false;
    };

    for (NodeId c : g.children(x))
        if (visit(c, 0)) return false;
    for (NodeId p : g.parents(x))
        if (visit(p, 1)) return false;

    while (!work.empty()) {
        auto [v, dir] = work.front();
        work.pop_front();
        bool in_z = z.count(v) > 0;
        if (dir == 0) {
            // Arrived at the head of an edge: v passes the ball to its
            // children unless conditioned, and to its parents when it is an
            // opened collider.
            if (!in_z) {
                for (NodeId c : g.children(v))
                    if (visit(c, 0)) return false;
            }
            if (z_or_anc[v]) {
                for (NodeId p : g.parents(v))
                    if (visit(p, 1)) return false;
            }
        } else {
            // Arrived from a child: v is a non-collider on the trail.
            if (!in_z) {
                for (NodeId c : g.children(v))
                    if (visit(c, 0)) return false;
                for (NodeId p : g.parents(v))
                    if (visit(p, 1)) return false;
            }
        }
    }
    return true;
}

}  // namespace locpc
