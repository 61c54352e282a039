#pragma once

#include "locpc/graph.hpp"

namespace locpc {

/// True iff every path between x and y is blocked by z, decided by
/// linear-time reachability (ball passing), not path enumeration.
bool d_separated(const Dag& g, NodeId x, NodeId y, const NodeSet& z);

}  // namespace locpc
