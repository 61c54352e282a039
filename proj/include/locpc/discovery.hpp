#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locpc/ci.hpp"
#include "locpc/graph.hpp"

namespace locpc {

/// Expert knowledge: D in forbidden_descendants[B] asserts D is a
/// non-descendant of B. Visited edges covered by an assertion are not
/// retested and orient D -> B.
struct BackgroundKnowledge {
    std::map<NodeId, NodeSet> forbidden_descendants;

    bool empty() const { return forbidden_descendants.empty(); }
    bool covers(NodeId d, NodeId b) const;
    /// No assertion may name a descendant: checks no directed path B => D.
    bool consistent_with(const Dag& g) const;

    /// Lines of the form: nondesc <D> <B>
    static BackgroundKnowledge parse(const std::string& text,
                                     const std::vector<std::string>& names);
    std::string to_text() const;
};

struct LocPcResult {
    Leg leg;
    SepsetCache sepsets;
    NodeSet visited;
    std::uint64_t ci_count = 0;
    std::vector<std::string> warnings;
};

/// PC-style local discovery around y out to hop h. Resumes from a pre-filled
/// sepset cache: separated pairs are never reconnected; surviving edges are
/// retested from the new frontier side (repeat queries hit the counted
/// source's memo).
LocPcResult loc_pc(const std::shared_ptr<CountedCi>& ci, int n_vars, NodeId y, int h,
                   SepsetCache sepsets = {}, const BackgroundKnowledge& bk = {});

enum class StopReason {
    AllOriented,
    NocTriggered,
    TreatmentNonAdjacent,
    TreatmentIsChild,
    Exhausted,
};

std::string to_string(StopReason r);

struct CdeReport {
    bool identifiable = false;
    std::optional<NodeSet> adjustment_set;  // directed in-neighbors of y
    Leg leg;
    int hops_used = 0;
    StopReason stop_reason = StopReason::Exhausted;
    std::uint64_t ci_count = 0;
};

/// Incremental hop expansion around y deciding identifiability of the
/// controlled direct effect of x on y; stops early on the non-orientability
/// criterion. Termination checks run before the NOC check each round.
CdeReport loc_pc_cde(const std::shared_ptr<CountedCi>& ci, int n_vars, NodeId x,
                     NodeId y, const BackgroundKnowledge& bk = {});

/// Standard order-stable PC: global skeleton, colliders, full Meek closure.
Leg pc_baseline(const std::shared_ptr<CountedCi>& ci, int n_vars);

/// Worst-case CI-test count of the local search:
/// (1 + k_l * (1 - k_d^h) / (1 - k_d)) * (n-1) * sum_{s=0}^{k_l} C(n-2, s)
/// with k_l = k_d + k_i, evaluated exactly; the decimal string never
/// overflows.
std::string ci_test_bound(int n, int k_d, int k_i, int h);

/// ci_test_bound clamped to uint64 for comparisons against measured counts.
std::uint64_t ci_test_bound_u64(int n, int k_d, int k_i, int h);

}  // namespace locpc
