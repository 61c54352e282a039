#include "locpc/discovery.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "locpc/cpdag.hpp"
#include "locpc/local.hpp"

namespace locpc {

bool BackgroundKnowledge::covers(NodeId d, NodeId b) const {
    auto it = forbidden_descendants.find(b);
    return it != forbidden_descendants.end() && it->second.count(d) > 0;
}

bool BackgroundKnowledge::consistent_with(const Dag& g) const {
    for (const auto& [b, ds] : forbidden_descendants) {
        NodeSet de = g.descendants(b);
        for (NodeId d : ds)
            if (d == b || de.count(d)) return false;
    }
    return true;
}

BackgroundKnowledge BackgroundKnowledge::parse(const std::string& text,
                                               const std::vector<std::string>& names) {
    auto resolve = [&](const std::string& token) -> NodeId {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == token) return static_cast<NodeId>(i);
        try {
            return std::stoi(token);
        } catch (const std::exception&) {
            throw std::invalid_argument("background knowledge: unknown node '" + token + "'");
        }
    };
    BackgroundKnowledge bk;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string tag, d_tok, b_tok;
        if (!(fields >> tag >> d_tok >> b_tok) || tag != "nondesc")
            throw std::invalid_argument("background knowledge: bad line '" + line + "'");
        bk.forbidden_descendants[resolve(b_tok)].insert(resolve(d_tok));
    }
    return bk;
}

std::string BackgroundKnowledge::to_text() const {
    std::ostringstream out;
    for (const auto& [b, ds] : forbidden_descendants)
        for (NodeId d : ds) out << "nondesc " << d << " " << b << "\n";
    return out.str();
}

LocPcResult loc_pc(const std::shared_ptr<CountedCi>& ci, int n_vars, NodeId y, int h,
                   SepsetCache sepsets, const BackgroundKnowledge& bk) {
    if (h < 0) throw std::invalid_argument("loc_pc: negative hop");
    if (y < 0 || y >= n_vars) throw std::invalid_argument("loc_pc: target out of range");
    const std::uint64_t count0 = ci->query_count();

    auto independent = [&](NodeId px, NodeId py, const NodeSet& z) {
        return ci->independent(px, py, z);
    };
    std::function<bool(NodeId, NodeId, const NodeSet&)> skip_test;
    if (!bk.empty())
        skip_test = [&bk](NodeId d, NodeId b, const NodeSet& visited) {
            return visited.count(b) && bk.covers(d, b);
        };

    LocalSkeleton skeleton =
        local_skeleton_search(independent, n_vars, y, h, sepsets, skip_test);
    NodeSet nehood = skeleton.graph.hop_neighborhood(y, h);

    LocPcResult result{std::move(skeleton.graph), {}, {}, 0, {}};
    for (const auto& [b, ds] : bk.forbidden_descendants)
        for (NodeId d : ds)
            if (result.leg.is_undirected(d, b)) result.leg.orient(d, b);
    orient_unshielded_colliders_inplace(result.leg, sepsets, nehood, &result.warnings);
    apply_meek_rules_inplace(result.leg, nehood, &result.warnings);
    apply_boundary_bars(result.leg, nehood, independent);

    result.sepsets = std::move(sepsets);
    result.visited = std::move(skeleton.visited);
    result.ci_count = ci->query_count() - count0;
    return result;
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::AllOriented: return "AllOriented";
        case StopReason::NocTriggered: return "NocTriggered";
        case StopReason::TreatmentNonAdjacent: return "TreatmentNonAdjacent";
        case StopReason::TreatmentIsChild: return "TreatmentIsChild";
        case StopReason::Exhausted: return "Exhausted";
    }
    return "Unknown";
}

CdeReport loc_pc_cde(const std::shared_ptr<CountedCi>& ci, int n_vars, NodeId x,
                     NodeId y, const BackgroundKnowledge& bk) {
    if (x == y) throw std::invalid_argument("loc_pc_cde: treatment equals outcome");
    const std::uint64_t count0 = ci->query_count();

    LocPcResult res = loc_pc(ci, n_vars, y, 0, {}, bk);
    SepsetCache sepsets = res.sepsets;
    NodeSet candidate{y};
    int hops_used = 0;

    CdeReport report{false, std::nullopt, res.leg, 0, StopReason::Exhausted, 0};
    for (int h = 1;; ++h) {
        if (!res.leg.adjacent(x, y)) {
            report.identifiable = true;
            report.stop_reason = StopReason::TreatmentNonAdjacent;
            break;
        }
        if (res.leg.is_directed(y, x)) {
            report.identifiable = true;
            report.stop_reason = StopReason::TreatmentIsChild;
            break;
        }
        if (res.leg.nonarrow_neighbors(y).empty()) {
            report.identifiable = true;
            report.stop_reason = StopReason::AllOriented;
            break;
        }
        if (hops_used >= 1) {
            candidate = grow_noc_candidate(res.leg, candidate);
            if (noc_satisfied(res.leg, candidate)) {
                report.identifiable = false;
                report.stop_reason = StopReason::NocTriggered;
                break;
            }
        }
        if (static_cast<int>(res.visited.size()) == n_vars) {
            report.identifiable = false;
            report.stop_reason = StopReason::Exhausted;
            break;
        }
        res = loc_pc(ci, n_vars, y, h, std::move(sepsets), bk);
        sepsets = res.sepsets;
        hops_used = h;
    }

    report.leg = res.leg;
    report.hops_used = hops_used;
    if (report.identifiable) report.adjustment_set = res.leg.parents(y);
    report.ci_count = ci->query_count() - count0;
    return report;
}

Leg pc_baseline(const std::shared_ptr<CountedCi>& ci, int n_vars) {
    Leg work(n_vars, 0, n_vars);
    for (NodeId a = 0; a < n_vars; ++a)
        for (NodeId b = a + 1; b < n_vars; ++b) work.add_undirected(a, b);

    SepsetCache sepsets;
    auto independent = [&](NodeId px, NodeId py, const NodeSet& z) {
        return ci->independent(px, py, z);
    };

    int s = 0;
    while (true) {
        bool any = false;
        for (NodeId v = 0; v < n_vars; ++v)
            if (static_cast<int>(work.adjacency(v).size()) - 1 >= s) any = true;
        if (!any) break;

        std::vector<std::vector<NodeId>> snapshot(n_vars);
        for (NodeId v = 0; v < n_vars; ++v)
            snapshot[v] = std::vector<NodeId>(work.adjacency(v).begin(),
                                              work.adjacency(v).end());

        for (NodeId a = 0; a < n_vars; ++a)
            for (NodeId b : snapshot[a]) {
                if (!work.adjacent(a, b)) continue;
                std::vector<NodeId> pool;
                for (NodeId v : snapshot[a])
                    if (v != b) pool.push_back(v);
                if (static_cast<int>(pool.size()) < s) continue;
                auto sep = first_separator(independent, a, b, pool, s);
                if (sep && static_cast<int>(sep->size()) == s) {
                    sepsets.record_separated(a, b, *sep);
                    work.remove_edge(a, b);
                }
            }
        ++s;
    }

    NodeSet all;
    for (NodeId v = 0; v < n_vars; ++v) all.insert(v);
    orient_unshielded_colliders_inplace(work, sepsets, all, nullptr);
    apply_meek_rules_inplace(work, all, nullptr);
    return work;
}

namespace {

// Little-endian decimal bignum, base 1e9.
struct BigUint {
    std::vector<std::uint32_t> limbs{0};

    static BigUint from_u64(std::uint64_t v) {
        BigUint out;
        out.limbs.clear();
        do {
            out.limbs.push_back(static_cast<std::uint32_t>(v % 1000000000ull));
            v /= 1000000000ull;
        } while (v);
        return out;
    }
    void add(const BigUint& other) {
        std::uint64_t carry = 0;
        size_t m = std::max(limbs.size(), other.limbs.size());
        limbs.resize(m, 0);
        for (size_t i = 0; i < m; ++i) {
            std::uint64_t sum = carry + limbs[i] +
                                (i < other.limbs.size() ? other.limbs[i] : 0);
            limbs[i] = static_cast<std::uint32_t>(sum % 1000000000ull);
            carry = sum / 1000000000ull;
        }
        if (carry) limbs.push_back(static_cast<std::uint32_t>(carry));
    }
    void mul_small(std::uint64_t k) {
        std::uint64_t carry = 0;
        for (auto& limb : limbs) {
            unsigned __int128 prod = static_cast<unsigned __int128>(limb) * k + carry;
            limb = static_cast<std::uint32_t>(prod % 1000000000ull);
            carry = static_cast<std::uint64_t>(prod / 1000000000ull);
        }
        while (carry) {
            limbs.push_back(static_cast<std::uint32_t>(carry % 1000000000ull));
            carry /= 1000000000ull;
        }
    }
    void mul(const BigUint& other) {
        std::vector<std::uint64_t> acc(limbs.size() + other.limbs.size(), 0);
        for (size_t i = 0; i < limbs.size(); ++i)
            for (size_t j = 0; j < other.limbs.size(); ++j) {
                unsigned __int128 prod =
                    static_cast<unsigned __int128>(limbs[i]) * other.limbs[j];
                size_t k = i + j;
                std::uint64_t lo = static_cast<std::uint64_t>(prod % 1000000000ull);
                std::uint64_t hi = static_cast<std::uint64_t>(prod / 1000000000ull);
                acc[k] += lo;
                acc[k + 1] += hi + acc[k] / 1000000000ull;
                acc[k] %= 1000000000ull;
            }
        // Normalize remaining carries.
        for (size_t k = 0; k + 1 < acc.size(); ++k) {
            acc[k + 1] += acc[k] / 1000000000ull;
            acc[k] %= 1000000000ull;
        }
        limbs.assign(acc.size(), 0);
        for (size_t k = 0; k < acc.size(); ++k)
            limbs[k] = static_cast<std::uint32_t>(acc[k]);
        while (limbs.size() > 1 && limbs.back() == 0) limbs.pop_back();
    }
    std::string to_string() const {
        std::ostringstream out;
        out << limbs.back();
        for (size_t i = limbs.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limbs[i]);
            out << std::string(9 - part.size(), '0') << part;
        }
        return out.str();
    }
    std::uint64_t to_u64_saturating() const {
        unsigned __int128 v = 0;
        for (size_t i = limbs.size(); i-- > 0;) {
            v = v * 1000000000ull + limbs[i];
            if (v > static_cast<unsigned __int128>(UINT64_MAX))
                return UINT64_MAX;
        }
        return static_cast<std::uint64_t>(v);
    }
};

BigUint bound_value(int n, int k_d, int k_i, int h) {
    if (n < 3) throw std::invalid_argument("ci_test_bound: n must be >= 3");
    if (k_d < 1) throw std::invalid_argument("ci_test_bound: k_d must be >= 1");
    if (k_i < 0 || h < 0) throw std::invalid_argument("ci_test_bound: negative argument");
    const int k_l = k_d + k_i;

    // 1 + k_l * sum_{j=0}^{h-1} k_d^j  (the closed geometric form).
    BigUint geo = BigUint::from_u64(0);
    BigUint power = BigUint::from_u64(1);
    for (int j = 0; j < h; ++j) {
        geo.add(power);
        power.mul_small(static_cast<std::uint64_t>(k_d));
    }
    geo.mul_small(static_cast<std::uint64_t>(k_l));
    geo.add(BigUint::from_u64(1));

    // sum_{s=0}^{k_l} C(n-2, s), with C(m, s) = 0 past s = m.
    BigUint sum = BigUint::from_u64(0);
    const int m = n - 2;
    BigUint binom = BigUint::from_u64(1);
    for (int s = 0; s <= std::min(k_l, m); ++s) {
        sum.add(binom);
        // C(m, s+1) = C(m, s) * (m - s) / (s + 1); the division is exact and
        // fits in the small multiplier path because we fold it numerically.
        if (s < m) {
            binom.mul_small(static_cast<std::uint64_t>(m - s));
            // divide by s+1 exactly
            std::uint64_t rem = 0;
            for (size_t i = binom.limbs.size(); i-- > 0;) {
                std::uint64_t cur = rem * 1000000000ull + binom.limbs[i];
                binom.limbs[i] = static_cast<std::uint32_t>(cur / (s + 1));
                rem = cur % (s + 1);
            }
            while (binom.limbs.size() > 1 && binom.limbs.back() == 0)
                binom.limbs.pop_back();
        }
    }

    BigUint result = geo;
    result.mul(sum);
    result.mul_small(static_cast<std::uint64_t>(n - 1));
    return result;
}

}  // namespace

std::string ci_test_bound(int n, int k_d, int k_i, int h) {
    return bound_value(n, k_d, k_i, h).to_string();
}

std::uint64_t ci_test_bound_u64(int n, int k_d, int k_i, int h) {
    return bound_value(n, k_d, k_i, h).to_u64_saturating();
}

}  // namespace locpc
