#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "locpc/graph.hpp"

namespace locpc {

struct CiOutcome {
    bool independent = false;
    double p_value = 0.0;
    bool degenerate = false;    // singular correlation submatrix
    bool underpowered = false;  // too few samples for the table size
};

/// Answers "is x independent of y given z?". Implementations are safe for
/// concurrent queries; the counter only grows.
class CiSource {
  public:
    virtual ~CiSource() = default;
    virtual CiOutcome test(NodeId x, NodeId y, const NodeSet& z) = 0;
    virtual std::uint64_t query_count() const = 0;

    bool independent(NodeId x, NodeId y, const NodeSet& z) {
        return test(x, y, z).independent;
    }
};

/// Per-pair record of the separating set found, or the proven absence of one.
class SepsetCache {
  public:
    enum class Status { Untested, SeparatedBy, NoSepsetFound };

    Status status(NodeId a, NodeId b) const;
    const NodeSet& sepset(NodeId a, NodeId b) const;
    void record_separated(NodeId a, NodeId b, NodeSet z);
    void record_no_sepset(NodeId a, NodeId b);
    bool separated(NodeId a, NodeId b) const { return status(a, b) == Status::SeparatedBy; }
    std::size_t size() const { return entries_.size(); }

  private:
    struct Entry {
        Status status;
        NodeSet set;
    };
    static std::pair<NodeId, NodeId> key(NodeId a, NodeId b);
    std::map<std::pair<NodeId, NodeId>, Entry> entries_;
};

enum class DataKind { Continuous, Binary };

/// Sample-major numeric matrix with named columns. Binary data is {0,1}.
struct Dataset {
    DataKind kind = DataKind::Continuous;
    int n_samples = 0;
    int n_vars = 0;
    std::vector<std::string> names;
    std::vector<double> values;  // row-major, n_samples x n_vars

    double at(int row, int col) const { return values[static_cast<size_t>(row) * n_vars + col]; }
    double& at(int row, int col) { return values[static_cast<size_t>(row) * n_vars + col]; }
    int column(const std::string& name) const;
    void check() const;

    std::string to_csv() const;
    static Dataset from_csv(const std::string& text, DataKind kind);
};

/// CI source whose answers equal d-separation on g.
std::shared_ptr<CiSource> oracle_ci(const Dag& g);

/// Fisher-z partial-correlation test on continuous data. The correlation
/// matrix is computed once and cached.
std::shared_ptr<CiSource> fisher_z_source(Dataset data, double alpha);

/// G^2 test on binary data, stratified over the conditioning set.
std::shared_ptr<CiSource> g_square_source(Dataset data, double alpha);

/// One-shot conveniences used by tests.
CiOutcome fisher_z(const Dataset& data, NodeId x, NodeId y, const NodeSet& z, double alpha);
CiOutcome g_square(const Dataset& data, NodeId x, NodeId y, const NodeSet& z, double alpha);

/// Wraps a source, canonicalizing (x, y) order, memoizing every distinct
/// query and counting only first-time queries. Answers never change.
class CountedCi : public CiSource {
  public:
    explicit CountedCi(std::shared_ptr<CiSource> inner);
    CiOutcome test(NodeId x, NodeId y, const NodeSet& z) override;
    std::uint64_t query_count() const override { return count_; }

  private:
    std::shared_ptr<CiSource> inner_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, CiOutcome> memo_;
    std::uint64_t count_ = 0;
};

std::shared_ptr<CountedCi> counted(std::shared_ptr<CiSource> inner);

/// Forwards to an inner source and writes one line per query:
/// x;y;z-list;verdict;p-value
class AuditCi : public CiSource {
  public:
    AuditCi(std::shared_ptr<CiSource> inner, std::ostream& out);
    CiOutcome test(NodeId x, NodeId y, const NodeSet& z) override;
    std::uint64_t query_count() const override { return inner_->query_count(); }

  private:
    std::shared_ptr<CiSource> inner_;
    std::ostream& out_;
    std::mutex mutex_;
};

// Distribution tails used by the tests (closed forms; df here is 1 or even).
double normal_two_sided_p(double stat);
double chi_square_upper_tail(int df, double x);

}  // namespace locpc
