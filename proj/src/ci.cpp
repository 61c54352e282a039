#include "locpc/ci.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "locpc/dsep.hpp"

namespace locpc {

std::pair<NodeId, NodeId> SepsetCache::key(NodeId a, NodeId b) {
    return {std::min(a, b), std::max(a, b)};
}

SepsetCache::Status SepsetCache::status(NodeId a, NodeId b) const {
    auto it = entries_.find(key(a, b));
    return it == entries_.end() ? Status::Untested : it->second.status;
}

const NodeSet& SepsetCache::sepset(NodeId a, NodeId b) const {
    auto it = entries_.find(key(a, b));
    if (it == entries_.end() || it->second.status != Status::SeparatedBy)
        throw std::logic_error("SepsetCache: no separating set recorded for pair");
    return it->second.set;
}

void SepsetCache::record_separated(NodeId a, NodeId b, NodeSet z) {
    entries_[key(a, b)] = Entry{Status::SeparatedBy, std::move(z)};
}

void SepsetCache::record_no_sepset(NodeId a, NodeId b) {
    auto k = key(a, b);
    if (entries_.count(k)) return;  // add-only, never downgrade a found set
    entries_[k] = Entry{Status::NoSepsetFound, {}};
}

int Dataset::column(const std::string& name) const {
    for (int i = 0; i < n_vars; ++i)
        if (names[i] == name) return i;
    throw std::invalid_argument("Dataset: unknown column '" + name + "'");
}

void Dataset::check() const {
    if (n_samples < 1) throw std::invalid_argument("Dataset: needs at least one sample");
    if (static_cast<int>(names.size()) != n_vars)
        throw std::invalid_argument("Dataset: name count mismatch");
    if (values.size() != static_cast<size_t>(n_samples) * n_vars)
        throw std::invalid_argument("Dataset: value count mismatch");
    for (double v : values) {
        if (std::isnan(v)) throw std::invalid_argument("Dataset: missing value");
        if (kind == DataKind::Binary && v != 0.0 && v != 1.0)
            throw std::invalid_argument("Dataset: binary data must be 0/1");
    }
}

std::string Dataset::to_csv() const {
    std::ostringstream out;
    for (int j = 0; j < n_vars; ++j) out << (j ? "," : "") << names[j];
    out << "\n";
    char buf[64];
    for (int i = 0; i < n_samples; ++i) {
        for (int j = 0; j < n_vars; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", at(i, j));
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
    return out.str();
}

Dataset Dataset::from_csv(const std::string& text, DataKind kind) {
    Dataset d;
    d.kind = kind;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("from_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream head(line);
    std::string field;
    while (std::getline(head, field, ',')) d.names.push_back(field);
    d.n_vars = static_cast<int>(d.names.size());
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        int cols = 0;
        while (std::getline(row, field, ',')) {
            d.values.push_back(std::stod(field));
            ++cols;
        }
        if (cols != d.n_vars) throw std::invalid_argument("from_csv: ragged row");
        ++d.n_samples;
    }
    d.check();
    return d;
}

double normal_two_sided_p(double stat) {
    return std::erfc(std::fabs(stat) / std::sqrt(2.0));
}

double chi_square_upper_tail(int df, double x) {
    if (x <= 0.0) return 1.0;
    if (df == 1) return std::erfc(std::sqrt(x / 2.0));
    if (df % 2 != 0) throw std::invalid_argument("chi_square_upper_tail: odd df > 1 unsupported");
    // Q(m, x/2) as the Poisson left sum, exact for even df.
    const int m = df / 2;
    double term = std::exp(-x / 2.0);
    double sum = term;
    for (int j = 1; j < m; ++j) {
        term *= (x / 2.0) / j;
        sum += term;
    }
    return std::min(1.0, sum);
}

namespace {

class OracleCi : public CiSource {
  public:
    explicit OracleCi(Dag g) : g_(std::move(g)) {}
    CiOutcome test(NodeId x, NodeId y, const NodeSet& z) override {
        ++count_;
        bool sep = d_separated(g_, x, y, z);
        return CiOutcome{sep, sep ? 1.0 : 0.0, false, false};
    }
    std::uint64_t query_count() const override { return count_; }

  private:
    Dag g_;
    std::atomic<std::uint64_t> count_{0};
};

class FisherZCi : public CiSource {
  public:
    FisherZCi(Dataset data, double alpha) : data_(std::move(data)), alpha_(alpha) {
        data_.check();
        if (data_.kind != DataKind::Continuous)
            throw std::invalid_argument("fisher_z: continuous data required");
        corr_ = correlation_matrix(data_);
    }

    CiOutcome test(NodeId x, NodeId y, const NodeSet& z) override {
        ++count_;
        const int m = static_cast<int>(z.size()) + 2;
        if (data_.n_samples <= static_cast<int>(z.size()) + 3)
            throw std::invalid_argument("fisher_z: not enough samples for |z|");

        std::vector<int> idx{x, y};
        idx.insert(idx.end(), z.begin(), z.end());
        Eigen::MatrixXd sub(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) sub(i, j) = corr_(idx[i], idx[j]);

        bool degenerate = false;
        Eigen::MatrixXd prec;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& s = svd.singularValues();
        if (s(m - 1) <= 0.0 || s(0) / s(m - 1) > 1e12) {
            degenerate = true;
            Eigen::VectorXd inv = s;
            for (int i = 0; i < m; ++i) inv(i) = s(i) > s(0) * 1e-12 ? 1.0 / s(i) : 0.0;
            prec = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
        } else {
            prec = sub.inverse();
        }
        if (degenerate) return CiOutcome{false, 0.0, true, false};

        double denom = prec(0, 0) * prec(1, 1);
        double r = denom > 0.0 ? -prec(0, 1) / std::sqrt(denom) : 0.0;
        r = std::clamp(r, -1.0 + 1e-12, 1.0 - 1e-12);
        double stat = std::sqrt(data_.n_samples - static_cast<int>(z.size()) - 3.0) *
                      std::fabs(0.5 * std::log((1.0 + r) / (1.0 - r)));
        double p = normal_two_sided_p(stat);
        return CiOutcome{p > alpha_, p, false, false};
    }

    std::uint64_t query_count() const override { return count_; }

  private:
    static Eigen::MatrixXd correlation_matrix(const Dataset& d) {
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            values(d.values.data(), d.n_samples, d.n_vars);
        Eigen::MatrixXd centered = values.rowwise() - values.colwise().mean();
        Eigen::MatrixXd cov = centered.transpose() * centered / double(d.n_samples - 1);
        Eigen::VectorXd sd = cov.diagonal().cwiseSqrt();
        Eigen::MatrixXd corr(d.n_vars, d.n_vars);
        for (int i = 0; i < d.n_vars; ++i)
            for (int j = 0; j < d.n_vars; ++j) {
                double denom = sd(i) * sd(j);
                corr(i, j) = denom > 0.0 ? cov(i, j) / denom : (i == j ? 1.0 : 0.0);
            }
        return corr;
    }

    Dataset data_;
    double alpha_;
    Eigen::MatrixXd corr_;
    std::atomic<std::uint64_t> count_{0};
};

class GSquareCi : public CiSource {
  public:
    GSquareCi(Dataset data, double alpha) : data_(std::move(data)), alpha_(alpha) {
        data_.check();
        if (data_.kind != DataKind::Binary)
            throw std::invalid_argument("g_square: binary data required");
    }

    CiOutcome test(NodeId x, NodeId y, const NodeSet& z) override {
        ++count_;
        if (z.size() > 30) throw std::invalid_argument("g_square: conditioning set too large");
        const int df = 1 << z.size();
        if (data_.n_samples < 10 * df) return CiOutcome{true, 1.0, false, true};

        std::vector<int> zidx(z.begin(), z.end());
        const int strata = df;
        std::vector<std::array<std::array<double, 2>, 2>> table(
            strata, {{{0.0, 0.0}, {0.0, 0.0}}});
        for (int i = 0; i < data_.n_samples; ++i) {
            int s = 0;
            for (size_t k = 0; k < zidx.size(); ++k)
                if (data_.at(i, zidx[k]) != 0.0) s |= 1 << k;
            int xv = data_.at(i, x) != 0.0;
            int yv = data_.at(i, y) != 0.0;
            table[s][xv][yv] += 1.0;
        }

        double g2 = 0.0;
        for (int s = 0; s < strata; ++s) {
            double total = table[s][0][0] + table[s][0][1] + table[s][1][0] + table[s][1][1];
            if (total <= 0.0) continue;
            double rx[2] = {table[s][0][0] + table[s][0][1], table[s][1][0] + table[s][1][1]};
            double cy[2] = {table[s][0][0] + table[s][1][0], table[s][0][1] + table[s][1][1]};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    double o = table[s][a][b];
                    if (o <= 0.0) continue;
                    double e = rx[a] * cy[b] / total;
                    g2 += 2.0 * o * std::log(o / e);
                }
        }
        if (g2 < 0.0) g2 = 0.0;
        double p = chi_square_upper_tail(df, g2);
        return CiOutcome{p > alpha_, p, false, false};
    }

    std::uint64_t query_count() const override { return count_; }

  private:
    Dataset data_;
    double alpha_;
    std::atomic<std::uint64_t> count_{0};
};

std::string canonical_key(NodeId x, NodeId y, const NodeSet& z) {
    std::ostringstream out;
    out << std::min(x, y) << "|" << std::max(x, y) << "|";
    for (NodeId v : z) out << v << ",";
    return out.str();
}

}  // namespace

std::shared_ptr<CiSource> oracle_ci(const Dag& g) { return std::make_shared<OracleCi>(g); }

std::shared_ptr<CiSource> fisher_z_source(Dataset data, double alpha) {
    return std::make_shared<FisherZCi>(std::move(data), alpha);
}

std::shared_ptr<CiSource> g_square_source(Dataset data, double alpha) {
    return std::make_shared<GSquareCi>(std::move(data), alpha);
}

CiOutcome fisher_z(const Dataset& data, NodeId x, NodeId y, const NodeSet& z, double alpha) {
    return FisherZCi(data, alpha).test(x, y, z);
}

CiOutcome g_square(const Dataset& data, NodeId x, NodeId y, const NodeSet& z, double alpha) {
    return GSquareCi(data, alpha).test(x, y, z);
}

CountedCi::CountedCi(std::shared_ptr<CiSource> inner) : inner_(std::move(inner)) {}

CiOutcome CountedCi::test(NodeId x, NodeId y, const NodeSet& z) {
    auto key = canonical_key(x, y, z);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    CiOutcome outcome = inner_->test(std::min(x, y), std::max(x, y), z);
    std::lock_guard<std::mutex> lock(mutex_);
    auto [it, fresh] = memo_.emplace(key, outcome);
    if (fresh) ++count_;
    return it->second;
}

std::shared_ptr<CountedCi> counted(std::shared_ptr<CiSource> inner) {
    return std::make_shared<CountedCi>(std::move(inner));
}

AuditCi::AuditCi(std::shared_ptr<CiSource> inner, std::ostream& out)
    : inner_(std::move(inner)), out_(out) {}

CiOutcome AuditCi::test(NodeId x, NodeId y, const NodeSet& z) {
    CiOutcome outcome = inner_->test(x, y, z);
    std::lock_guard<std::mutex> lock(mutex_);
    out_ << x << ";" << y << ";";
    bool first = true;
    for (NodeId v : z) {
        out_ << (first ? "" : ",") << v;
        first = false;
    }
    out_ << ";" << (outcome.independent ? "independent" : "dependent") << ";"
         << outcome.p_value << "\n";
    return outcome;
}

}  // namespace locpc
