#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "locpc/ci.hpp"
#include "locpc/datagen.hpp"
#include "locpc/dsep.hpp"
#include "test_util.hpp"

using namespace locpc;
using testutil::set_of;

namespace {

Dataset independent_pair(std::uint64_t seed, int n) {
    Rng rng(seed, 77);
    Dataset d;
    d.kind = DataKind::Continuous;
    d.n_samples = n;
    d.n_vars = 2;
    d.names = {"a", "b"};
    d.values.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        d.at(i, 0) = rng.normal();
        d.at(i, 1) = rng.normal();
    }
    return d;
}

Dataset fair_coins(std::uint64_t seed, int n) {
    Rng rng(seed, 78);
    Dataset d;
    d.kind = DataKind::Binary;
    d.n_samples = n;
    d.n_vars = 2;
    d.names = {"a", "b"};
    d.values.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        d.at(i, 0) = rng.uniform() < 0.5 ? 1.0 : 0.0;
        d.at(i, 1) = rng.uniform() < 0.5 ? 1.0 : 0.0;
    }
    return d;
}

}  // namespace

TEST_CASE("oracle source mirrors separation") {
    Dag chain(3, {{0, 1}, {1, 2}});
    auto src = oracle_ci(chain);
    CHECK(src->independent(0, 2, {1}));
    CHECK_FALSE(src->independent(0, 2, {}));
    CHECK(src->query_count() == 2);

    Dag running_g = testutil::running_example_dag();
    auto running_src = oracle_ci(running_g);
    const NodeId M = 1, Y = 2, Z2 = 4, Z3 = 5, Z5 = 7;
    // Open path Z2 -> X -> M.
    CHECK_FALSE(running_src->independent(M, Z2, {}));
    CHECK(running_src->independent(Y, Z5, {Z2, Z3}));
    CHECK(testutil::d_separated_by_paths(running_g, Y, Z5, {Z2, Z3}));

    // Agreement with the path oracle on small random graphs.
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        Dag g = testutil::random_dag(6, seed);
        auto s = oracle_ci(g);
        for (NodeId x = 0; x < 6; ++x)
            for (NodeId y = x + 1; y < 6; ++y) {
                CHECK(s->independent(x, y, {}) ==
                      testutil::d_separated_by_paths(g, x, y, {}));
                NodeSet z;
                for (NodeId v = 0; v < 6; ++v)
                    if (v != x && v != y && (v + seed) % 2 == 0) z.insert(v);
                CHECK(s->independent(x, y, z) ==
                      testutil::d_separated_by_paths(g, x, y, z));
            }
    }
}

TEST_CASE("sepset cache statuses") {
    SepsetCache cache;
    CHECK(cache.status(0, 1) == SepsetCache::Status::Untested);
    cache.record_separated(1, 0, {2, 3});
    CHECK(cache.status(0, 1) == SepsetCache::Status::SeparatedBy);
    CHECK(cache.sepset(0, 1) == set_of({2, 3}));
    cache.record_no_sepset(0, 1);  // never downgrades
    CHECK(cache.status(0, 1) == SepsetCache::Status::SeparatedBy);
    cache.record_no_sepset(0, 2);
    CHECK(cache.status(2, 0) == SepsetCache::Status::NoSepsetFound);
    CHECK_THROWS(cache.sepset(0, 2));
}

TEST_CASE("dataset csv round trip and validation") {
    Dataset d;
    d.kind = DataKind::Continuous;
    d.n_samples = 2;
    d.n_vars = 3;
    d.names = {"x", "y", "z"};
    d.values = {1.5, -2.25, 0.125, 3.0, 0.1, -7.5};
    Dataset back = Dataset::from_csv(d.to_csv(), DataKind::Continuous);
    CHECK(back.values == d.values);
    CHECK(back.names == d.names);

    Dataset bad = d;
    bad.kind = DataKind::Binary;
    CHECK_THROWS(bad.check());
}

TEST_CASE("fisher-z flags exact copies as dependent") {
    Rng rng(5, 1);
    Dataset d;
    d.kind = DataKind::Continuous;
    d.n_samples = 200;
    d.n_vars = 3;
    d.names = {"x", "y", "w"};
    d.values.resize(600);
    for (int i = 0; i < 200; ++i) {
        double v = rng.normal();
        d.at(i, 0) = v;
        d.at(i, 1) = v;
        d.at(i, 2) = rng.normal();
    }
    for (double alpha : {0.001, 0.05, 0.2, 0.9}) {
        CiOutcome out = fisher_z(d, 0, 1, {}, alpha);
        CHECK_FALSE(out.independent);
    }
    // A duplicated column inside the conditioning set is degenerate.
    CiOutcome deg = fisher_z(d, 0, 2, {1}, 0.05);
    CHECK(deg.degenerate);
    CHECK_FALSE(deg.independent);

    Dataset tiny = d;
    tiny.n_samples = 4;
    tiny.values.resize(12);
    CHECK_THROWS(fisher_z(tiny, 0, 1, {2}, 0.05));
}

TEST_CASE("fisher-z with empty set reduces to the correlation test") {
    Dataset d = independent_pair(11, 400);
    CiOutcome out = fisher_z(d, 0, 1, {}, 0.05);

    // Pearson correlation by hand.
    double mx = 0, my = 0;
    for (int i = 0; i < d.n_samples; ++i) {
        mx += d.at(i, 0);
        my += d.at(i, 1);
    }
    mx /= d.n_samples;
    my /= d.n_samples;
    double sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < d.n_samples; ++i) {
        sxy += (d.at(i, 0) - mx) * (d.at(i, 1) - my);
        sxx += (d.at(i, 0) - mx) * (d.at(i, 0) - mx);
        syy += (d.at(i, 1) - my) * (d.at(i, 1) - my);
    }
    double r = sxy / std::sqrt(sxx * syy);
    double stat = std::sqrt(d.n_samples - 3.0) * std::fabs(std::atanh(r));
    CHECK(out.p_value == doctest::Approx(normal_two_sided_p(stat)).epsilon(1e-9));
}

TEST_CASE("fisher-z null calibration") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        if (!fisher_z(independent_pair(seed, 5000), 0, 1, {}, 0.05).independent)
            ++rejections;
    double rate = rejections / 200.0;
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.09);
}

TEST_CASE("fisher-z separates the simulated chain") {
    Dag chain(3, {{0, 1}, {1, 2}}, {"A", "B", "C"});
    ScmSpec spec = make_scm(chain, ScmKind::LinearGaussian, 99);
    Dataset data = simulate(spec, 5000);
    CHECK_FALSE(fisher_z(data, 0, 2, {}, 0.05).independent);
    CHECK(fisher_z(data, 0, 2, {1}, 0.05).independent);
}

TEST_CASE("g-square flags identical columns and respects power") {
    Rng rng(6, 2);
    Dataset d;
    d.kind = DataKind::Binary;
    d.n_samples = 5000;
    d.n_vars = 2;
    d.names = {"x", "y"};
    d.values.resize(10000);
    for (int i = 0; i < 5000; ++i) {
        double v = rng.uniform() < 0.5 ? 1.0 : 0.0;
        d.at(i, 0) = v;
        d.at(i, 1) = v;
    }
    CHECK_FALSE(g_square(d, 0, 1, {}, 0.05).independent);

    // Too few samples for the stratified table: independent, flagged.
    Dataset small = fair_coins(1, 9);
    CiOutcome weak = g_square(small, 0, 1, {}, 0.05);
    CHECK(weak.independent);
    CHECK(weak.underpowered);
}

TEST_CASE("g-square statistic is zero on an exactly factorizing table") {
    Dataset d;
    d.kind = DataKind::Binary;
    d.n_samples = 16;
    d.n_vars = 2;
    d.names = {"x", "y"};
    for (int xv = 0; xv < 2; ++xv)
        for (int yv = 0; yv < 2; ++yv)
            for (int k = 0; k < 4; ++k) {
                d.values.push_back(xv);
                d.values.push_back(yv);
            }
    CiOutcome out = g_square(d, 0, 1, {}, 0.05);
    CHECK(out.independent);
    CHECK(out.p_value == doctest::Approx(1.0));
}

TEST_CASE("g-square null calibration") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        if (!g_square(fair_coins(seed, 5000), 0, 1, {}, 0.05).independent)
            ++rejections;
    double rate = rejections / 200.0;
    CHECK(rate >= 0.02);
    CHECK(rate <= 0.09);
}

TEST_CASE("g-square on a strong binary collider") {
    Dag collider(3, {{0, 1}, {2, 1}}, {"A", "B", "C"});
    ScmSpec spec{collider, ScmKind::BinaryLogistic, {}, {}, 3};
    spec.coefficients[{0, 1}] = 4.8;
    spec.coefficients[{2, 1}] = -4.6;
    Dataset data = simulate(spec, 5000);
    CHECK(g_square(data, 0, 2, {}, 0.05).independent);
    CHECK_FALSE(g_square(data, 0, 2, {1}, 0.05).independent);
}

TEST_CASE("counted source deduplicates and canonicalizes") {
    Dag chain(3, {{0, 1}, {1, 2}});
    auto inner = oracle_ci(chain);
    auto src = counted(inner);
    CHECK(src->independent(0, 2, {1}));
    CHECK(src->independent(0, 2, {1}));
    CHECK(src->query_count() == 1);
    CHECK(src->independent(2, 0, {1}));  // symmetric form, same query
    CHECK(src->query_count() == 1);
    CHECK_FALSE(src->independent(0, 2, {}));
    CHECK(src->query_count() == 2);
    CHECK(inner->query_count() == 2);

    // Answers pass through unchanged.
    auto plain = oracle_ci(chain);
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
            if (x == y) continue;
            CHECK(src->independent(std::min(x, y), std::max(x, y), {}) ==
                  plain->independent(std::min(x, y), std::max(x, y), {}));
        }
}

TEST_CASE("audit wrapper logs every query") {
    Dag chain(3, {{0, 1}, {1, 2}});
    std::ostringstream log;
    auto src = std::make_shared<AuditCi>(oracle_ci(chain), log);
    src->independent(0, 2, {1});
    src->independent(0, 1, {});
    CHECK(log.str() == "0;2;1;independent;1\n0;1;;dependent;0\n");
}

TEST_CASE("distribution tails") {
    CHECK(chi_square_upper_tail(1, 3.841459) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(chi_square_upper_tail(2, 5.991465) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(chi_square_upper_tail(8, 0.0) == doctest::Approx(1.0));
    CHECK(normal_two_sided_p(1.959964) == doctest::Approx(0.05).epsilon(1e-4));
}
