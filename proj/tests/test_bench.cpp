#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "locpc/bench.hpp"
#include "test_util.hpp"

using namespace locpc;
using testutil::set_of;

TEST_CASE("parent-set score") {
    CHECK(f1_parents(set_of({1, 2}), set_of({1, 2})) == doctest::Approx(1.0));
    CHECK(f1_parents(set_of({3, 4}), set_of({1, 2})) == doctest::Approx(0.0));
    CHECK(f1_parents(set_of({1, 3}), set_of({1, 2})) == doctest::Approx(0.5));
    CHECK(f1_parents({}, set_of({1})) == doctest::Approx(0.0));
    CHECK_THROWS(f1_parents(set_of({1}), {}));
}

TEST_CASE("oracle smoke sweep is always correct") {
    BenchConfig cfg;
    cfg.sizes = {8, 10};
    cfg.reps = 4;
    cfg.oracle = true;
    cfg.identifiable = true;
    cfg.threads = 2;
    auto records = run_benchmark(cfg);
    CHECK(records.size() == 2 * 4 * 2);
    for (const auto& rec : records) {
        CHECK(rec.verdict_correct);
        CHECK_FALSE(rec.failed);
        if (rec.f1) CHECK(*rec.f1 == doctest::Approx(1.0));
    }

    BenchConfig non = cfg;
    non.identifiable = false;
    for (const auto& rec : run_benchmark(non)) {
        CHECK(rec.verdict_correct);
        CHECK_FALSE(rec.f1.has_value());
    }
}

TEST_CASE("sweeps are deterministic and ordered") {
    BenchConfig cfg;
    cfg.sizes = {8};
    cfg.reps = 3;
    cfg.oracle = true;
    cfg.identifiable = true;
    cfg.threads = 3;
    auto a = run_benchmark(cfg);
    auto b = run_benchmark(cfg);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].algorithm == b[i].algorithm);
        CHECK(a[i].replicate == b[i].replicate);
        CHECK(a[i].ci_count == b[i].ci_count);
        CHECK(a[i].verdict_correct == b[i].verdict_correct);
        CHECK(a[i].f1.has_value() == b[i].f1.has_value());
    }
    // (size, replicate, algorithm) order with both algorithms per replicate.
    CHECK(a[0].replicate == 0);
    CHECK(a[0].algorithm == "locpc_cde");
    CHECK(a[1].algorithm == "pc");
    CHECK(a[2].replicate == 1);
}

TEST_CASE("summary statistics") {
    std::vector<BenchRecord> records;
    BenchRecord r;
    r.algorithm = "pc";
    r.n_vars = 10;
    r.ci_count = 10;
    r.verdict_correct = true;
    records.push_back(r);

    auto single = summarize(records);
    REQUIRE(single.size() == 1);
    CHECK(single[0].mean_ci_count == doctest::Approx(10.0));
    CHECK(single[0].ci_count_band == doctest::Approx(0.0));
    CHECK(single[0].tpr == doctest::Approx(1.0));
    CHECK_FALSE(single[0].mean_f1.has_value());

    r.ci_count = 20;
    r.replicate = 1;
    r.verdict_correct = false;
    records.push_back(r);
    auto both = summarize(records);
    REQUIRE(both.size() == 1);
    CHECK(both[0].mean_ci_count == doctest::Approx(15.0));
    CHECK(both[0].ci_count_band == doctest::Approx(1.96 * 7.0710678).epsilon(1e-6));
    CHECK(both[0].tpr == doctest::Approx(0.5));

    // Hand recount of the correct-verdict rate on a five-record fixture.
    std::vector<BenchRecord> five;
    for (int i = 0; i < 5; ++i) {
        BenchRecord x;
        x.algorithm = "pc";
        x.n_vars = 5;
        x.replicate = i;
        x.verdict_correct = i < 3;
        five.push_back(x);
    }
    CHECK(summarize(five)[0].tpr == doctest::Approx(0.6));

    CHECK_THROWS(summarize({}));
}

TEST_CASE("record csv round trip") {
    BenchRecord a;
    a.algorithm = "locpc_cde";
    a.n_vars = 10;
    a.replicate = 3;
    a.ci_count = 123;
    a.verdict_correct = true;
    a.f1 = 0.75;
    a.wall_ms = 1.5;
    BenchRecord b;
    b.algorithm = "pc";
    b.n_vars = 10;
    b.replicate = 3;
    b.ci_count = 456;
    b.verdict_correct = false;
    b.wall_ms = 2.25;

    std::string csv = records_to_csv({a, b});
    auto back = records_from_csv(csv);
    REQUIRE(back.size() == 2);
    CHECK(back[0].algorithm == "locpc_cde");
    CHECK(back[0].ci_count == 123);
    CHECK(back[0].f1.has_value());
    CHECK(*back[0].f1 == doctest::Approx(0.75));
    CHECK_FALSE(back[1].f1.has_value());
    CHECK(records_to_csv(back) == csv);

    // The absent f1 column stays absent in the summary.
    auto rows = summarize(back);
    CHECK(rows[0].mean_f1.has_value());
    CHECK_FALSE(rows[1].mean_f1.has_value());
    std::string summary_csv = summary_to_csv(rows);
    CHECK(summary_csv.find("pc,10,1") != std::string::npos);
}

TEST_CASE("config validation") {
    BenchConfig cfg;
    cfg.sizes = {};
    CHECK_THROWS(cfg.check());
    cfg.sizes = {10};
    cfg.reps = 0;
    CHECK_THROWS(cfg.check());
    cfg.reps = 1;
    cfg.alpha = 1.5;
    CHECK_THROWS(cfg.check());
    cfg.alpha = 0.05;
    cfg.algorithms = {"mystery"};
    CHECK_THROWS(cfg.check());
    cfg.algorithms = {"pc"};
    CHECK_NOTHROW(cfg.check());
}

TEST_CASE("statistical sweep at desk scale keeps the verdict rate up") {
    BenchConfig cfg;
    cfg.sizes = {10};
    cfg.reps = 6;
    cfg.identifiable = true;
    cfg.n_samples = 2000;
    cfg.threads = 3;
    auto rows = summarize(run_benchmark(cfg));
    for (const auto& row : rows) {
        CHECK(row.records == 6);
        CHECK(row.tpr >= 0.5);
    }
}
