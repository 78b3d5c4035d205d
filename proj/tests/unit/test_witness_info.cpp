#include "admit/witness_info.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace admit;

namespace {

DiscreteWitnessSet range_set(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> ids(hi - lo);
    std::iota(ids.begin(), ids.end(), lo);
    return DiscreteWitnessSet(ids);
}

}  // namespace

// ---------------------------------------------------------------------------
// Sets

TEST(DiscreteWitnessSet, SortsAndDeduplicates) {
    const DiscreteWitnessSet a({5, 1, 5, 3});
    EXPECT_EQ(a.ids(), (std::vector<std::uint64_t>{1, 3, 5}));
    EXPECT_TRUE(a.contains(3));
    EXPECT_FALSE(a.contains(4));
    const auto t = DiscreteWitnessSet::from_tokens({"ltv:0.80", "fico:700", "ltv:0.80"});
    EXPECT_EQ(t.size(), 2u);
    EXPECT_TRUE(t.contains(token_id("fico:700")));
}

TEST(DiscreteWitnessSet, TokenIdIsFnv1a) {
    EXPECT_EQ(token_id(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(token_id("a"), 0xaf63dc4c8601ec8cull);
    EXPECT_EQ(token_id("foobar"), 0x85944171f73967e8ull);
}

// ---------------------------------------------------------------------------
// Jaccard and mutual information

TEST(Jaccard, Examples) {
    const auto a = range_set(0, 4);
    EXPECT_EQ(jaccard(a, a), 1.0);
    EXPECT_EQ(jaccard(a, range_set(10, 14)), 0.0);
    EXPECT_DOUBLE_EQ(jaccard(a, range_set(2, 6)), 2.0 / 6.0);
    EXPECT_EQ(intersection_size(a, range_set(2, 6)), 2u);
    EXPECT_EQ(union_size(a, range_set(2, 6)), 6u);
    EXPECT_EQ(jaccard(a, DiscreteWitnessSet{}), 0.0);
    EXPECT_THROW(jaccard(DiscreteWitnessSet{}, DiscreteWitnessSet{}), BothEmpty);
}

TEST(MutualInformation, Examples) {
    const auto a = range_set(0, 4);
    EXPECT_NEAR(mutual_information(a, a), std::log(4.0), 1e-15);
    EXPECT_NEAR(mutual_information(a, range_set(4, 8)), std::log(2.0), 1e-15);
    EXPECT_NEAR(mutual_information(a, range_set(2, 6)), std::log(16.0 / 6.0), 1e-15);
    EXPECT_NEAR(mutual_information(a, a), oracle::entropy_mutual_information(4, 4, 4), 1e-12);
    EXPECT_NEAR(mutual_information(a, range_set(4, 8)), oracle::entropy_mutual_information(4, 4, 0), 1e-12);
    EXPECT_NEAR(mutual_information(a, range_set(2, 6)), oracle::entropy_mutual_information(4, 4, 2), 1e-12);
    EXPECT_THROW(mutual_information(a, DiscreteWitnessSet{}), EmptySet);
    EXPECT_THROW(mutual_information(DiscreteWitnessSet{}, a), EmptySet);
}

TEST(MutualInformation, MatchesEntropyOracleExhaustively) {
    for (std::uint64_t n = 1; n <= 64; ++n) {
        const auto a = range_set(0, n);
        for (std::uint64_t m = 1; m <= 64; ++m) {
            for (std::uint64_t k = 0; k <= std::min(n, m); ++k) {
                // B overlaps A in exactly k elements.
                const auto b = range_set(n - k, n - k + m);
                ASSERT_EQ(intersection_size(a, b), k);
                const double mi = mutual_information(a, b);
                ASSERT_NEAR(mi, oracle::entropy_mutual_information(n, m, k), 1e-12) << n << " " << m << " " << k;
                ASSERT_EQ(mi, mutual_information(b, a));
                // The union-entropy convention goes negative only for tiny disjoint sets.
                if (n * m >= n + m - k) ASSERT_GE(mi, 0.0);
            }
        }
    }
}

TEST(MutualInformation, StrictlyIncreasingInOverlap) {
    for (std::uint64_t n : {3u, 10u, 40u}) {
        const auto a = range_set(0, n);
        double prev = -1.0;
        for (std::uint64_t k = 0; k <= n; ++k) {
            const double mi = mutual_information(a, range_set(n - k, 2 * n - k));
            EXPECT_GT(mi, prev);
            prev = mi;
        }
    }
}

TEST(MutualInformation, OrdersPairsLikeJaccardAtFixedSizes) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 2000; ++t) {
        const std::uint64_t n = 1 + rng() % 50, m = 1 + rng() % 50;
        const std::uint64_t k1 = rng() % (std::min(n, m) + 1), k2 = rng() % (std::min(n, m) + 1);
        const auto a = range_set(0, n);
        const auto b1 = range_set(n - k1, n - k1 + m), b2 = range_set(n - k2, n - k2 + m);
        const double dj = jaccard(a, b1) - jaccard(a, b2);
        const double dm = mutual_information(a, b1) - mutual_information(a, b2);
        EXPECT_EQ((dj > 0) - (dj < 0), (dm > 0) - (dm < 0));
    }
}

// ---------------------------------------------------------------------------
// Sketches

TEST(Sketch, DeterministicAndSized) {
    const auto a = range_set(0, 500);
    const auto s1 = sketch(a, 200, 9);
    EXPECT_EQ(s1, sketch(a, 200, 9));
    EXPECT_EQ(s1.m, 200u);
    EXPECT_EQ(s1.words.size(), 4u);
    EXPECT_NE(s1, sketch(a, 200, 10));
    EXPECT_THROW(sketch(a, 7, 0), PreconditionError);
    EXPECT_THROW(sketch_agreement(s1, sketch(a, 256, 9)), PreconditionError);
    EXPECT_THROW(sketch_agreement(s1, sketch(a, 200, 8)), PreconditionError);
}

TEST(Sketch, IdenticalSetsEstimateOne) {
    for (std::size_t m : {8u, 64u, 1000u}) {
        const auto a = range_set(100, 400);
        EXPECT_GE(estimate_overlap(sketch(a, m, 1), sketch(a, m, 1)), 1.0 - 2.0 / std::sqrt(static_cast<double>(m)));
    }
}

TEST(Sketch, DisjointSetsEstimateZero) {
    const auto a = range_set(0, 5000), b = range_set(10000, 15000);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_NEAR(estimate_overlap(sketch(a, 1024, seed), sketch(b, 1024, seed)), 0.0, 0.1);
    }
}

TEST(Sketch, PlantedHalfOverlap) {
    // |A| = |B| = 3000 sharing 2000 elements: J = 2000 / 4000.
    const auto a = range_set(0, 3000), b = range_set(1000, 4000);
    ASSERT_DOUBLE_EQ(jaccard(a, b), 0.5);
    int within = 0;
    double mean = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const double est = estimate_overlap(sketch(a, 4096, seed), sketch(b, 4096, seed));
        within += std::abs(est - 0.5) <= 0.05;
        mean += est / 100.0;
    }
    EXPECT_GE(within, 95);
    EXPECT_NEAR(mean, 0.5, 0.01);
}

TEST(Sketch, EmptySetSketchesWithoutError) {
    const auto s = sketch(DiscreteWitnessSet{}, 16, 0);
    EXPECT_EQ(s.m, 16u);
}

// ---------------------------------------------------------------------------
// Capacity

TEST(Capacity, AccuracyGrowsAlongDoublingGrid) {
    const std::size_t trials = 200;
    const auto r = capacity_experiment(64, 0.3, trials, 5);
    ASSERT_TRUE(r.m_star.has_value());
    EXPECT_EQ(r.trials, trials);
    std::vector<CapacityRow> doubling;
    for (const auto& row : r.rows)
        if ((row.m & (row.m - 1)) == 0) doubling.push_back(row);
    ASSERT_GE(doubling.size(), 3u);
    for (std::size_t i = 1; i < doubling.size(); ++i) {
        const double p = doubling[i - 1].accuracy;
        const double se = std::sqrt(std::max(p * (1 - p), 0.01) / trials);
        EXPECT_GE(doubling[i].accuracy, p - 3.0 * se) << "m=" << doubling[i].m;
    }
    EXPECT_LT(r.rows.front().accuracy, 0.95);
    EXPECT_GE(r.rows.back().accuracy, 0.95);
}

TEST(Capacity, MStarIsFirstOfTwoPassingPoints) {
    const auto r = capacity_experiment(32, 0.3, 100, 6);
    ASSERT_TRUE(r.m_star.has_value());
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        if (!r.rows[i].m_star) continue;
        ++flagged;
        EXPECT_EQ(r.rows[i].m, *r.m_star);
        ASSERT_LT(i + 1, r.rows.size());
        EXPECT_GE(r.rows[i].accuracy, 0.95);
        EXPECT_GE(r.rows[i + 1].accuracy, 0.95);
        for (std::size_t j = 0; j + 1 < i; ++j) EXPECT_FALSE(r.rows[j].accuracy >= 0.95 && r.rows[j + 1].accuracy >= 0.95);
    }
    EXPECT_EQ(flagged, 1u);
}

TEST(Capacity, DeterministicAcrossThreads) {
    CapacityOptions one, four;
    four.threads = 4;
    const auto a = capacity_experiment(16, 0.4, 60, 7, one);
    const auto b = capacity_experiment(16, 0.4, 60, 7, four);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) EXPECT_EQ(a.rows[i].accuracy, b.rows[i].accuracy);
    EXPECT_EQ(capacity_csv({a}), capacity_csv({b}));
}

TEST(Capacity, CsvLayout) {
    const auto r = capacity_experiment(16, 0.4, 40, 8);
    std::istringstream in(capacity_csv({r}));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "N,delta_gap,m,accuracy,m_star_flag");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
        EXPECT_EQ(line.rfind("16,0.4,", 0), 0u);
        ++rows;
    }
    EXPECT_EQ(rows, r.rows.size());
}

TEST(Capacity, RejectsBadArguments) {
    EXPECT_THROW(capacity_experiment(15, 0.3, 10, 0), PreconditionError);
    EXPECT_THROW(capacity_experiment(64, 0.0, 10, 0), PreconditionError);
    EXPECT_THROW(capacity_experiment(64, 0.5, 10, 0), PreconditionError);
}
