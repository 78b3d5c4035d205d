#include "admit/admissibility.hpp"
#include "admit/nnls.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace admit;

namespace {

UnitVector e(std::size_t d, std::size_t i) { return UnitVector::basis(d, i); }

WitnessSet random_set(int d, int n, std::mt19937_64& rng) {
    std::vector<UnitVector> w;
    for (int i = 0; i < n; ++i) w.push_back(normalize(oracle::random_unit(d, rng)));
    return WitnessSet(w);
}

// n witnesses within `half_angle` of `axis`.
WitnessSet cap_set(const Eigen::VectorXd& axis, double half_angle, int n, std::mt19937_64& rng) {
    std::vector<UnitVector> w;
    const int d = static_cast<int>(axis.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd t = oracle::random_unit(d, rng);
        t -= t.dot(axis) * axis;
        t.normalize();
        const double a = half_angle * unif(rng);
        w.push_back(normalize(Eigen::VectorXd(std::cos(a) * axis + std::sin(a) * t)));
    }
    return WitnessSet(w);
}

}  // namespace

// ---------------------------------------------------------------------------
// NNLS

TEST(Nnls, MatchesSupportEnumerationOnRandomProblems) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal;
    for (int t = 0; t < 400; ++t) {
        const int m = 2 + t % 6;
        const int n = 1 + t % 7;
        Eigen::MatrixXd a(m, n);
        Eigen::VectorXd b(m);
        for (int i = 0; i < m; ++i) {
            b[i] = normal(rng);
            for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
        }
        const auto got = solve_nnls(a, b);
        const auto want = oracle::nnls_enumerate(a, b);
        ASSERT_TRUE(got.converged);
        EXPECT_TRUE((got.x.array() >= 0.0).all());
        EXPECT_NEAR(got.residual, want.residual, 1e-9) << "trial " << t;
    }
}

TEST(Nnls, TwoColumnGridAgrees) {
    // The NNLS residual against (e1, e2) for e1 − 0.5·e2, checked on a dense α grid.
    Eigen::MatrixXd a(2, 2);
    a << 1, 0, 0, 1;
    Eigen::VectorXd b(2);
    b << 1, -0.5;
    b.normalize();
    double grid_best = 1e9;
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) grid_best = std::min(grid_best, (a * Eigen::Vector2d(i / 200.0, j / 200.0) - b).norm());
    const auto got = solve_nnls(a, b);
    EXPECT_NEAR(got.residual, grid_best, 5e-3);
    EXPECT_GT(got.residual, 0.4);
}

// ---------------------------------------------------------------------------
// WitnessSet

TEST(WitnessSet, DropsBitwiseDuplicatesAndMergesLabels) {
    const WitnessSet w({e(3, 0), e(3, 1), e(3, 0)}, {"a", "b", "c"});
    ASSERT_EQ(w.size(), 2u);
    EXPECT_EQ(w.sources(0), (std::vector<std::string>{"a", "c"}));
    EXPECT_EQ(w.sources(1), (std::vector<std::string>{"b"}));
}

TEST(WitnessSet, RejectsEmptyAndMixedDimensions) {
    EXPECT_THROW(WitnessSet(std::vector<UnitVector>{}), PreconditionError);
    EXPECT_THROW(WitnessSet({e(3, 0), e(2, 0)}), DimensionMismatch);
}

// ---------------------------------------------------------------------------
// Feasibility

TEST(Feasibility, SingleWitness) {
    const auto c = check_feasibility(WitnessSet({e(3, 0)}));
    ASSERT_TRUE(c.coherent());
    EXPECT_LT(geodesic_distance(*c.center, e(3, 0)), 1e-12);
    EXPECT_NEAR(c.min_margin, 1.0, 1e-12);
}

TEST(Feasibility, AntipodalPair) {
    const auto c = check_feasibility(WitnessSet({e(3, 0), -e(3, 0)}));
    EXPECT_EQ(c.status, Coherence::Contradictory);
    EXPECT_FALSE(c.center.has_value());
    ASSERT_TRUE(c.witness_pair.has_value());
    EXPECT_EQ(*c.witness_pair, std::make_pair(std::size_t{0}, std::size_t{1}));
}

TEST(Feasibility, StandardSimplexMatchesExactQp) {
    const WitnessSet w({e(3, 0), e(3, 1), e(3, 2)});
    const auto c = check_feasibility(w);
    ASSERT_TRUE(c.coherent());
    const auto exact = oracle::min_norm_point(w.matrix());
    EXPECT_NEAR(exact.norm, 1.0 / std::sqrt(3.0), 1e-15);
    const Eigen::VectorXd want = exact.point.normalized();
    for (int i = 0; i < 3; ++i) EXPECT_NEAR((*c.center)[static_cast<std::size_t>(i)], want[i], 1e-12);
    EXPECT_NEAR(c.min_margin, 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Feasibility, RejectsToleranceOutsideRange) {
    const WitnessSet w({e(2, 0)});
    EXPECT_THROW(check_feasibility(w, 0.0), ToleranceOutOfRange);
    EXPECT_THROW(check_feasibility(w, 2e-3), ToleranceOutOfRange);
    EXPECT_NO_THROW(check_feasibility(w, 1e-3));
}

TEST(Feasibility, HullDistanceMatchesExactQpOnRandomSets) {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 300; ++t) {
        const int d = 2 + t % 5;
        const int n = 1 + t % 8;
        const WitnessSet w = random_set(d, n, rng);
        const auto c = check_feasibility(w);
        const auto exact = oracle::min_norm_point(w.matrix());
        if (exact.norm > 1e-5) {
            ASSERT_TRUE(c.coherent()) << "trial " << t;
            EXPECT_NEAR(c.hull_distance, exact.norm, 1e-9) << "trial " << t;
            EXPECT_NEAR(c.min_margin, exact.norm, 1e-9) << "trial " << t;
        } else if (exact.norm < 1e-7) {
            EXPECT_FALSE(c.coherent()) << "trial " << t;
        }
    }
}

TEST(Feasibility, CoherentCertificateIsSound) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 500; ++t) {
        const WitnessSet w = random_set(2 + t % 7, 1 + t % 9, rng);
        const auto c = check_feasibility(w);
        if (!c.coherent()) continue;
        EXPECT_GT(c.min_margin, 0.0);
        for (const auto& wi : w.witnesses()) EXPECT_GE(c.center->dot(wi), c.min_margin - 1e-15);
    }
}

TEST(Feasibility, AnyAntipodalPairIsContradictory) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 300; ++t) {
        const int d = 2 + t % 8;
        auto v = random_set(d, 1 + t % 5, rng).witnesses();
        const auto u = normalize(oracle::random_unit(d, rng));
        v.push_back(u);
        v.push_back(-u);
        for (double tol : {1e-9, 1e-6, 1e-3}) EXPECT_FALSE(check_feasibility(WitnessSet(v), tol).coherent());
    }
}

TEST(Feasibility, ContradictoryWitnessPairIsNegative) {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 300; ++t) {
        const WitnessSet w = random_set(2 + t % 3, 3 + t % 5, rng);
        const auto c = check_feasibility(w);
        if (c.coherent()) continue;
        ASSERT_TRUE(c.witness_pair.has_value());
        EXPECT_LT(w[c.witness_pair->first].dot(w[c.witness_pair->second]), 0.0);
        EXPECT_LE(c.hull_distance, c.tolerance + 1e-12);
    }
}

TEST(Feasibility, InvariantUnderRotation) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 100; ++t) {
        const WitnessSet w = random_set(4, 5, rng);
        const Rotation g = random_rotation(4, static_cast<std::uint64_t>(t));
        const auto a = check_feasibility(w);
        const auto b = check_feasibility(w.rotated(g));
        const auto exact = oracle::min_norm_point(w.matrix());
        if (std::abs(exact.norm - 1e-6) < 1e-7) continue;
        ASSERT_EQ(a.status, b.status);
        if (a.coherent()) EXPECT_LT(geodesic_distance(g.apply(*a.center), *b.center), 1e-8);
    }
}

// ---------------------------------------------------------------------------
// Region and membership

TEST(Region, TwoBasisVectors) {
    const auto region = build_region(WitnessSet({e(2, 0), e(2, 1)}));
    EXPECT_LT(geodesic_distance(region.center(), normalize({1.0, 1.0})), 1e-12);
    EXPECT_TRUE(contains(region, normalize({1.0, 1.0})));
    EXPECT_FALSE(contains(region, normalize({1.0, -0.5})));
}

TEST(Region, MembershipExamplesInThreeDimensions) {
    const auto region = build_region(WitnessSet({e(3, 0), e(3, 1)}));
    EXPECT_TRUE(contains(region, normalize({1.0, 1.0, 0.0})));
    EXPECT_FALSE(contains(region, e(3, 2)));
    EXPECT_FALSE(contains(region, normalize({1.0, -0.5, 0.0})));
    EXPECT_THROW(contains(region, e(2, 0)), DimensionMismatch);
}

TEST(Region, ContradictionCarriesCertificate) {
    try {
        build_region(WitnessSet({e(3, 0), -e(3, 0)}));
        FAIL() << "expected ContradictionError";
    } catch (const ContradictionError& err) {
        EXPECT_EQ(err.certificate().status, Coherence::Contradictory);
        EXPECT_TRUE(err.certificate().witness_pair.has_value());
    }
}

TEST(Region, NarrowCapOfWitnesses) {
    std::mt19937_64 rng(11);
    const Eigen::VectorXd axis = Eigen::Vector3d(1, 0, 0);
    const WitnessSet w = cap_set(axis, std::numbers::pi / 6, 5, rng);
    const auto region = build_region(w);
    EXPECT_TRUE(region.certificate().coherent());
    for (const auto& wi : w.witnesses()) EXPECT_LE(geodesic_distance(wi, normalize({1.0, 0.0, 0.0})), std::numbers::pi / 6 + 1e-12);
    EXPECT_GT(region.certificate().min_margin, 0.0);
}

TEST(Region, GeneratorsAndCenterAreMembers) {
    std::mt19937_64 rng(43);
    for (int t = 0; t < 200; ++t) {
        const WitnessSet w = random_set(2 + t % 6, 1 + t % 7, rng);
        const auto c = check_feasibility(w);
        if (!c.coherent()) continue;
        const auto region = build_region(w);
        EXPECT_TRUE(contains(region, region.center()));
        for (const auto& wi : w.witnesses()) EXPECT_TRUE(contains(region, wi));
        for (const auto& wi : w.witnesses()) EXPECT_GT(region.center().dot(wi), 0.0);
    }
}

TEST(Region, MembershipAgreesWithSupportEnumeration) {
    std::mt19937_64 rng(47);
    int checked = 0;
    for (int t = 0; t < 300; ++t) {
        const WitnessSet w = random_set(3, 2 + t % 4, rng);
        if (!check_feasibility(w).coherent()) continue;
        const auto region = build_region(w);
        for (int k = 0; k < 20; ++k) {
            const Eigen::VectorXd mu = oracle::random_unit(3, rng);
            const auto ref = oracle::nnls_enumerate(w.matrix(), mu);
            if (std::abs(ref.residual - 1e-6) < 1e-8) continue;
            EXPECT_EQ(contains(region, normalize(mu)), ref.residual <= 1e-6);
            ++checked;
        }
    }
    EXPECT_GT(checked, 1000);
}

TEST(Region, MembershipIsRotationEquivariant) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 50; ++t) {
        const WitnessSet w = random_set(3, 4, rng);
        if (!check_feasibility(w).coherent()) continue;
        const Rotation g = random_rotation(3, static_cast<std::uint64_t>(t));
        const auto a = build_region(w);
        const auto b = build_region(w.rotated(g));
        for (int k = 0; k < 50; ++k) {
            const auto mu = normalize(oracle::random_unit(3, rng));
            const auto ma = membership(a, mu);
            if (std::abs(ma.residual - 1e-6) < 1e-8) continue;
            EXPECT_EQ(ma.inside, contains(b, g.apply(mu)));
        }
    }
}

TEST(Region, HullGrowsWithWitnesses) {
    std::mt19937_64 rng(59);
    for (int t = 0; t < 50; ++t) {
        const Eigen::VectorXd axis = oracle::random_unit(3, rng);
        const WitnessSet small = cap_set(axis, 1.0, 3, rng);
        auto more = small.witnesses();
        const WitnessSet extra = cap_set(axis, 1.0, 2, rng);
        for (const auto& x : extra.witnesses()) more.push_back(x);
        const WitnessSet big(more);
        const auto a = build_region(small);
        const auto b = build_region(big);
        for (const auto& p : sample_region(a, 50, static_cast<std::uint64_t>(t)).points) EXPECT_TRUE(contains(b, p));
    }
}

// ---------------------------------------------------------------------------
// Ambiguity

TEST(Ambiguity, ContradictoryIsExactlyOne) {
    const auto a = ambiguity(WitnessSet({e(3, 0), -e(3, 0)}), 1000, 1);
    EXPECT_EQ(a.fraction, 1.0);
    EXPECT_TRUE(a.contradictory);
    EXPECT_EQ(a.quote(), std::optional<double>(1.0));
}

TEST(Ambiguity, SingleWitnessHasMeasureZero) {
    const auto a = ambiguity(WitnessSet({e(3, 0)}), 5000, 2);
    EXPECT_EQ(a.fraction, 0.0);
    EXPECT_TRUE(a.degenerate);
    EXPECT_FALSE(a.quote().has_value());
}

TEST(Ambiguity, ArcFractionMatchesClosedForm) {
    const double eps = 0.1;
    const WitnessSet w({e(2, 0), e(2, 1), normalize({-1.0, eps})});
    const auto a = ambiguity(w, 100000, 3);
    const double exact = (std::numbers::pi - std::atan(eps)) / (2.0 * std::numbers::pi);
    EXPECT_NEAR(a.fraction, exact, 3.0 * a.std_error);
    EXPECT_NEAR(a.std_error, std::sqrt(exact * (1 - exact) / 100000), 1e-4);
    ASSERT_TRUE(a.quote().has_value());
}

TEST(Ambiguity, RequiresThousandSamples) { EXPECT_THROW(ambiguity(WitnessSet({e(2, 0)}), 999, 0), PreconditionError); }

TEST(Ambiguity, IndependentOfThreadCount) {
    const WitnessSet w({e(3, 0), e(3, 1), normalize({1.0, 1.0, 1.0})});
    MonteCarloOptions one, four;
    four.threads = 4;
    const auto a = ambiguity(w, 20000, 8, one);
    const auto b = ambiguity(w, 20000, 8, four);
    EXPECT_EQ(a.hits, b.hits);
}

// ---------------------------------------------------------------------------
// Region sampling

TEST(SampleRegion, HalfCircleAcceptance) {
    // Half circle minus an arc of 1e-4 rad, the widest coherent d=2 region.
    const WitnessSet w({e(2, 0), e(2, 1), normalize({-1.0, 1e-4})});
    const auto region = build_region(w);
    const auto s = sample_region(region, 10000, 5);
    ASSERT_EQ(s.points.size(), 10000u);
    EXPECT_TRUE(s.uniform);
    const double p = static_cast<double>(s.accepted) / static_cast<double>(s.proposals);
    EXPECT_NEAR(p, 0.5, 3.0 * std::sqrt(0.25 / static_cast<double>(s.proposals)));
}

TEST(SampleRegion, SinglePointIsMember) {
    std::mt19937_64 rng(61);
    for (int t = 0; t < 20; ++t) {
        const WitnessSet w = cap_set(oracle::random_unit(4, rng), 0.8, 6, rng);
        const auto region = build_region(w);
        const auto s = sample_region(region, 1, static_cast<std::uint64_t>(t));
        ASSERT_EQ(s.points.size(), 1u);
        EXPECT_TRUE(contains(region, s.points[0]));
    }
}

TEST(SampleRegion, OctantHeightIsUniform) {
    const auto region = build_region(WitnessSet({e(3, 0), e(3, 1), e(3, 2)}));
    const auto s = sample_region(region, 3000, 13);
    ASSERT_TRUE(s.uniform);
    std::vector<double> z;
    for (const auto& p : s.points) z.push_back(p[2]);
    EXPECT_LT(oracle::ks_statistic(z, [](double x) { return x; }), oracle::ks_critical(z.size(), 0.01));
}

TEST(SampleRegion, RotatedRegionMatchesRotatedSamples) {
    const WitnessSet w({e(3, 0), e(3, 1), normalize({0.3, 0.3, 1.0})});
    const Rotation g = random_rotation(3, 77);
    const auto a = sample_region(build_region(w), 300, 1);
    const auto b = sample_region(build_region(w.rotated(g)), 300, 2);
    std::vector<Eigen::VectorXd> ga, pb;
    for (const auto& p : a.points) ga.push_back(g.apply(p).coords());
    for (const auto& p : b.points) pb.push_back(p.coords());
    EXPECT_GT(oracle::energy_permutation_pvalue(ga, pb, 199, 5), 0.01);
}

TEST(SampleRegion, FrameMatchedProposalsAreExactlyRotated) {
    const WitnessSet w({e(3, 0), e(3, 1), e(3, 2)});
    const Rotation g = random_rotation(3, 5);
    const auto a = sample_region(build_region(w), 100, 9);
    RegionSampleOptions framed;
    framed.frame = g;
    const auto b = sample_region(build_region(w.rotated(g)), 100, 9, framed);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_LT(geodesic_distance(g.apply(a.points[i]), b.points[i]), 1e-12);
}

TEST(SampleRegion, LowerDimensionalRegionFallsBack) {
    const auto region = build_region(WitnessSet({e(4, 0), e(4, 1)}));
    EXPECT_EQ(region.rank(), 2u);
    const auto s = sample_region(region, 200, 3);
    EXPECT_FALSE(s.uniform);
    ASSERT_EQ(s.points.size(), 200u);
    for (const auto& p : s.points) EXPECT_TRUE(contains(region, p));
}

TEST(SampleRegion, ThinRegionFallsBackAfterBudget) {
    const WitnessSet w({normalize({1.0, 0.0, 0.0}), normalize({1.0, 1e-4, 0.0}), normalize({1.0, 0.0, 1e-4})});
    const auto region = build_region(w);
    RegionSampleOptions o;
    o.proposal_budget = 20000;
    const auto s = sample_region(region, 10, 4, o);
    EXPECT_FALSE(s.uniform);
    EXPECT_EQ(s.points.size(), 10u);
}

TEST(SampleRegion, RaisesWhenBudgetIsTooSmallForAReasonableRegion) {
    const auto region = build_region(WitnessSet({e(2, 0), e(2, 1)}));
    RegionSampleOptions o;
    o.proposal_budget = 100;
    EXPECT_THROW(sample_region(region, 1000, 4, o), EmptySampleBudget);
}

TEST(SampleRegion, DeterministicAcrossThreadCounts) {
    const auto region = build_region(WitnessSet({e(3, 0), e(3, 1), normalize({1.0, 1.0, 1.0})}));
    RegionSampleOptions one, three;
    three.threads = 3;
    const auto a = sample_region(region, 500, 21, one);
    const auto b = sample_region(region, 500, 21, three);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i], b.points[i]);
}

// ---------------------------------------------------------------------------
// Cap regions

TEST(CapRegion, SingleHemisphere) {
    const auto caps = cap_region_from(WitnessSet({e(3, 0)}));
    EXPECT_EQ(caps.caps()[0].cos_threshold, 0.0);
    const auto v = cap_volume(caps, 100000, 1);
    EXPECT_NEAR(v.fraction, 0.5, 3.0 * v.std_error);
}

TEST(CapRegion, OrthogonalPairIsQuarter) {
    const auto v = cap_volume(cap_region_from(WitnessSet({e(3, 0), e(3, 1)})), 100000, 2);
    EXPECT_NEAR(v.fraction, 0.25, 3.0 * v.std_error);
}

TEST(CapRegion, NarrowCapMatchesClosedForm) {
    // On S², a cap of half-angle θ has area fraction (1 − cos θ)/2.
    const double theta = 0.7;
    const auto v = cap_volume(cap_region_from(WitnessSet({e(3, 2)}), theta), 200000, 3);
    EXPECT_NEAR(v.fraction, (1.0 - std::cos(theta)) / 2.0, 3.0 * v.std_error);
}

TEST(CapRegion, ShrinksWhenWitnessesAreAdded) {
    std::mt19937_64 rng(67);
    for (int t = 0; t < 20; ++t) {
        const WitnessSet small = random_set(3, 2, rng);
        auto more = small.witnesses();
        more.push_back(normalize(oracle::random_unit(3, rng)));
        const auto a = cap_volume(cap_region_from(small), 20000, 100 + t);
        const auto b = cap_volume(cap_region_from(WitnessSet(more)), 20000, 100 + t);
        EXPECT_LE(b.fraction, a.fraction);  // common samples make this exact
    }
}

TEST(CapRegion, RejectsBadAngles) {
    EXPECT_THROW(cap_region_from(WitnessSet({e(2, 0)}), 0.0), PreconditionError);
    EXPECT_THROW(cap_region_from(WitnessSet({e(2, 0)}), 2.0), PreconditionError);
}
