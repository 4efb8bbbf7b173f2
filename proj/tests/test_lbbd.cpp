#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lipfit/lbbd.hpp"
#include "oracles.hpp"

using namespace lipfit;

namespace {

const Interval1D kUnit(0.0, 1.0);

SampleSet sine_grid(std::size_t n) {
    auto xs = uniform_grid(0.0, 1.0, n);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(std::sin(2 * M_PI * x));
    return SampleSet::make_1d(xs, ys, kUnit);
}

SampleSet with_ys(const SampleSet& s, std::vector<double> ys) {
    return SampleSet::make_1d(s.xs_1d(), std::move(ys), s.interval());
}

}  // namespace

TEST(Gamma, SpecExamples) {
    SampleSet flat = SampleSet::make_1d({0.1, 0.4, 0.9}, {2, 2, 2}, kUnit);
    for (double m : {0.0, 0.5, 3.0}) {
        EXPECT_NEAR(gamma_general(flat, m), 0.0, 1e-12);
        EXPECT_NEAR(gamma_fast_1d(flat, m, false), 0.0, 1e-12);
    }
    SampleSet line = SampleSet::make_1d({0.0, 1.0}, {0.0, 1.0}, kUnit);
    EXPECT_NEAR(gamma_general(line, 0.4), 0.3, 1e-12);
    EXPECT_NEAR(gamma_fast_1d(line, 0.4, false), 0.3, 1e-12);
    EXPECT_NEAR(gamma_fast_1d(sine_grid(101), 0.0, false), 1.0, 1e-6);
}

TEST(Gamma, EnginesAgreeWithPairwiseOracle) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> um(0.0, 8.0);
    for (int trial = 0; trial < 60; ++trial) {
        SampleSet s = oracle::random_samples(rng, 3 + trial % 25);
        const double m = um(rng);
        const double ref = oracle::gamma_pairwise(s, m);
        EXPECT_NEAR(gamma_general(s, m), ref, 1e-9);
        EXPECT_NEAR(gamma_fast_1d(s, m, false), ref, 1e-9);
        const double refp = oracle::gamma_pairwise(s, m, 1.0);
        EXPECT_NEAR(gamma_general(s, m, true), refp, 1e-9);
        EXPECT_NEAR(gamma_fast_1d(s, m, true), refp, 1e-9);
    }
}

TEST(Gamma, FastEngineOnLargerSeries) {
    std::mt19937_64 rng(67);
    for (std::size_t n : {120u, 250u}) {
        SampleSet s = oracle::random_samples(rng, n);
        for (double m : {0.0, 5.0, 50.0}) EXPECT_NEAR(gamma_fast_1d(s, m, false), oracle::gamma_pairwise(s, m), 1e-9);
    }
}

TEST(Gamma, PeriodicEndSamplesAtBothBoundaries) {
    SampleSet s = SampleSet::make_1d({0.0, 0.5, 1.0}, {0.0, 1.0, 0.4}, kUnit);
    for (double m : {0.0, 1.0, 3.0}) {
        EXPECT_NEAR(gamma_fast_1d(s, m, true), oracle::gamma_pairwise(s, m, 1.0), 1e-9);
        EXPECT_NEAR(gamma_general(s, m, true), oracle::gamma_pairwise(s, m, 1.0), 1e-9);
    }
}

TEST(Gamma, PeriodicNeverSmaller) {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        SampleSet s = oracle::random_samples(rng, 8);
        for (double m : {0.5, 2.0, 6.0}) EXPECT_GE(gamma_fast_1d(s, m, true), gamma_fast_1d(s, m, false) - 1e-12);
    }
}

TEST(Gamma, MultiDimensionalGeneralEngine) {
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> pts;
    std::vector<double> ys;
    for (int i = 0; i < 12; ++i) {
        pts.emplace_back(std::vector<double>{u(rng), u(rng)});
        ys.push_back(u(rng));
    }
    SampleSet s(pts, ys, {0, 0}, {1, 1});
    for (double m : {0.0, 0.7, 2.0}) EXPECT_NEAR(gamma_general(s, m), oracle::gamma_pairwise(s, m), 1e-9);
    EXPECT_THROW(gamma_fast_1d(s, 1.0, false), input_error);
}

TEST(GammaInverse, SpecExamples) {
    std::mt19937_64 rng(79);
    SampleSet s = oracle::random_samples(rng, 9);
    EXPECT_NEAR(gamma_inverse_general(s, 0.0), lip_of_samples(s).value, 1e-9);
    EXPECT_NEAR(gamma_inverse_fast_1d(s, 0.0, false), lip_of_samples(s).value, 1e-9);
    EXPECT_NEAR(gamma_inverse_general(s, diam_of(s.ys()) / 2), 0.0, 1e-9);
    auto xs = uniform_grid(0, 1, 101);
    SampleSet line = SampleSet::make_1d(xs, xs, kUnit);
    EXPECT_NEAR(gamma_inverse_general(line, 0.25), 0.5, 2e-2);
}

TEST(GammaInverse, AgreesAcrossEnginesAndWithOracle) {
    std::mt19937_64 rng(83);
    std::uniform_real_distribution<double> us(0.0, 0.8);
    for (int trial = 0; trial < 40; ++trial) {
        SampleSet s = oracle::random_samples(rng, 3 + trial % 15);
        const double sigma = us(rng);
        const double ref = oracle::gamma_inv_pairwise(s, sigma);
        EXPECT_NEAR(gamma_inverse_general(s, sigma), std::max(0.0, ref), 1e-7);
        EXPECT_NEAR(gamma_inverse_fast_1d(s, sigma, false), std::max(0.0, ref), 1e-7);
        const double m = gamma_inverse_fast_1d(s, sigma, false);
        EXPECT_LE(gamma_fast_1d(s, m, false), sigma + 1e-6);
    }
}

TEST(Lemma4, RestrictionScalingAndDomainScaling) {
    std::mt19937_64 rng(89);
    std::uniform_real_distribution<double> um(0.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
        SampleSet s = oracle::random_samples(rng, 6);
        const double m = um(rng);
        const double g = gamma_fast_1d(s, m, false);
        // restriction to the first four samples
        auto xs = s.xs_1d();
        std::vector<double> sub_x(xs.begin(), xs.begin() + 4), sub_y(s.ys().begin(), s.ys().begin() + 4);
        EXPECT_LE(gamma_fast_1d(SampleSet::make_1d(sub_x, sub_y, kUnit), m, false), g + 1e-9);
        for (double k : {-2.0, 0.5, 3.0}) {
            std::vector<double> ky;
            for (double y : s.ys()) ky.push_back(k * y);
            EXPECT_NEAR(gamma_fast_1d(with_ys(s, ky), m, false),
                        std::abs(k) * gamma_fast_1d(s, m / std::abs(k), false), 1e-6);
        }
        for (double k : {0.5, 4.0}) {
            std::vector<double> kx;
            for (double x : xs) kx.push_back(x / k);
            SampleSet sk = SampleSet::make_1d(kx, s.ys(), Interval1D(0.0, 1.0 / k));
            EXPECT_NEAR(gamma_fast_1d(sk, m, false), gamma_fast_1d(s, m / k, false), 1e-6);
        }
    }
}

TEST(Theorem2, SummationBound) {
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> um(0.0, 5.0);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = oracle::random_series(rng, 7);
        auto b = oracle::random_series(rng, 7);
        SampleSet f1 = SampleSet::make_1d(a.xs, a.ys, kUnit);
        SampleSet f2 = SampleSet::make_1d(a.xs, b.ys, kUnit);
        std::vector<double> sum;
        for (std::size_t i = 0; i < a.ys.size(); ++i) sum.push_back(a.ys[i] + b.ys[i]);
        SampleSet f = SampleSet::make_1d(a.xs, sum, kUnit);
        const double m1 = um(rng), m2 = um(rng);
        EXPECT_LE(gamma_fast_1d(f, m1 + m2, false),
                  gamma_fast_1d(f1, m1, false) + gamma_fast_1d(f2, m2, false) + 1e-9);
    }
}

// Shifts confined to [-sigma/2, sigma/2] keep the value spread of the
// perturbation within sigma.
TEST(Perturbation, GammaMovesByAtMostHalfTheSpread) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> um(0.0, 5.0), us(0.0, 0.5), unit(-0.5, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        SampleSet f = oracle::random_samples(rng, 8);
        const double sigma = us(rng), m = um(rng);
        std::vector<double> gy;
        for (double y : f.ys()) gy.push_back(y + sigma * unit(rng));
        SampleSet g = with_ys(f, gy);
        EXPECT_LE(std::abs(gamma_fast_1d(f, m, false) - gamma_fast_1d(g, m, false)), sigma / 2 + 1e-9);
    }
}

TEST(Theorem4, GridSandwich) {
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> um(0.0, 6.0), u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        SampleSet fine = oracle::random_samples(rng, 12);
        std::vector<std::size_t> idx{0};
        for (std::size_t i = 1; i + 1 < fine.size(); ++i)
            if (u(rng) < 0.4) idx.push_back(i);
        idx.push_back(fine.size() - 1);
        GridBound b = grid_gamma_bound(fine, idx, um(rng));
        EXPECT_TRUE(b.holds);
        EXPECT_GE(b.gamma_fine - b.gamma_coarse, -1e-9);
        EXPECT_LE(b.gamma_fine - b.gamma_coarse, b.li_gap + 1e-9);
    }
    SampleSet s = sine_grid(101);
    std::vector<std::size_t> all(101);
    for (std::size_t i = 0; i < 101; ++i) all[i] = i;
    GridBound same = grid_gamma_bound(s, all, 3.0);
    EXPECT_EQ(same.li_gap, 0.0);
    EXPECT_NEAR(same.gamma_fine, same.gamma_coarse, 1e-12);
    std::vector<std::size_t> every5;
    for (std::size_t i = 0; i <= 100; i += 5) every5.push_back(i);
    GridBound sb = grid_gamma_bound(s, every5, 3.0);
    EXPECT_TRUE(sb.holds);
    EXPECT_LE(sb.li_gap, std::pow(2 * M_PI, 2) * 0.05 * 0.05 / 8 + 1e-9);
}

TEST(SelectSubgrid, GreedyRefinement) {
    auto xs = uniform_grid(0, 1, 50);
    SampleSet line = SampleSet::make_1d(xs, xs, kUnit);
    EXPECT_EQ(select_subgrid(line, 1e-9), (std::vector<std::size_t>{0, 49}));
    SampleSet s = sine_grid(1001);
    auto idx = select_subgrid(s, 0.01);
    EXPECT_LT(idx.size(), 100u);
    GridBound b = grid_gamma_bound(s, idx, 0.0);
    EXPECT_LE(b.li_gap, 0.01 + 1e-12);
    auto two = select_subgrid(s, 1.0);
    EXPECT_EQ(two.size(), 2u);
}

TEST(Analytic, ClosedForms) {
    EXPECT_NEAR(analytic_gamma_inv({ShapeKind::linear, 1.0}, kUnit, 0.25), 0.5, 1e-15);
    EXPECT_NEAR(analytic_gamma_inv({ShapeKind::vee, 1.0}, kUnit, 0.25), 0.0, 1e-15);
    EXPECT_NEAR(analytic_gamma_inv({ShapeKind::sine, 0.0}, kUnit, 1e-9), 2 * M_PI, 1e-3);
    EXPECT_NEAR(analytic_gamma({ShapeKind::sine, 0.0}, kUnit, 0.0), 1.0, 1e-9);
    EXPECT_NEAR(analytic_gamma({ShapeKind::sine, 0.0}, kUnit, 2 * M_PI), 0.0, 1e-12);
    EXPECT_THROW(analytic_gamma_inv({ShapeKind::sine, 0.0}, kUnit, 1.5), parameter_error);
}

TEST(Analytic, InverseRoundTrip) {
    for (double m = 0.25; m < 6.2; m += 0.25) {
        double s = analytic_gamma({ShapeKind::sine, 0.0}, kUnit, m);
        EXPECT_NEAR(analytic_gamma_inv({ShapeKind::sine, 0.0}, kUnit, s), m, 1e-6);
    }
}

TEST(Analytic, LinearShapeMatchesGriddedLp) {
    auto xs = uniform_grid(0, 1, 41);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.0 * x);
    SampleSet s = SampleSet::make_1d(xs, ys, kUnit);
    for (double m : {0.0, 0.5, 1.0, 1.9}) EXPECT_NEAR(gamma_fast_1d(s, m, false), analytic_gamma({ShapeKind::linear, 2.0}, kUnit, m), 1e-9);
}

TEST(Curve, PropertiesOnRandomData) {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 10; ++trial) {
        SampleSet s = oracle::random_samples(rng, 10);
        auto grid = default_m_grid(s);
        EXPECT_EQ(grid.front(), 0.0);
        LBBDCurve c = lbbd_curve(s, grid, trial % 2 == 1, Engine::fast);
        CurveReport r = check_curve_properties(c, s);
        EXPECT_TRUE(r.ok());
        EXPECT_NEAR(c.gamma.front(), diam_of(s.ys()) / 2, 1e-9);
        if (trial % 2 == 0) EXPECT_LE(c.gamma.back(), 1e-9);
    }
}

TEST(Curve, ConstantDataGivesZeroCurve) {
    SampleSet s = SampleSet::make_1d({0.1, 0.2, 0.7}, {1, 1, 1}, kUnit);
    auto grid = default_m_grid(s);
    LBBDCurve c = lbbd_curve(s, grid, false, Engine::general);
    for (double g : c.gamma) EXPECT_NEAR(g, 0.0, 1e-12);
}

TEST(Curve, NegativeControlFlagged) {
    SampleSet s = SampleSet::make_1d({0.0, 1.0}, {0.0, 1.0}, kUnit);
    LBBDCurve bad;
    bad.m_grid = {0.0, 0.5, 1.0, 1.5};
    bad.gamma = {0.5, 0.45, 0.1, 0.0};  // chord test fails at m = 0.5
    CurveReport r = check_curve_properties(bad, s);
    EXPECT_FALSE(r.convex);
    EXPECT_FALSE(r.ok());
    LBBDCurve rising = bad;
    rising.gamma = {0.5, 0.25, 0.3, 0.0};
    EXPECT_FALSE(check_curve_properties(rising, s).monotone);
}

TEST(Curve, CsvRoundTrip) {
    LBBDCurve c;
    c.m_grid = {0.0, 0.1, 1.0 / 3.0};
    c.gamma = {0.5, 0.25, 0.0};
    c.periodic = true;
    std::stringstream ss;
    write_curve_csv(c, 7, ss);
    LBBDCurve back = read_curve_csv(ss);
    EXPECT_EQ(back.m_grid, c.m_grid);
    EXPECT_EQ(back.gamma, c.gamma);
    EXPECT_TRUE(back.periodic);
    std::stringstream bad("m,gamma\n1,0\n0.5,0\n");
    EXPECT_THROW(read_curve_csv(bad), input_error);
}

TEST(Curve, InterpolatesBetweenGridPoints) {
    LBBDCurve c;
    c.m_grid = {0.0, 2.0};
    c.gamma = {1.0, 0.0};
    EXPECT_DOUBLE_EQ(c.at(1.0), 0.5);
    EXPECT_DOUBLE_EQ(c.at(5.0), 0.0);
}

TEST(FastModel, HingeDesignMatrix) {
    SampleSet s = SampleSet::make_1d({0.0, 0.2, 0.5}, {0, 0, 0}, kUnit);
    FastModel1D X = fast_model(s);
    ASSERT_EQ(X.n, 3u);
    EXPECT_EQ(X.at(0, 0), 1.0);
    EXPECT_EQ(X.at(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(X.at(1, 1), 0.2);
    EXPECT_DOUBLE_EQ(X.at(2, 1), 0.5);
    EXPECT_DOUBLE_EQ(X.at(2, 2), 0.3);
    EXPECT_EQ(X.at(1, 2), 0.0);
}

TEST(LpBuilders, RowCounts) {
    SampleSet s = SampleSet::make_1d({0.0, 0.4, 1.0}, {0, 1, 0}, kUnit);
    LinearProgram g = gamma_general_lp(s, 1.0);
    EXPECT_EQ(g.num_vars, 4u);
    EXPECT_EQ(g.num_rows(), 12u);
    LinearProgram gi = gamma_inverse_general_lp(s, 0.1);
    EXPECT_EQ(gi.num_vars, 4u);
    EXPECT_EQ(gi.num_rows(), 6u + 6u + 1u);
}
