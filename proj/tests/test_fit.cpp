#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lipfit/fit.hpp"
#include "oracles.hpp"

using namespace lipfit;

namespace {

const Interval1D kUnit(0.0, 1.0);

SampleSet s1(std::vector<double> xs, std::vector<double> ys, Interval1D d = kUnit) {
    return SampleSet::make_1d(xs, std::move(ys), d);
}

// Random 1-d data that is m-Lipschitz: y walks with slopes in [-m, m].
SampleSet consistent_samples(std::mt19937_64& rng, std::size_t n, double m) {
    auto ser = oracle::random_series(rng, n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ser.ys[0] = u(rng);
    for (std::size_t i = 1; i < n; ++i) ser.ys[i] = ser.ys[i - 1] + m * u(rng) * (ser.xs[i] - ser.xs[i - 1]);
    return s1(ser.xs, ser.ys);
}

}  // namespace

TEST(Avg, ConstantMean) {
    EXPECT_DOUBLE_EQ(eval_fit(avg_fit(s1({0.1, 0.5, 0.9}, {1, 2, 3})), 0.7), 2.0);
    EXPECT_DOUBLE_EQ(eval_fit(avg_fit(s1({0.3}, {4.5})), 0.9), 4.5);
    std::mt19937_64 rng(3);
    auto ser = oracle::random_series(rng, 100);
    double mean = 0.0;
    for (double y : ser.ys) mean += y;
    mean /= 100.0;
    FitCurve c = avg_fit(s1(ser.xs, ser.ys));
    EXPECT_NEAR(eval_fit(c, 0.123456), mean, 1e-12);
}

TEST(NearestNeighbour, SpecExamples) {
    FitCurve c = nn_fit(s1({0.0, 1.0}, {0, 10}));
    EXPECT_DOUBLE_EQ(eval_fit(c, 0.4), 0.0);
    EXPECT_DOUBLE_EQ(eval_fit(c, 0.6), 10.0);
    EXPECT_DOUBLE_EQ(eval_fit(nn_fit(s1({0.2, 0.8}, {3, 4})), 0.05), 3.0);
}

TEST(PeriodicNearestNeighbour, SpecExamples) {
    FitCurve c = pnn_fit(s1({0.1, 0.9}, {1, 9}));
    EXPECT_DOUBLE_EQ(eval_fit(c, 0.98), 9.0);
    EXPECT_DOUBLE_EQ(eval_fit(pnn_fit(s1({0.1, 0.6}, {1, 9})), 0.9), 1.0);  // wrapped copy at 1.1 is nearest
    EXPECT_DOUBLE_EQ(eval_fit(c, 0.5), 1.0);  // tie goes left
    EXPECT_DOUBLE_EQ(eval_fit(pnn_fit(s1({0.4}, {2})), 0.95), 2.0);
}

TEST(LinearInterpolation, SpecExamples) {
    EXPECT_DOUBLE_EQ(eval_fit(li_fit(s1({0.0, 1.0}, {0, 2})), 0.25), 0.5);
    EXPECT_DOUBLE_EQ(eval_fit(li_fit(s1({0.5}, {7})), 0.1), 7.0);
    EXPECT_DOUBLE_EQ(eval_fit(li_fit(s1({0.2, 0.8}, {0, 6})), 0.1), 0.0);
}

TEST(PeriodicLinearInterpolation, SpecExamples) {
    FitCurve c = pli_fit(s1({0.25, 0.75}, {0, 1}));
    EXPECT_NEAR(eval_fit(c, 0.0), 0.5, 1e-12);
    EXPECT_NEAR(eval_fit(c, 0.5), 0.5, 1e-12);
    EXPECT_NEAR(eval_fit(c, 1.0), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(eval_fit(pli_fit(s1({0.3}, {2})), 0.9), 2.0);
}

TEST(LipfitSegment, SpecExamples) {
    LipfitSegment flat = lipfit_segment({0, 0}, {1, 0}, 1.0);
    EXPECT_FALSE(flat.case2);
    EXPECT_DOUBLE_EQ(flat.delta, 0.5);
    EXPECT_DOUBLE_EQ(eval_pl(flat.piece.fn, 0.3), 0.0);

    LipfitSegment c1 = lipfit_segment({0, 0}, {1, 1}, 2.0);
    EXPECT_FALSE(c1.case2);
    EXPECT_DOUBLE_EQ(c1.delta, 0.25);
    EXPECT_DOUBLE_EQ(eval_pl(c1.piece.fn, 0.25), 0.0);
    EXPECT_DOUBLE_EQ(eval_pl(c1.piece.fn, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(eval_pl(c1.piece.fn, 0.75), 1.0);

    LipfitSegment c2 = lipfit_segment({0, 0}, {1, 1}, 0.5);
    EXPECT_TRUE(c2.case2);
    EXPECT_DOUBLE_EQ(c2.delta, 0.25);
    EXPECT_DOUBLE_EQ(eval_pl(c2.piece.fn, 0.0), 0.25);
    EXPECT_DOUBLE_EQ(eval_pl(c2.piece.fn, 0.5), 0.5);
    EXPECT_DOUBLE_EQ(eval_pl(c2.piece.fn, 1.0), 0.75);

    EXPECT_THROW(lipfit_segment({0, 0}, {1, 1}, 0.0), parameter_error);
}

TEST(LipfitSegment, MatchesEnvelopeMidpointOnRandomPairs) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.05, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        Site A{u(rng), u(rng)};
        Site B{A.x + pos(rng), u(rng)};
        double m = pos(rng);
        LipfitSegment seg = lipfit_segment(A, B, m);
        for (int k = 1; k < 20; ++k) {
            double x = A.x + (B.x - A.x) * k / 20.0;
            auto e = oracle::envelope_brute({A.x, B.x}, {A.y, B.y}, m, x);
            EXPECT_NEAR(eval_pl(seg.piece.fn, x), 0.5 * (e.lower + e.upper), 1e-12);
        }
    }
}

TEST(LipfitEnvelope, SpecExamples) {
    EnvelopePair e = lipfit_envelope(s1({0.0}, {5.0}, Interval1D(-3, 3)), 1.0, Point(2.0));
    EXPECT_DOUBLE_EQ(e.lower, 3.0);
    EXPECT_DOUBLE_EQ(e.upper, 7.0);
    EXPECT_DOUBLE_EQ(e.midpoint(), 5.0);
    EnvelopePair f = lipfit_envelope(s1({0.0, 1.0}, {0, 0}), 1.0, Point(0.5));
    EXPECT_DOUBLE_EQ(f.lower, -0.5);
    EXPECT_DOUBLE_EQ(f.upper, 0.5);
}

TEST(LipfitEnvelope, MultiDimensionalMatchesBruteForce) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Point> pts;
        std::vector<double> ys;
        for (int i = 0; i < 10; ++i) {
            pts.emplace_back(std::vector<double>{u(rng), u(rng)});
            ys.push_back(u(rng));
        }
        SampleSet s(pts, ys, {0, 0}, {1, 1});
        Point x(std::vector<double>{u(rng), u(rng)});
        double lo = -INFINITY, hi = INFINITY;
        for (int i = 0; i < 10; ++i) {
            double d = std::hypot(x[0] - pts[i][0], x[1] - pts[i][1]);
            hi = std::min(hi, ys[i] + 3.0 * d);
            lo = std::max(lo, ys[i] - 3.0 * d);
        }
        EnvelopePair e = lipfit_envelope(s, 3.0, x);
        EXPECT_NEAR(e.lower, lo, 1e-12);
        EXPECT_NEAR(e.upper, hi, 1e-12);
    }
}

TEST(LipfitFit, FlatAndPeriodicExamples) {
    FitCurve c = lipfit_fit(s1({0.0, 1.0}, {0, 0}), 1.0, false);
    for (double x : {0.0, 0.2, 0.5, 0.99, 1.0}) EXPECT_DOUBLE_EQ(eval_fit(c, x), 0.0);
    FitCurve p = lipfit_fit(s1({0.25, 0.75}, {0, 0}), 1.0, true);
    EXPECT_NEAR(eval_fit(p, 0.0), 0.0, 1e-12);
    EXPECT_THROW(lipfit_fit(s1({0.0, 1.0}, {0, 0}), 0.0, false), parameter_error);
}

TEST(LipfitFit, SegmentClosedFormEqualsEnvelopeMidpoint) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        SampleSet s = consistent_samples(rng, 12, 4.0);
        std::vector<double> xs(1000);
        for (double& x : xs) x = u(rng);
        EXPECT_LE(lipfit_segment_envelope_gap(s, 4.0, xs), 1e-12);
        FitCurve c = lipfit_fit(s, 4.0, false);
        auto sx = s.xs_1d();
        for (double x : xs) {
            auto e = oracle::envelope_brute(sx, s.ys(), 4.0, x);
            EXPECT_NEAR(eval_fit(c, x), 0.5 * (e.lower + e.upper), 1e-12);
        }
    }
}

TEST(LipfitFit, PeriodicMatchesCircleEnvelope) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        SampleSet s = consistent_samples(rng, 6, 3.0);
        // make the data consistent on the circle too
        if (oracle::gamma_pairwise(s, 3.0, 1.0) > 0.0) continue;
        FitCurve c = lipfit_fit(s, 3.0, true);
        for (int k = 0; k < 200; ++k) {
            double x = u(rng);
            auto e = oracle::envelope_brute(s.xs_1d(), s.ys(), 3.0, x, 1.0);
            EXPECT_NEAR(eval_fit(c, x), 0.5 * (e.lower + e.upper), 1e-12);
        }
    }
}

TEST(Fits, DataRangeFaithfulAndInterpolating) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        SampleSet s = oracle::random_samples(rng, 7);
        double lo = *std::min_element(s.ys().begin(), s.ys().end());
        double hi = *std::max_element(s.ys().begin(), s.ys().end());
        for (MethodId id : {MethodId::AVG, MethodId::NN, MethodId::PNN, MethodId::LI, MethodId::PLI,
                            MethodId::LIPFIT, MethodId::PLIPFIT}) {
            FitCurve c = fit_method(s, id, 0.7, false);
            for (int k = 0; k < 100; ++k) {
                double v = eval_fit(c, u(rng));
                EXPECT_GE(v, lo - 1e-12);
                EXPECT_LE(v, hi + 1e-12);
            }
            if (id == MethodId::AVG) continue;
            for (std::size_t i = 0; i < s.size(); ++i) EXPECT_DOUBLE_EQ(eval_fit(c, s.x(i)), s.y(i));
        }
    }
}

TEST(Fits, PeriodicCurvesCloseUp) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        SampleSet s = oracle::random_samples(rng, 5);
        for (MethodId id : {MethodId::PLI, MethodId::PLIPFIT}) {
            FitCurve c = fit_method(s, id, 2.0, true);
            EXPECT_NEAR(eval_fit(c, 0.0), eval_fit(c, 1.0), 1e-12);
        }
    }
}

TEST(ExternalFit, InterpolatesAndExtendsConstant) {
    FitCurve c = external_fit({0.2, 0.6}, {1.0, 3.0}, kUnit);
    EXPECT_DOUBLE_EQ(eval_fit(c, 0.4), 2.0);
    EXPECT_DOUBLE_EQ(eval_fit(c, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(eval_fit(c, 1.0), 3.0);
    EXPECT_EQ(c.method(), MethodId::EXTERNAL);
    EXPECT_THROW(fit_method(s1({0.5}, {1}), MethodId::EXTERNAL, 1.0, false), input_error);
}
