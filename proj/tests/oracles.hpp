#pragma once

// Independent reference computations and random generators for tests. Nothing
// here calls the library's solvers or RNG.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lipfit/core.hpp"

namespace oracle {

inline double dist1(double a, double b, double period) {
    double d = std::abs(a - b);
    return period > 0.0 ? std::min(d, period - d) : d;
}

// Smallest sigma admitting an m-Lipschitz g within sigma of every sample:
// the pairwise condition |y_i - y_j| <= m d_ij + 2 sigma is necessary, and
// sufficient by the McShane extension of the lower constraints.
inline double gamma_pairwise(const lipfit::SampleSet& s, double m, double period = 0.0) {
    double g = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double d = s.dim() == 1 ? dist1(s.x(i), s.x(j), period) : lipfit::distance(s.xs()[i], s.xs()[j]);
            g = std::max(g, (std::abs(s.y(i) - s.y(j)) - m * d) / 2.0);
        }
    return g;
}

inline double gamma_inv_pairwise(const lipfit::SampleSet& s, double sigma, double period = 0.0) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double d = s.dim() == 1 ? dist1(s.x(i), s.x(j), period) : lipfit::distance(s.xs()[i], s.xs()[j]);
            m = std::max(m, (std::abs(s.y(i) - s.y(j)) - 2.0 * sigma) / d);
        }
    return m;
}

inline double lip_brute(const lipfit::SampleSet& s) {
    double m = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            m = std::max(m, std::abs(s.y(i) - s.y(j)) / lipfit::distance(s.xs()[i], s.xs()[j]));
    return m;
}

struct Env {
    double lower, upper;
};

inline Env envelope_brute(const std::vector<double>& xs, const std::vector<double>& ys, double m,
                          double x, double period = 0.0) {
    Env e{-INFINITY, INFINITY};
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double d = dist1(x, xs[i], period);
        e.upper = std::min(e.upper, ys[i] + m * d);
        e.lower = std::max(e.lower, ys[i] - m * d);
    }
    return e;
}

// Random 1-d series: n distinct sorted xs in [a,b] and ys in [lo,hi].
struct Series {
    std::vector<double> xs, ys;
};

inline Series random_series(std::mt19937_64& rng, std::size_t n, double a = 0.0, double b = 1.0,
                            double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> ux(a, b), uy(lo, hi);
    Series s;
    while (s.xs.size() < n) {
        s.xs.clear();
        for (std::size_t i = 0; i < n; ++i) s.xs.push_back(ux(rng));
        std::sort(s.xs.begin(), s.xs.end());
        s.xs.erase(std::unique(s.xs.begin(), s.xs.end()), s.xs.end());
    }
    for (std::size_t i = 0; i < n; ++i) s.ys.push_back(uy(rng));
    return s;
}

inline lipfit::SampleSet random_samples(std::mt19937_64& rng, std::size_t n, double a = 0.0,
                                        double b = 1.0) {
    auto s = random_series(rng, n, a, b);
    return lipfit::SampleSet::make_1d(s.xs, s.ys, lipfit::Interval1D(a, b));
}

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& v) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (v[i] + v[i - 1]) * (x[i] - x[i - 1]);
    return s;
}

}  // namespace oracle
