#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lipfit/core.hpp"
#include "lipfit/lpsolve.hpp"

namespace lipfit {

enum class CurveSource { general_lp, fast_1d, analytic };
enum class Engine { general, fast };

const char* to_string(CurveSource s);
Engine engine_from_string(const std::string& s);

struct LBBDCurve {
    std::vector<double> m_grid;
    std::vector<double> gamma;
    bool periodic = false;
    CurveSource source = CurveSource::fast_1d;

    // Linear interpolation on the grid; constant beyond the last point.
    double at(double m) const;
};

// Hinge-basis model h(x) = c0 + sum_i d_i (x - x_i)_+ evaluated at the knots,
// y = X (c0; d) + r. X has a leading column of ones and X(i,j) = x_i - x_{j-1}
// below the diagonal. The slope of h on [x_k, x_{k+1}] is d_1 + ... + d_k.
struct FastModel1D {
    std::size_t n = 0;
    std::vector<double> X;  // n x n, row-major
    double at(std::size_t i, std::size_t j) const { return X[i * n + j]; }
};

FastModel1D fast_model(const SampleSet& s);

// LP builders, exposed for dumping and for structural tests.
LinearProgram gamma_general_lp(const SampleSet& s, double m, bool periodic = false);
LinearProgram gamma_inverse_general_lp(const SampleSet& s, double sigma, bool periodic = false);
LinearProgram gamma_fast_lp(const SampleSet& s, double m, bool periodic);
LinearProgram gamma_inverse_fast_lp(const SampleSet& s, double sigma, bool periodic);

// periodic=true in the general engine uses the circle distance on the sample
// interval (1-d only).
double gamma_general(const SampleSet& s, double m, bool periodic = false);
double gamma_inverse_general(const SampleSet& s, double sigma, bool periodic = false);
double gamma_fast_1d(const SampleSet& s, double m, bool periodic);
double gamma_inverse_fast_1d(const SampleSet& s, double sigma, bool periodic);

// m = 0 plus 51 geometric points up to 1.05 lip, starting at the smaller of
// lip/100 and diam/(10 span).
std::vector<double> default_m_grid(const SampleSet& s);

LBBDCurve lbbd_curve(const SampleSet& s, const std::vector<double>& m_grid, bool periodic,
                     Engine engine);

enum class ShapeKind { linear, vee, sine };

struct AnalyticShape {
    ShapeKind kind = ShapeKind::sine;
    double m = 0.0;  // slope for linear and vee; unused for sine on [0,1]
};

double analytic_gamma_inv(const AnalyticShape& shape, const Interval1D& interval, double sigma);
// Smallest sigma with analytic_gamma_inv(sigma) <= m, by bisection.
double analytic_gamma(const AnalyticShape& shape, const Interval1D& interval, double m);

struct GridBound {
    double gamma_fine;
    double gamma_coarse;
    double li_gap;
    bool holds;
};

GridBound grid_gamma_bound(const SampleSet& fine, const std::vector<std::size_t>& coarse_idx,
                           double m);

// Greedy refinement: start from the end points and add the point of largest
// LI deviation until every deviation is within the budget.
std::vector<std::size_t> select_subgrid(const SampleSet& fine, double sigma_budget);

struct CurveReport {
    bool monotone = true;
    bool convex = true;
    bool endpoints = true;
    std::vector<std::string> violations;
    bool ok() const { return monotone && convex && endpoints; }
};

constexpr double kCurveTol = 1e-8;

CurveReport check_curve_properties(const LBBDCurve& c, const SampleSet& context);

// "m,gamma" records with '#' metadata lines.
void write_curve_csv(const LBBDCurve& c, std::size_t n, std::ostream& os);
LBBDCurve read_curve_csv(std::istream& is);

}  // namespace lipfit
