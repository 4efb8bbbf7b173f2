#include "lipfit/lbbd.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lipfit/parallel.hpp"

namespace lipfit {

const char* to_string(CurveSource s) {
    switch (s) {
        case CurveSource::general_lp: return "general_lp";
        case CurveSource::fast_1d: return "fast_1d";
        case CurveSource::analytic: return "analytic";
    }
    return "unknown";
}

Engine engine_from_string(const std::string& s) {
    if (s == "general") return Engine::general;
    if (s == "fast") return Engine::fast;
    throw input_error("unknown engine '" + s + "' (expected general or fast)");
}

double LBBDCurve::at(double m) const {
    if (m_grid.empty()) throw input_error("empty curve");
    if (m <= m_grid.front()) return gamma.front();
    if (m >= m_grid.back()) return gamma.back();
    auto it = std::upper_bound(m_grid.begin(), m_grid.end(), m);
    std::size_t j = static_cast<std::size_t>(it - m_grid.begin());
    double t = (m - m_grid[j - 1]) / (m_grid[j] - m_grid[j - 1]);
    return gamma[j - 1] + t * (gamma[j] - gamma[j - 1]);
}

namespace {

double pair_distance(const SampleSet& s, std::size_t i, std::size_t j, bool periodic) {
    double d = distance(s.xs()[i], s.xs()[j]);
    if (periodic) {
        if (s.dim() != 1) throw input_error("periodic LB-BD is 1-d only");
        d = std::min(d, s.interval().length() - d);
    }
    return d;
}

double solve_objective(const LinearProgram& lp) {
    LPSolution sol = solve_lp(lp);
    if (sol.status != LPStatus::optimal)
        throw internal_error(std::string("LB-BD linear program returned ") + to_string(sol.status));
    return std::max(0.0, sol.objective);
}

void require_nonneg(double v, const char* what) {
    require_finite(v, what);
    if (v < 0.0) throw parameter_error(std::string(what) + " must be nonnegative");
}

const Interval1D& require_fast_input(const SampleSet& s) {
    if (s.dim() != 1) throw input_error("the fast engine is 1-d only");
    return s.interval();
}

// Row helpers for the fast formulation. Variables: c0, d_1..d_{n-1}, t.
std::vector<double> slope_row(std::size_t n, std::size_t k, double sgn) {
    std::vector<double> row(n + 1, 0.0);
    for (std::size_t j = 1; j <= k; ++j) row[j] = sgn;
    return row;
}

// h(x_n) - h(x_1) as a row over (c0, d).
std::vector<double> wrap_row(const FastModel1D& X, double sgn) {
    const std::size_t n = X.n;
    std::vector<double> row(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) row[j] = sgn * (X.at(n - 1, j) - X.at(0, j));
    return row;
}

double wrap_denominator(const SampleSet& s) {
    const Interval1D& dom = s.interval();
    return dom.length() - (s.x(s.size() - 1) - s.x(0));
}

}  // namespace

FastModel1D fast_model(const SampleSet& s) {
    require_fast_input(s);
    FastModel1D M;
    M.n = s.size();
    M.X.assign(M.n * M.n, 0.0);
    for (std::size_t i = 0; i < M.n; ++i) {
        M.X[i * M.n] = 1.0;
        for (std::size_t j = 1; j <= i; ++j) M.X[i * M.n + j] = s.x(i) - s.x(j - 1);
    }
    return M;
}

LinearProgram gamma_general_lp(const SampleSet& s, double m, bool periodic) {
    require_nonneg(m, "m");
    const std::size_t n = s.size();
    std::vector<AffineExpr> terms(n), extra;
    for (std::size_t i = 0; i < n; ++i) {
        terms[i].coef.assign(n, 0.0);
        terms[i].coef[i] = 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            AffineExpr e;
            e.coef.assign(n, 0.0);
            e.coef[i] = 1.0;
            e.coef[j] = -1.0;
            e.constant = -(m * pair_distance(s, i, j, periodic) + s.y(j) - s.y(i));
            extra.push_back(std::move(e));
        }
    return minmax_affine_to_lp(terms, extra);
}

LinearProgram gamma_inverse_general_lp(const SampleSet& s, double sigma, bool periodic) {
    require_nonneg(sigma, "sigma");
    const std::size_t n = s.size();
    LinearProgram lp(n + 1);
    lp.c[n] = 1.0;
    std::vector<double> row(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = pair_distance(s, i, j, periodic);
            const double dy = s.y(j) - s.y(i);
            for (double sgn : {1.0, -1.0}) {
                std::fill(row.begin(), row.end(), 0.0);
                row[i] = sgn;
                row[j] = -sgn;
                row[n] = -d;
                lp.add_row(row, -sgn * dy);
            }
        }
    for (std::size_t i = 0; i < n; ++i)
        for (double sgn : {1.0, -1.0}) {
            std::fill(row.begin(), row.end(), 0.0);
            row[i] = sgn;
            lp.add_row(row, sigma);
        }
    std::fill(row.begin(), row.end(), 0.0);
    row[n] = -1.0;
    lp.add_row(row, 0.0);
    return lp;
}

LinearProgram gamma_fast_lp(const SampleSet& s, double m, bool periodic) {
    require_nonneg(m, "m");
    const FastModel1D X = fast_model(s);
    const std::size_t n = X.n;
    LinearProgram lp(n + 1);
    lp.c[n] = 1.0;
    std::vector<double> row(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (double sgn : {1.0, -1.0}) {
            // sgn * (y_i - X_i theta) <= t
            for (std::size_t j = 0; j < n; ++j) row[j] = -sgn * X.at(i, j);
            row[n] = -1.0;
            lp.add_row(row, -sgn * s.y(i));
        }
    for (std::size_t k = 1; k < n; ++k)
        for (double sgn : {1.0, -1.0}) lp.add_row(slope_row(n, k, sgn), m);
    if (periodic && n >= 2) {
        const double D = wrap_denominator(s);
        for (double sgn : {1.0, -1.0}) lp.add_row(wrap_row(X, sgn), m * D);
    }
    return lp;
}

LinearProgram gamma_inverse_fast_lp(const SampleSet& s, double sigma, bool periodic) {
    require_nonneg(sigma, "sigma");
    const FastModel1D X = fast_model(s);
    const std::size_t n = X.n;
    LinearProgram lp(n + 1);
    lp.c[n] = 1.0;
    std::vector<double> row(n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (double sgn : {1.0, -1.0}) {
            for (std::size_t j = 0; j < n; ++j) row[j] = -sgn * X.at(i, j);
            row[n] = 0.0;
            lp.add_row(row, sigma - sgn * s.y(i));
        }
    for (std::size_t k = 1; k < n; ++k)
        for (double sgn : {1.0, -1.0}) {
            row = slope_row(n, k, sgn);
            row[n] = -1.0;
            lp.add_row(row, 0.0);
        }
    if (periodic && n >= 2) {
        const double D = wrap_denominator(s);
        for (double sgn : {1.0, -1.0}) {
            row = wrap_row(X, sgn);
            row[n] = -D;
            lp.add_row(row, 0.0);
        }
    }
    std::fill(row.begin(), row.end(), 0.0);
    row[n] = -1.0;
    lp.add_row(row, 0.0);
    return lp;
}

double gamma_general(const SampleSet& s, double m, bool periodic) {
    return solve_objective(gamma_general_lp(s, m, periodic));
}

double gamma_inverse_general(const SampleSet& s, double sigma, bool periodic) {
    return solve_objective(gamma_inverse_general_lp(s, sigma, periodic));
}

double gamma_fast_1d(const SampleSet& s, double m, bool periodic) {
    return solve_objective(gamma_fast_lp(s, m, periodic));
}

double gamma_inverse_fast_1d(const SampleSet& s, double sigma, bool periodic) {
    return solve_objective(gamma_inverse_fast_lp(s, sigma, periodic));
}

std::vector<double> default_m_grid(const SampleSet& s) {
    const double lip = lip_of_samples(s).value;
    if (!(lip > 0.0)) return {0.0, 1.0};
    std::vector<double> g{0.0};
    // Noise inflates lip on dense data, so the start also tracks the slope
    // scale diam / span of the whole series.
    double span = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) span = std::max(span, distance(s.xs()[i], s.xs()[j]));
    const double lo = std::min(lip / 100.0, diam_of(s.ys()) / (10.0 * span)), hi = 1.05 * lip;
    const std::size_t K = 51;
    for (std::size_t k = 0; k < K; ++k) {
        double t = static_cast<double>(k) / static_cast<double>(K - 1);
        g.push_back(lo * std::pow(hi / lo, t));
    }
    g.back() = hi;
    return g;
}

LBBDCurve lbbd_curve(const SampleSet& s, const std::vector<double>& m_grid, bool periodic,
                     Engine engine) {
    if (m_grid.size() < 2) throw input_error("m_grid needs at least 2 points");
    for (std::size_t i = 0; i < m_grid.size(); ++i) {
        require_nonneg(m_grid[i], "m_grid value");
        if (i > 0 && !(m_grid[i - 1] < m_grid[i])) throw input_error("m_grid must be increasing");
    }
    if (engine == Engine::fast) require_fast_input(s);
    LBBDCurve c;
    c.m_grid = m_grid;
    c.gamma.assign(m_grid.size(), 0.0);
    c.periodic = periodic;
    c.source = engine == Engine::fast ? CurveSource::fast_1d : CurveSource::general_lp;
    parallel_for(m_grid.size(), [&](std::size_t i) {
        c.gamma[i] = engine == Engine::fast ? gamma_fast_1d(s, m_grid[i], periodic)
                                            : gamma_general(s, m_grid[i], periodic);
    });
    CurveReport rep = check_curve_properties(c, s);
    if (!rep.ok())
        throw internal_error("LB-BD curve failed its invariants: " + rep.violations.front());
    return c;
}

double analytic_gamma_inv(const AnalyticShape& shape, const Interval1D& interval, double sigma) {
    require_nonneg(sigma, "sigma");
    const double L = interval.length();
    switch (shape.kind) {
        case ShapeKind::linear: return std::max(0.0, shape.m - 2.0 * sigma / L);
        case ShapeKind::vee: return std::max(0.0, shape.m - 4.0 * sigma / L);
        case ShapeKind::sine: break;
    }
    if (interval.a != 0.0 || interval.b != 1.0)
        throw parameter_error("the sine shape is defined on [0,1]");
    if (sigma > 1.0) throw parameter_error("sine root is only bracketed for sigma in [0,1]");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    auto F = [&](double x) {
        return std::sin(two_pi * x) - two_pi * (x - 0.5) * std::cos(two_pi * x) - sigma;
    };
    double lo = 0.25, hi = 0.5;
    if (F(lo) < 0.0 || F(hi) > 0.0) throw parameter_error("sine root not bracketed");
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (F(mid) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::abs(two_pi * std::cos(two_pi * 0.5 * (lo + hi)));
}

double analytic_gamma(const AnalyticShape& shape, const Interval1D& interval, double m) {
    require_nonneg(m, "m");
    const double L = interval.length();
    switch (shape.kind) {
        case ShapeKind::linear: return std::max(0.0, (shape.m - m) * L / 2.0);
        case ShapeKind::vee: return std::max(0.0, (shape.m - m) * L / 4.0);
        case ShapeKind::sine: break;
    }
    if (m >= 2.0 * std::numbers::pi) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (analytic_gamma_inv(shape, interval, mid) <= m)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

GridBound grid_gamma_bound(const SampleSet& fine, const std::vector<std::size_t>& coarse_idx,
                           double m) {
    require_fast_input(fine);
    if (coarse_idx.empty()) throw input_error("coarse subset must be nonempty");
    std::vector<double> cx, cy;
    for (std::size_t k = 0; k < coarse_idx.size(); ++k) {
        std::size_t i = coarse_idx[k];
        if (i >= fine.size() || (k > 0 && coarse_idx[k - 1] >= i))
            throw input_error("coarse indices must be increasing and within range");
        cx.push_back(fine.x(i));
        cy.push_back(fine.y(i));
    }
    SampleSet coarse = SampleSet::make_1d(cx, cy, fine.interval());
    GridBound g{};
    g.gamma_fine = gamma_fast_1d(fine, m, false);
    g.gamma_coarse = gamma_fast_1d(coarse, m, false);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        double x = fine.x(i), li;
        if (x <= cx.front()) {
            li = cy.front();
        } else if (x >= cx.back()) {
            li = cy.back();
        } else {
            std::size_t k = static_cast<std::size_t>(std::upper_bound(cx.begin(), cx.end(), x) - cx.begin());
            double t = (x - cx[k - 1]) / (cx[k] - cx[k - 1]);
            li = cy[k - 1] + t * (cy[k] - cy[k - 1]);
        }
        g.li_gap = std::max(g.li_gap, std::abs(fine.y(i) - li));
    }
    const double diff = g.gamma_fine - g.gamma_coarse;
    g.holds = diff >= -1e-9 && diff <= g.li_gap + 1e-9;
    return g;
}

std::vector<std::size_t> select_subgrid(const SampleSet& fine, double sigma_budget) {
    require_fast_input(fine);
    require_finite(sigma_budget, "sigma budget");
    if (!(sigma_budget > 0.0)) throw parameter_error("sigma budget must be positive");
    const std::size_t n = fine.size();
    if (n == 1) return {0};
    std::vector<std::size_t> keep{0, n - 1};
    while (true) {
        double worst = 0.0;
        std::size_t worst_i = n;
        for (std::size_t k = 0; k + 1 < keep.size(); ++k) {
            const std::size_t i0 = keep[k], i1 = keep[k + 1];
            const double x0 = fine.x(i0), x1 = fine.x(i1), y0 = fine.y(i0), y1 = fine.y(i1);
            for (std::size_t i = i0 + 1; i < i1; ++i) {
                double li = y0 + (fine.x(i) - x0) / (x1 - x0) * (y1 - y0);
                double dev = std::abs(fine.y(i) - li);
                if (dev > worst) {
                    worst = dev;
                    worst_i = i;
                }
            }
        }
        if (worst <= sigma_budget || worst_i == n) break;
        keep.insert(std::upper_bound(keep.begin(), keep.end(), worst_i), worst_i);
    }
    return keep;
}

CurveReport check_curve_properties(const LBBDCurve& c, const SampleSet& context) {
    CurveReport r;
    const double tol = kCurveTol;
    const auto& m = c.m_grid;
    const auto& g = c.gamma;
    auto note = [&](bool& flag, const std::string& msg) {
        flag = false;
        r.violations.push_back(msg);
    };
    if (m.size() != g.size() || m.empty()) {
        note(r.monotone, "m_grid and gamma lengths differ");
        return r;
    }
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] < -tol) note(r.endpoints, "negative gamma at m=" + std::to_string(m[i]));
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] > g[i - 1] + tol) note(r.monotone, "gamma increases at m=" + std::to_string(m[i]));
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        double w = (m[i] - m[i - 1]) / (m[i + 1] - m[i - 1]);
        double chord = g[i - 1] + w * (g[i + 1] - g[i - 1]);
        if (g[i] > chord + tol) note(r.convex, "convexity fails at m=" + std::to_string(m[i]));
    }
    if (m.front() == 0.0) {
        double half = diam_of(context.ys()) / 2.0;
        if (std::abs(g.front() - half) > tol) note(r.endpoints, "gamma(0) differs from diam/2");
    }
    if (!c.periodic) {
        double lip = lip_of_samples(context).value;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (m[i] >= lip && g[i] > tol)
                note(r.endpoints, "gamma nonzero at m=" + std::to_string(m[i]) + " >= Lip");
    }
    return r;
}

void write_curve_csv(const LBBDCurve& c, std::size_t n, std::ostream& os) {
    const auto prec = os.precision(17);
    os << "# periodic=" << (c.periodic ? 1 : 0) << '\n';
    os << "# engine=" << to_string(c.source) << '\n';
    os << "# n=" << n << '\n';
    os << "m,gamma\n";
    for (std::size_t i = 0; i < c.m_grid.size(); ++i) os << c.m_grid[i] << ',' << c.gamma[i] << '\n';
    os.precision(prec);
}

LBBDCurve read_curve_csv(std::istream& is) {
    LBBDCurve c;
    std::string line;
    bool header = false;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("periodic=1") != std::string::npos) c.periodic = true;
            if (line.find("engine=general_lp") != std::string::npos) c.source = CurveSource::general_lp;
            if (line.find("engine=analytic") != std::string::npos) c.source = CurveSource::analytic;
            continue;
        }
        if (!header) {
            if (line != "m,gamma") throw input_error("curve CSV header must be 'm,gamma'");
            header = true;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw input_error("curve CSV line " + std::to_string(lineno) + " is malformed");
        try {
            std::size_t p1 = 0, p2 = 0;
            double m = std::stod(line.substr(0, comma), &p1);
            double gm = std::stod(line.substr(comma + 1), &p2);
            if (p1 != comma || p2 != line.size() - comma - 1) throw std::invalid_argument("trailing");
            require_finite(m, "m");
            require_finite(gm, "gamma");
            if (!c.m_grid.empty() && !(c.m_grid.back() < m))
                throw input_error("curve CSV m values must increase (line " + std::to_string(lineno) + ")");
            c.m_grid.push_back(m);
            c.gamma.push_back(gm);
        } catch (const input_error&) {
            throw;
        } catch (const std::exception&) {
            throw input_error("curve CSV line " + std::to_string(lineno) + " is not numeric");
        }
    }
    if (!header) throw input_error("curve CSV is missing its header");
    if (c.m_grid.empty()) throw input_error("curve CSV has no records");
    return c;
}

}  // namespace lipfit
