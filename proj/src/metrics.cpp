#include "lipfit/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace lipfit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double value_scale(const SampleSet& s) {
    double sc = 1.0;
    for (double y : s.ys()) sc = std::max(sc, std::abs(y));
    return sc;
}

// Envelope sites for a 1-d report: the samples, or their periodic copies.
std::vector<Site> report_sites(const SampleSet& s, bool periodic) {
    return periodic ? periodic_sites(s, true) : plain_sites(s);
}

Band band_from_sites(const std::vector<Site>& sites, const LBBDPair& pair, double x, double tol) {
    double lo_s = kInf, hi_s = -kInf;
    for (const auto& st : sites) {
        if (st.x == x) {
            lo_s = std::min(lo_s, st.y);
            hi_s = std::max(hi_s, st.y);
        }
    }
    EnvelopePair e = envelope_1d(sites, pair.m, x);
    bool feasible = (e.upper - e.lower) + 2.0 * pair.sigma >= -tol;
    if (lo_s <= hi_s) return Band{lo_s, hi_s, feasible};
    return Band{e.lower - pair.sigma, e.upper + pair.sigma, feasible};
}

}  // namespace

LossKind loss_from_string(const std::string& s) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
    if (u == "IL") return LossKind::IL;
    if (u == "SPWL") return LossKind::SPWL;
    if (u == "MPWL") return LossKind::MPWL;
    if (u == "SSPWL") return LossKind::SSPWL;
    if (u == "SMPWL") return LossKind::SMPWL;
    if (u == "SIL") return LossKind::SIL;
    if (u == "FSPWL") return LossKind::FSPWL;
    if (u == "FMPWL") return LossKind::FMPWL;
    if (u == "FIL") return LossKind::FIL;
    throw input_error("unknown loss kind '" + s + "'");
}

std::string to_string(LossKind k) {
    switch (k) {
        case LossKind::IL: return "IL";
        case LossKind::SPWL: return "SPWL";
        case LossKind::MPWL: return "MPWL";
        case LossKind::SSPWL: return "SSPWL";
        case LossKind::SMPWL: return "SMPWL";
        case LossKind::SIL: return "SIL";
        case LossKind::FSPWL: return "FSPWL";
        case LossKind::FMPWL: return "FMPWL";
        case LossKind::FIL: return "FIL";
    }
    return "unknown";
}

double trapezoid(const std::vector<double>& grid, const std::vector<double>& v) {
    if (grid.size() != v.size()) throw input_error("trapezoid: size mismatch");
    double s = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) s += 0.5 * (grid[i] - grid[i - 1]) * (v[i] + v[i - 1]);
    return s;
}

double loss(LossKind kind, const std::vector<double>& grid, const std::vector<double>& f,
            const std::vector<double>& g, std::optional<LBBDPair> ctx) {
    if (grid.size() < 2 || f.size() != grid.size() || g.size() != grid.size())
        throw input_error("loss: curves must share a grid of >= 2 points");
    const double vol = grid.back() - grid.front();
    std::vector<double> absdiff(grid.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        absdiff[i] = std::abs(f[i] - g[i]);
        sup = std::max(sup, absdiff[i]);
    }
    double base = 0.0;
    switch (kind) {
        case LossKind::IL:
        case LossKind::SIL:
        case LossKind::FIL: base = std::abs(trapezoid(grid, f) - trapezoid(grid, g)); break;
        case LossKind::SPWL:
        case LossKind::SSPWL:
        case LossKind::FSPWL: base = sup; break;
        case LossKind::MPWL:
        case LossKind::SMPWL:
        case LossKind::FMPWL: base = trapezoid(grid, absdiff) / vol; break;
    }
    switch (kind) {
        case LossKind::SIL:
        case LossKind::SSPWL:
        case LossKind::SMPWL: {
            double d = diam_of(f);
            if (!(d > 0.0)) throw domain_error("standardized loss needs diam(f) > 0");
            return base / d;
        }
        case LossKind::FIL:
        case LossKind::FSPWL:
        case LossKind::FMPWL: {
            if (!ctx) throw parameter_error("family-standardized loss needs an LB-BD pair");
            if (!(ctx->m > 0.0)) throw domain_error("family-standardized loss needs m > 0");
            return base / (vol * ctx->m);
        }
        default: return base;
    }
}

PefValue pef_envelope(const SampleSet& s, const LBBDPair& pair, const Point& x, bool periodic) {
    const double tol = 1e-12 * value_scale(s);
    EnvelopePair e;
    bool at_sample = false;
    if (periodic) {
        if (x.dim() != 1 || s.dim() != 1) throw input_error("periodic pef is 1-d only");
        auto sites = periodic_sites(s, true);
        e = envelope_1d(sites, pair.m, x[0]);
        for (const auto& st : sites) at_sample = at_sample || st.x == x[0];
    } else {
        e = lipfit_envelope(s, pair.m, x);
        for (const auto& p : s.xs()) at_sample = at_sample || p.coords == x.coords;
    }
    const double hw = 0.5 * (e.upper - e.lower) + pair.sigma;
    PefValue out;
    out.feasible = hw >= -tol;
    out.value = at_sample ? 0.0 : std::max(0.0, hw);
    return out;
}

double pef_of_estimate(const Band& band, double v) {
    return std::max({band.upper - v, v - band.lower, 0.0});
}

SegmentErrors segment_errors(Site A, Site B, const LBBDPair& pair, MethodId method) {
    if (!(A.x < B.x)) throw input_error("segment_errors requires x_A < x_B");
    if (!(pair.m > 0.0)) throw parameter_error("segment_errors requires m > 0");
    if (method == MethodId::PNN) method = MethodId::NN;
    if (method == MethodId::PLI) method = MethodId::LI;
    if (method == MethodId::PLIPFIT) method = MethodId::LIPFIT;
    if (method != MethodId::NN && method != MethodId::LI && method != MethodId::LIPFIT)
        throw parameter_error("segment_errors supports NN, LI and Lipfit");
    const double m = pair.m, sigma = pair.sigma;
    const double dx = B.x - A.x, dy = B.y - A.y;
    const double ms = std::abs(dy / dx);
    SegmentErrors e;
    e.spwe = m * dx / 2.0 + sigma;
    if (ms <= m) {
        const double delta = 0.5 * (dx - std::abs(dy / m));
        e.die = (m * m - ms * ms) / (4.0 * m) * dx * dx + sigma * dx;
        switch (method) {
            case MethodId::NN: e.dspwe = m * dx / 2.0 + sigma; break;
            case MethodId::LI: e.dspwe = delta * (m + ms) + sigma; break;
            default: e.dspwe = delta * m + sigma; break;
        }
    } else {
        const double dprime = 0.5 * dx * (ms - m);
        e.case2 = true;
        e.feasible = sigma >= dprime;
        e.die = (sigma - dprime) * dx;
        switch (method) {
            case MethodId::NN: e.dspwe = m * dx / 2.0 + sigma; break;
            case MethodId::LI: e.dspwe = sigma; break;
            default: e.dspwe = sigma - dprime; break;
        }
    }
    return e;
}

bool pair_feasible(const SampleSet& s, const LBBDPair& pair, bool periodic) {
    const double tol = 1e-12 * value_scale(s);
    const std::size_t n = s.size();
    const double L = periodic ? s.interval().length() : 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = distance(s.xs()[i], s.xs()[j]);
            if (periodic) d = std::min(d, L - d);
            if (std::abs(s.y(i) - s.y(j)) > pair.m * d + 2.0 * pair.sigma + tol) return false;
        }
    return true;
}

std::vector<double> report_grid(const SampleSet& s, std::size_t grid_n) {
    const Interval1D& dom = s.interval();
    std::vector<double> g = uniform_grid(dom.a, dom.b, grid_n);
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) g.push_back(s.x(i));
    // pef of the piecewise methods peaks at gap midpoints
    for (std::size_t i = 0; i + 1 < n; ++i) g.push_back(0.5 * (s.x(i) + s.x(i + 1)));
    const double wrap = 0.5 * (s.x(n - 1) + s.x(0) + dom.length());
    for (double w : {wrap, wrap - dom.length()})
        if (w >= dom.a && w <= dom.b) g.push_back(w);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

PefProfile pef_profile(const SampleSet& s, const LBBDPair& pair, const FitCurve& approx,
                       bool periodic, const std::vector<double>& grid) {
    if (s.dim() != 1) throw input_error("pef_profile is 1-d only");
    const double tol = 1e-12 * value_scale(s);
    const auto sites = report_sites(s, periodic);
    PefProfile p;
    p.grid = grid;
    p.pef.resize(grid.size());
    p.lower.resize(grid.size());
    p.upper.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Band b = band_from_sites(sites, pair, grid[i], tol);
        p.feasible = p.feasible && b.feasible;
        p.lower[i] = b.lower;
        p.upper[i] = b.upper;
        p.pef[i] = pef_of_estimate(b, eval_fit(approx, grid[i]));
    }
    return p;
}

ErrorReport error_report(const SampleSet& s, const LBBDPair& pair, MethodId method, bool periodic,
                         std::size_t grid_n) {
    bool per = periodic || is_periodic_method(method);
    if ((method == MethodId::LIPFIT || method == MethodId::PLIPFIT) && pair.m == 0.0) {
        ErrorReport r = error_report(s, pair, lipfit_envelope_curve(s, 0.0, per), per, grid_n);
        r.method = method;
        return r;
    }
    ErrorReport r = error_report(s, pair, fit_method(s, method, pair.m, per), per, grid_n);
    r.method = method;
    return r;
}

ErrorReport error_report(const SampleSet& s, const LBBDPair& pair, const FitCurve& approx,
                         bool periodic, std::size_t grid_n) {
    if (s.dim() != 1) throw input_error("error_report is 1-d only");
    if (grid_n < 1000) throw parameter_error("error_report needs grid_n >= 1000");
    const Interval1D& dom = s.interval();
    ErrorReport r;
    r.method = approx.method();
    r.pair = pair;
    r.periodic = periodic;
    r.grid_n = grid_n;
    if (!pair_feasible(s, pair, periodic)) {
        r.feasible = false;
        r.dspwe = r.die = r.spwe = r.ie = kInf;
        return r;
    }
    const auto grid = report_grid(s, grid_n);
    PefProfile prof = pef_profile(s, pair, approx, periodic, grid);
    r.feasible = prof.feasible;
    if (!r.feasible) {
        r.dspwe = r.die = r.spwe = r.ie = kInf;
        return r;
    }
    std::vector<double> above(grid.size()), below(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double v = eval_fit(approx, grid[i]);
        above[i] = prof.upper[i] - v;
        below[i] = v - prof.lower[i];
    }

    const std::size_t n = s.size();
    const double m = pair.m, sigma = pair.sigma;
    const double wrap_gap = (s.x(0) - dom.a) + (dom.b - s.x(n - 1));
    std::vector<double> cuts{dom.a};
    for (std::size_t i = 0; i < n; ++i)
        if (s.x(i) > dom.a && s.x(i) < dom.b) cuts.push_back(s.x(i));
    cuts.push_back(dom.b);

    std::size_t gi = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const double lo = cuts[j], hi = cuts[j + 1];
        while (grid[gi] < lo) ++gi;
        std::size_t gj = gi;
        std::vector<double> sg, sa, sb;
        double sup = 0.0;
        while (gj < grid.size() && grid[gj] <= hi) {
            sup = std::max(sup, prof.pef[gj]);
            sg.push_back(grid[gj]);
            sa.push_back(above[gj]);
            sb.push_back(below[gj]);
            ++gj;
        }
        const bool left_boundary = hi <= s.x(0);
        const bool right_boundary = lo >= s.x(n - 1);
        double spwe;
        if (left_boundary || right_boundary)
            spwe = periodic ? m * wrap_gap / 2.0 + sigma : m * (hi - lo) + sigma;
        else
            spwe = m * (hi - lo) / 2.0 + sigma;
        SegmentReport sr{lo, hi, sup, std::max(trapezoid(sg, sa), trapezoid(sg, sb)), spwe,
                         spwe * (hi - lo)};
        r.per_segment.push_back(sr);
        r.dspwe = std::max(r.dspwe, sup);
        r.spwe = std::max(r.spwe, spwe);
        r.ie += sr.ie;
        gi = gj > 0 ? gj - 1 : 0;
    }
    r.die = std::max(trapezoid(grid, above), trapezoid(grid, below));
    return r;
}

PwOrder pw_dominates(const std::vector<double>& e1, const std::vector<double>& e2) {
    if (e1.size() != e2.size()) throw input_error("pef profiles are on different grids");
    constexpr double tol = 1e-12;
    bool le = true, ge = true;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        if (e1[i] > e2[i] + tol) le = false;
        if (e2[i] > e1[i] + tol) ge = false;
    }
    if (le) return PwOrder::dominates;
    if (ge) return PwOrder::dominated;
    return PwOrder::incomparable;
}

}  // namespace lipfit
