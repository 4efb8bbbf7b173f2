#include "lipfit/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipfit {

namespace {

std::vector<std::pair<double, double>> sample_pins(const SampleSet& s) {
    std::vector<std::pair<double, double>> pins(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) pins[i] = {s.x(i), s.y(i)};
    return pins;
}

const Interval1D& require_1d(const SampleSet& s) {
    if (s.dim() != 1) throw input_error("method requires 1-d samples");
    return s.interval();
}

FitSegment constant_segment(double lo, double hi, double v) {
    return FitSegment{lo, hi, PiecewiseLinearFn({lo, hi}, {v, v})};
}

// Strictly increasing knots with values from f; near-equal knots collapse.
template <class F>
PiecewiseLinearFn pl_from_knots(std::vector<double> knots, F&& f) {
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    std::vector<double> values(knots.size());
    for (std::size_t i = 0; i < knots.size(); ++i) values[i] = f(knots[i]);
    return PiecewiseLinearFn(std::move(knots), std::move(values));
}

FitCurve nn_from_sites(const std::vector<Site>& sites, const SampleSet& s, MethodId id,
                       bool periodic) {
    const Interval1D& dom = s.interval();
    std::vector<double> cuts{dom.a};
    for (std::size_t k = 0; k + 1 < sites.size(); ++k) {
        double mid = 0.5 * (sites[k].x + sites[k + 1].x);
        if (mid > dom.a && mid < dom.b) cuts.push_back(mid);
    }
    cuts.push_back(dom.b);
    std::vector<FitSegment> segs;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        double c = 0.5 * (cuts[j] + cuts[j + 1]);
        std::size_t best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < sites.size(); ++k) {
            double d = std::abs(sites[k].x - c);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        segs.push_back(constant_segment(cuts[j], cuts[j + 1], sites[best].y));
    }
    return FitCurve(dom, std::move(segs), sample_pins(s), id, periodic);
}

double li_value(const std::vector<Site>& sites, double x) {
    if (x <= sites.front().x) return sites.front().y;
    if (x >= sites.back().x) return sites.back().y;
    auto it = std::upper_bound(sites.begin(), sites.end(), x,
                               [](double v, const Site& st) { return v < st.x; });
    const Site& R = *it;
    const Site& L = *(it - 1);
    if (L.x == x) return L.y;
    double t = (x - L.x) / (R.x - L.x);
    return L.y + t * (R.y - L.y);
}

FitCurve li_from_sites(const std::vector<Site>& sites, const SampleSet& s, MethodId id,
                       bool periodic) {
    const Interval1D& dom = s.interval();
    std::vector<double> knots{dom.a, dom.b};
    for (const auto& st : sites)
        if (st.x > dom.a && st.x < dom.b) knots.push_back(st.x);
    auto fn = pl_from_knots(std::move(knots), [&](double x) { return li_value(sites, x); });
    std::vector<FitSegment> segs{FitSegment{dom.a, dom.b, std::move(fn)}};
    return FitCurve(dom, std::move(segs), sample_pins(s), id, periodic);
}

// Exact 1-d envelope midpoint over sorted sites, through prefix and suffix
// extremes. Between two consecutive site positions each envelope is the min
// (or max) of two lines, so the midpoint has at most two kinks there.
class EnvelopeMidpoint1D {
public:
    EnvelopeMidpoint1D(std::vector<Site> sites, double m) : m_(m) {
        std::sort(sites.begin(), sites.end(),
                  [](const Site& p, const Site& q) { return p.x < q.x; });
        for (const auto& st : sites) {
            if (!u_.empty() && u_.back() == st.x) {
                umin_.back() = std::min(umin_.back(), st.y);
                lmax_.back() = std::max(lmax_.back(), st.y);
            } else {
                u_.push_back(st.x);
                umin_.push_back(st.y);
                lmax_.push_back(st.y);
            }
        }
        const std::size_t K = u_.size();
        ul_.resize(K);
        ll_.resize(K);
        ur_.resize(K);
        lr_.resize(K);
        for (std::size_t k = 0; k < K; ++k) {
            double a = umin_[k] - m_ * u_[k];
            double b = lmax_[k] + m_ * u_[k];
            ul_[k] = k ? std::min(ul_[k - 1], a) : a;
            ll_[k] = k ? std::max(ll_[k - 1], b) : b;
        }
        for (std::size_t k = K; k-- > 0;) {
            double a = umin_[k] + m_ * u_[k];
            double b = lmax_[k] - m_ * u_[k];
            ur_[k] = k + 1 < K ? std::min(ur_[k + 1], a) : a;
            lr_[k] = k + 1 < K ? std::max(lr_[k + 1], b) : b;
        }
    }

    EnvelopePair at(double x) const {
        const std::size_t K = u_.size();
        // number of site positions <= x
        std::size_t j = static_cast<std::size_t>(std::upper_bound(u_.begin(), u_.end(), x) - u_.begin());
        double up = std::numeric_limits<double>::infinity();
        double lo = -std::numeric_limits<double>::infinity();
        if (j > 0) {
            up = std::min(up, m_ * x + ul_[j - 1]);
            lo = std::max(lo, -m_ * x + ll_[j - 1]);
        }
        if (j < K) {
            up = std::min(up, -m_ * x + ur_[j]);
            lo = std::max(lo, m_ * x + lr_[j]);
        }
        return {lo, up};
    }

    double mid(double x) const { return at(x).midpoint(); }

    // Candidate kinks of the midpoint strictly inside (lo, hi).
    std::vector<double> kinks(double lo, double hi) const {
        std::vector<double> out;
        const std::size_t K = u_.size();
        for (std::size_t k = 0; k < K; ++k)
            if (u_[k] > lo && u_[k] < hi) out.push_back(u_[k]);
        if (m_ == 0.0) return out;
        for (std::size_t k = 0; k + 1 < K; ++k) {
            double l = std::max(lo, u_[k]);
            double h = std::min(hi, u_[k + 1]);
            if (!(l < h)) continue;
            double xu = (ur_[k + 1] - ul_[k]) / (2.0 * m_);
            double xl = (ll_[k] - lr_[k + 1]) / (2.0 * m_);
            if (xu > l && xu < h) out.push_back(xu);
            if (xl > l && xl < h) out.push_back(xl);
        }
        return out;
    }

private:
    double m_;
    std::vector<double> u_, umin_, lmax_;
    std::vector<double> ul_, ll_, ur_, lr_;
};

}  // namespace

std::vector<Site> plain_sites(const SampleSet& s) {
    require_1d(s);
    std::vector<Site> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = {s.x(i), s.y(i)};
    return out;
}

std::vector<Site> periodic_sites(const SampleSet& s, bool all_copies) {
    const Interval1D& dom = require_1d(s);
    const double L = dom.length();
    const std::size_t n = s.size();
    std::vector<Site> out;
    if (all_copies) {
        for (std::size_t i = 0; i < n; ++i) out.push_back({s.x(i) - L, s.y(i)});
        for (std::size_t i = 0; i < n; ++i) out.push_back({s.x(i), s.y(i)});
        for (std::size_t i = 0; i < n; ++i) out.push_back({s.x(i) + L, s.y(i)});
        std::stable_sort(out.begin(), out.end(),
                         [](const Site& p, const Site& q) { return p.x < q.x; });
        return out;
    }
    double left = s.x(n - 1) - L;
    double right = s.x(0) + L;
    if (left < s.x(0)) out.push_back({left, s.y(n - 1)});
    for (std::size_t i = 0; i < n; ++i) out.push_back({s.x(i), s.y(i)});
    if (right > s.x(n - 1)) out.push_back({right, s.y(0)});
    return out;
}

FitCurve avg_fit(const SampleSet& s) {
    const Interval1D& dom = require_1d(s);
    double sum = 0.0;
    for (double y : s.ys()) sum += y;
    double mean = sum / static_cast<double>(s.size());
    return FitCurve(dom, {constant_segment(dom.a, dom.b, mean)}, sample_pins(s), MethodId::AVG,
                    false);
}

FitCurve nn_fit(const SampleSet& s) {
    return nn_from_sites(plain_sites(s), s, MethodId::NN, false);
}

FitCurve pnn_fit(const SampleSet& s) {
    return nn_from_sites(periodic_sites(s, false), s, MethodId::PNN, true);
}

FitCurve li_fit(const SampleSet& s) {
    return li_from_sites(plain_sites(s), s, MethodId::LI, false);
}

FitCurve pli_fit(const SampleSet& s) {
    return li_from_sites(periodic_sites(s, false), s, MethodId::PLI, true);
}

LipfitSegment lipfit_segment(Site A, Site B, double m) {
    require_finite(m, "m");
    if (!(m > 0.0)) throw parameter_error("lipfit_segment requires m > 0");
    if (!(A.x < B.x)) throw input_error("lipfit_segment requires x_A < x_B");
    const double dx = B.x - A.x;
    const double dy = B.y - A.y;
    const double mstar = dy / dx;
    LipfitSegment out{constant_segment(A.x, B.x, A.y), false, 0.0};
    if (std::abs(mstar) <= m) {
        const double delta = 0.5 * (dx - std::abs(dy / m));
        out.delta = delta;
        std::vector<double> k{A.x, B.x}, v{A.y, B.y};
        if (delta > 0.0) {
            double xf = A.x + delta, xg = B.x - delta;
            if (xf < xg) {
                k = {A.x, xf, xg, B.x};
                v = {A.y, A.y, B.y, B.y};
            } else {
                k = {A.x, 0.5 * (A.x + B.x), B.x};
                v = {A.y, A.y, B.y};
            }
        }
        out.piece = FitSegment{A.x, B.x, PiecewiseLinearFn(std::move(k), std::move(v))};
    } else {
        const double dprime = 0.5 * dx * (std::abs(mstar) - m);
        const double sgn = mstar > 0 ? 1.0 : -1.0;
        out.case2 = true;
        out.delta = dprime;
        out.piece = FitSegment{A.x, B.x,
                               PiecewiseLinearFn({A.x, B.x}, {A.y + sgn * dprime, B.y - sgn * dprime})};
    }
    return out;
}

EnvelopePair lipfit_envelope(const SampleSet& s, double m, const Point& x) {
    require_finite(m, "m");
    if (m < 0.0) throw parameter_error("m must be nonnegative");
    EnvelopePair e{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < s.size(); ++i) {
        double d = distance(x, s.xs()[i]);
        e.lower = std::max(e.lower, s.y(i) - m * d);
        e.upper = std::min(e.upper, s.y(i) + m * d);
    }
    return e;
}

EnvelopePair envelope_1d(const std::vector<Site>& sites, double m, double x) {
    EnvelopePair e{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& st : sites) {
        double d = std::abs(x - st.x);
        e.lower = std::max(e.lower, st.y - m * d);
        e.upper = std::min(e.upper, st.y + m * d);
    }
    return e;
}

FitCurve lipfit_envelope_curve(const SampleSet& s, double m, bool periodic) {
    const Interval1D& dom = require_1d(s);
    require_finite(m, "m");
    if (m < 0.0) throw parameter_error("m must be nonnegative");
    EnvelopeMidpoint1D env(periodic ? periodic_sites(s, true) : plain_sites(s), m);
    std::vector<double> cuts{dom.a};
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.x(i) > dom.a && s.x(i) < dom.b) cuts.push_back(s.x(i));
    cuts.push_back(dom.b);
    std::vector<FitSegment> segs;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        double lo = cuts[j], hi = cuts[j + 1];
        std::vector<double> knots = env.kinks(lo, hi);
        knots.push_back(lo);
        knots.push_back(hi);
        segs.push_back(FitSegment{lo, hi, pl_from_knots(std::move(knots), [&](double x) { return env.mid(x); })});
    }
    return FitCurve(dom, std::move(segs), sample_pins(s),
                    periodic ? MethodId::PLIPFIT : MethodId::LIPFIT, periodic);
}

FitCurve lipfit_fit(const SampleSet& s, double m, bool periodic) {
    require_finite(m, "m");
    if (!(m > 0.0)) throw parameter_error("lipfit requires m > 0");
    return lipfit_envelope_curve(s, m, periodic);
}

FitCurve fit_method(const SampleSet& s, MethodId method, double m, bool periodic) {
    switch (method) {
        case MethodId::AVG: return avg_fit(s);
        case MethodId::NN: return periodic ? pnn_fit(s) : nn_fit(s);
        case MethodId::PNN: return pnn_fit(s);
        case MethodId::LI: return periodic ? pli_fit(s) : li_fit(s);
        case MethodId::PLI: return pli_fit(s);
        case MethodId::LIPFIT: return lipfit_fit(s, m, periodic);
        case MethodId::PLIPFIT: return lipfit_fit(s, m, true);
        case MethodId::EXTERNAL: break;
    }
    throw input_error("external fits must be ingested, not computed");
}

FitCurve external_fit(const std::vector<double>& xs, const std::vector<double>& values,
                      Interval1D domain) {
    if (xs.empty() || xs.size() != values.size())
        throw input_error("external fit needs matching nonempty columns");
    std::vector<Site> sites(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require_finite(xs[i], "external x");
        require_finite(values[i], "external value");
        if (i > 0 && !(xs[i - 1] < xs[i])) throw input_error("external xs must be increasing");
        sites[i] = {xs[i], values[i]};
    }
    std::vector<double> knots{domain.a, domain.b};
    for (double x : xs)
        if (x > domain.a && x < domain.b) knots.push_back(x);
    auto fn = pl_from_knots(std::move(knots), [&](double x) { return li_value(sites, x); });
    return FitCurve(domain, {FitSegment{domain.a, domain.b, std::move(fn)}}, {}, MethodId::EXTERNAL,
                    false);
}

double lipfit_segment_envelope_gap(const SampleSet& s, double m, const std::vector<double>& xs) {
    require_1d(s);
    double gap = 0.0;
    for (double x : xs) {
        if (x <= s.x(0) || x >= s.x(s.size() - 1)) continue;
        std::size_t k = 0;
        while (s.x(k + 1) < x) ++k;
        if (s.x(k + 1) == x) continue;
        auto seg = lipfit_segment({s.x(k), s.y(k)}, {s.x(k + 1), s.y(k + 1)}, m);
        double closed = eval_pl(seg.piece.fn, x);
        double env = lipfit_envelope(s, m, Point(x)).midpoint();
        gap = std::max(gap, std::abs(closed - env));
    }
    return gap;
}

}  // namespace lipfit
