#include "lipfit/core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace lipfit {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw input_error(std::string(what) + " must be finite");
}

double distance(const Point& p, const Point& q) {
    if (p.dim() != q.dim()) throw input_error("point dimension mismatch");
    if (p.dim() == 1) return std::abs(p.coords[0] - q.coords[0]);
    double s = 0.0;
    for (std::size_t k = 0; k < p.dim(); ++k) {
        double d = p.coords[k] - q.coords[k];
        s += d * d;
    }
    return std::sqrt(s);
}

Interval1D::Interval1D(double lo, double hi) : a(lo), b(hi) {
    require_finite(lo, "interval a");
    require_finite(hi, "interval b");
    if (!(lo < hi)) throw input_error("interval requires a < b");
}

SampleSet::SampleSet(std::vector<Point> xs, std::vector<double> ys, Interval1D domain)
    : xs_(std::move(xs)), ys_(std::move(ys)), domain_(domain) {
    validate_common();
    if (d_ != 1) throw input_error("an Interval1D domain requires 1-d points");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        double x = xs_[i].coords[0];
        if (!domain.contains(x))
            throw input_error("sample " + std::to_string(i) + " lies outside the domain");
        if (i > 0 && !(xs_[i - 1].coords[0] < x))
            throw input_error("sample xs must be strictly increasing (row " + std::to_string(i) +
                              ")");
    }
}

SampleSet::SampleSet(std::vector<Point> xs, std::vector<double> ys, std::vector<double> box_lo,
                     std::vector<double> box_hi)
    : xs_(std::move(xs)), ys_(std::move(ys)), box_lo_(std::move(box_lo)),
      box_hi_(std::move(box_hi)) {
    validate_common();
    if (box_lo_.size() != d_ || box_hi_.size() != d_)
        throw input_error("bounding box dimension mismatch");
    for (std::size_t k = 0; k < d_; ++k) {
        require_finite(box_lo_[k], "box bound");
        require_finite(box_hi_[k], "box bound");
        if (!(box_lo_[k] < box_hi_[k])) throw input_error("bounding box requires lo < hi");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (xs_[i].coords == xs_[j].coords)
                throw input_error("duplicate sample point at row " + std::to_string(i));
    if (d_ == 1) domain_ = Interval1D(box_lo_[0], box_hi_[0]);
}

void SampleSet::validate_common() {
    if (xs_.empty()) throw input_error("sample set must be nonempty");
    if (xs_.size() != ys_.size()) throw input_error("xs and ys lengths differ");
    d_ = xs_.front().dim();
    if (d_ == 0) throw input_error("points must have at least one coordinate");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (xs_[i].dim() != d_) throw input_error("mixed point dimensions");
        for (double c : xs_[i].coords) require_finite(c, "sample coordinate");
        require_finite(ys_[i], "sample value");
    }
}

SampleSet SampleSet::make_1d(const std::vector<double>& xs, std::vector<double> ys,
                             Interval1D domain) {
    std::vector<Point> pts(xs.begin(), xs.end());
    return SampleSet(std::move(pts), std::move(ys), domain);
}

std::vector<double> SampleSet::xs_1d() const {
    if (d_ != 1) throw input_error("xs_1d requires 1-d samples");
    std::vector<double> out(xs_.size());
    for (std::size_t i = 0; i < xs_.size(); ++i) out[i] = xs_[i].coords[0];
    return out;
}

const Interval1D& SampleSet::interval() const {
    if (!domain_) throw input_error("sample set has no 1-d interval");
    return *domain_;
}

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    if (knots_.size() < 2) throw input_error("piecewise-linear function needs >= 2 knots");
    if (knots_.size() != values_.size()) throw input_error("knots and values lengths differ");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        require_finite(knots_[i], "knot");
        require_finite(values_[i], "knot value");
        if (i > 0 && !(knots_[i - 1] < knots_[i]))
            throw input_error("knots must be strictly increasing");
    }
}

double PiecewiseLinearFn::lip() const {
    double l = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        l = std::max(l, std::abs(values_[i] - values_[i - 1]) / (knots_[i] - knots_[i - 1]));
    return l;
}

double eval_pl(const PiecewiseLinearFn& f, double x) {
    const auto& k = f.knots();
    const auto& v = f.values();
    if (!(x >= k.front() && x <= k.back())) throw domain_error("x outside knot span");
    auto it = std::lower_bound(k.begin(), k.end(), x);
    std::size_t j = static_cast<std::size_t>(it - k.begin());
    if (k[j] == x) return v[j];
    std::size_t i = j - 1;
    double t = (x - k[i]) / (k[j] - k[i]);
    return v[i] + t * (v[j] - v[i]);
}

std::string to_string(MethodId m) {
    switch (m) {
        case MethodId::AVG: return "avg";
        case MethodId::NN: return "nn";
        case MethodId::PNN: return "pnn";
        case MethodId::LI: return "li";
        case MethodId::PLI: return "pli";
        case MethodId::LIPFIT: return "lipfit";
        case MethodId::PLIPFIT: return "plipfit";
        case MethodId::EXTERNAL: return "external";
    }
    return "unknown";
}

MethodId method_from_string(const std::string& s) {
    std::string l = s;
    std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
    if (l == "avg") return MethodId::AVG;
    if (l == "nn") return MethodId::NN;
    if (l == "pnn") return MethodId::PNN;
    if (l == "li") return MethodId::LI;
    if (l == "pli") return MethodId::PLI;
    if (l == "lipfit") return MethodId::LIPFIT;
    if (l == "plipfit") return MethodId::PLIPFIT;
    if (l == "external") return MethodId::EXTERNAL;
    throw input_error("unknown method '" + s + "'");
}

bool is_periodic_method(MethodId m) {
    return m == MethodId::PNN || m == MethodId::PLI || m == MethodId::PLIPFIT;
}

FitCurve::FitCurve(Interval1D domain, std::vector<FitSegment> segments,
                   std::vector<std::pair<double, double>> pinned, MethodId method, bool periodic)
    : domain_(domain), segments_(std::move(segments)), pinned_(std::move(pinned)),
      method_(method), periodic_(periodic) {
    if (segments_.empty()) throw input_error("fit curve needs at least one segment");
    if (segments_.front().lo != domain_.a || segments_.back().hi != domain_.b)
        throw input_error("segments must span the domain");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const auto& s = segments_[i];
        if (s.fn.lo() > s.lo || s.fn.hi() < s.hi)
            throw input_error("segment function does not cover its interval");
        if (i > 0 && segments_[i - 1].hi != s.lo) throw input_error("segments must tile the domain");
    }
    std::sort(pinned_.begin(), pinned_.end());
}

double eval_fit(const FitCurve& c, double x) {
    const auto& dom = c.domain();
    if (!dom.contains(x)) throw domain_error("x outside the fit domain");
    const auto& pin = c.pinned();
    auto pit = std::lower_bound(pin.begin(), pin.end(), x,
                                [](const std::pair<double, double>& p, double v) { return p.first < v; });
    if (pit != pin.end() && pit->first == x) return pit->second;
    const auto& segs = c.segments();
    auto sit = std::lower_bound(segs.begin(), segs.end(), x,
                                [](const FitSegment& s, double v) { return s.hi < v; });
    if (sit == segs.end()) --sit;
    return eval_pl(sit->fn, x);
}

std::vector<double> eval_fit(const FitCurve& c, const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_fit(c, xs[i]);
    return out;
}

LBBDPair::LBBDPair(double m_, double sigma_) : m(m_), sigma(sigma_) {
    require_finite(m_, "m");
    require_finite(sigma_, "sigma");
    if (m_ < 0.0 || sigma_ < 0.0) throw parameter_error("m and sigma must be nonnegative");
}

LipResult lip_of_samples(const SampleSet& s) {
    LipResult r;
    const std::size_t n = s.size();
    if (n < 2) {
        r.degenerate = true;
        return r;
    }
    if (s.dim() == 1) {
        for (std::size_t i = 1; i < n; ++i)
            r.value = std::max(r.value, std::abs(s.y(i) - s.y(i - 1)) / (s.x(i) - s.x(i - 1)));
        return r;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            r.value = std::max(r.value, std::abs(s.y(i) - s.y(j)) / distance(s.xs()[i], s.xs()[j]));
    return r;
}

double diam_of(const std::vector<double>& values) {
    if (values.empty()) throw input_error("diam_of requires a nonempty list");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *hi - *lo;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n) {
    if (n < 2) throw parameter_error("grid needs at least 2 points");
    std::vector<double> g(n);
    const double h = (b - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = a + h * static_cast<double>(i);
    g.back() = b;
    return g;
}

}  // namespace lipfit
