#include "lipfit/simgen.hpp"

#include <algorithm>
#include <cmath>

namespace lipfit {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
    return mix64(mix64(seed) ^ (i + 0x9E3779B97F4A7C15ULL));
}

double GeneratorConfig::spacing_factor() const {
    return min_spacing_factor < 0.0 ? 1.0 / static_cast<double>(k + 2) : min_spacing_factor;
}

void GeneratorConfig::validate() const {
    require_finite(m, "m");
    require_finite(sigma, "sigma");
    if (!(m > 0.0)) throw config_error("generator needs m > 0");
    if (sigma < 0.0) throw config_error("generator needs sigma >= 0");
    if (spacing_factor() * static_cast<double>(k + 1) >= 1.0)
        throw config_error("min_spacing_factor * (k+1) must be < 1");
}

namespace {

std::vector<double> draw_breaks(const GeneratorConfig& cfg, SplitMix64& rng) {
    const double a = cfg.interval.a, b = cfg.interval.b;
    const double gap = cfg.spacing_factor() * cfg.interval.length();
    std::vector<double> p(cfg.k);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        for (auto& v : p) v = rng.uniform(a, b);
        std::sort(p.begin(), p.end());
        bool ok = p.empty() || (p.front() > a && p.back() < b);
        for (std::size_t i = 1; ok && i < p.size(); ++i) ok = p[i] - p[i - 1] >= gap;
        if (ok) return p;
    }
    throw config_error("break-point spacing not attained after the redraw cap");
}

}  // namespace

PiecewiseLinearFn gen_pl(const GeneratorConfig& cfg) {
    cfg.validate();
    if (cfg.periodic) throw config_error("gen_pl needs periodic=false");
    SplitMix64 rng(cfg.seed);
    std::vector<double> p = draw_breaks(cfg, rng);
    std::vector<double> knots{cfg.interval.a};
    knots.insert(knots.end(), p.begin(), p.end());
    knots.push_back(cfg.interval.b);
    std::vector<double> values(knots.size());
    values[0] = rng.uniform();
    for (std::size_t i = 1; i < knots.size(); ++i) {
        double slope = rng.uniform(-cfg.m, cfg.m);
        values[i] = values[i - 1] + slope * (knots[i] - knots[i - 1]);
    }
    return PiecewiseLinearFn(std::move(knots), std::move(values));
}

PiecewiseLinearFn gen_ppl(const GeneratorConfig& cfg) {
    cfg.validate();
    if (!cfg.periodic) throw config_error("gen_ppl needs periodic=true");
    SplitMix64 rng(cfg.seed);
    const double a = cfg.interval.a, b = cfg.interval.b, L = cfg.interval.length();
    std::vector<double> p = draw_breaks(cfg, rng);
    const double y0 = rng.uniform();
    if (p.size() < 2) return PiecewiseLinearFn({a, b}, {y0, y0});
    std::vector<double> py(p.size());
    double wrap = 0.0;
    bool ok = false;
    for (int attempt = 0; attempt < kMaxRedraws && !ok; ++attempt) {
        py[0] = y0;
        for (std::size_t i = 1; i < p.size(); ++i)
            py[i] = py[i - 1] + rng.uniform(-cfg.m, cfg.m) * (p[i] - p[i - 1]);
        wrap = (y0 - py.back()) / (L - (p.back() - p.front()));
        ok = std::abs(wrap) <= cfg.m;
    }
    if (!ok) throw config_error("wrap slope exceeded m after the redraw cap");
    const double fa = y0 - wrap * (p.front() - a);
    std::vector<double> knots{a}, values{fa};
    knots.insert(knots.end(), p.begin(), p.end());
    values.insert(values.end(), py.begin(), py.end());
    knots.push_back(b);
    values.push_back(fa);
    return PiecewiseLinearFn(std::move(knots), std::move(values));
}

SampleSet add_deviation(const PiecewiseLinearFn& f, double sigma, const std::vector<double>& xs,
                        std::uint64_t seed) {
    require_finite(sigma, "sigma");
    if (sigma < 0.0) throw parameter_error("sigma must be nonnegative");
    SplitMix64 rng(seed);
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = sigma > 0.0 ? rng.uniform(-sigma, sigma) : 0.0;
        ys[i] = eval_pl(f, xs[i]) + e;
    }
    return SampleSet::make_1d(xs, std::move(ys), Interval1D(f.lo(), f.hi()));
}

SamplingScheme make_scheme(const Interval1D& interval, const std::vector<std::size_t>& counts,
                           std::uint64_t seed) {
    if (counts.empty()) throw config_error("sampling scheme needs at least one stratum");
    SamplingScheme s;
    const double w = interval.length() / static_cast<double>(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double lo = interval.a + w * static_cast<double>(i);
        double hi = i + 1 == counts.size() ? interval.b : interval.a + w * static_cast<double>(i + 1);
        s.strata.emplace_back(lo, hi);
    }
    s.per_stratum = counts;
    s.seed = seed;
    return s;
}

std::vector<double> stratified_sample(const SamplingScheme& scheme) {
    if (scheme.strata.size() != scheme.per_stratum.size())
        throw config_error("strata and counts lengths differ");
    for (std::size_t i = 1; i < scheme.strata.size(); ++i)
        if (scheme.strata[i].a != scheme.strata[i - 1].b) throw config_error("strata must tile");
    SplitMix64 rng(scheme.seed);
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
        std::vector<double> xs;
        for (std::size_t i = 0; i < scheme.strata.size(); ++i)
            for (std::size_t c = 0; c < scheme.per_stratum[i]; ++c)
                xs.push_back(rng.uniform(scheme.strata[i].a, scheme.strata[i].b));
        std::sort(xs.begin(), xs.end());
        if (std::adjacent_find(xs.begin(), xs.end()) == xs.end()) return xs;
    }
    throw config_error("could not draw distinct sample locations");
}

std::vector<double> moving_average(const std::vector<double>& values, std::size_t window) {
    if (window == 0 || window % 2 == 0) throw parameter_error("window must be a positive odd count");
    if (window > values.size()) throw parameter_error("window exceeds the grid length");
    const std::size_t half = window / 2, n = values.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t h = std::min({half, i, n - 1 - i});
        double s = 0.0;
        for (std::size_t j = i - h; j <= i + h; ++j) s += values[j];
        out[i] = s / static_cast<double>(2 * h + 1);
    }
    return out;
}

}  // namespace lipfit
