#include "lipfit/study.hpp"

#include <algorithm>
#include <cmath>

#include "lipfit/fit.hpp"
#include "lipfit/metrics.hpp"
#include "lipfit/parallel.hpp"

namespace lipfit {

const MethodSummary& CompareResult::get(const std::string& name) const {
    for (const auto& m : methods)
        if (m.name == name) return m;
    throw input_error("no method named '" + name + "' in the comparison");
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) throw input_error("quantile of an empty list");
    std::sort(v.begin(), v.end());
    double h = (static_cast<double>(v.size()) - 1.0) * q;
    auto lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Replicate make_replicate(const CompareConfig& cfg, std::size_t i) {
    const std::uint64_t base = derive_seed(cfg.gen.seed, i);
    GeneratorConfig g = cfg.gen;
    g.seed = derive_seed(base, 0);
    PiecewiseLinearFn f = g.periodic ? gen_ppl(g) : gen_pl(g);
    auto xs = stratified_sample(make_scheme(g.interval, cfg.counts, derive_seed(base, 1)));
    SampleSet s = add_deviation(f, g.sigma, xs, derive_seed(base, 2));
    std::vector<double> grid = uniform_grid(g.interval.a, g.interval.b, cfg.grid_n);
    std::vector<double> target(grid.size());
    SplitMix64 rng(derive_seed(base, 3));
    for (std::size_t j = 0; j < grid.size(); ++j) {
        target[j] = eval_pl(f, grid[j]);
        if (cfg.deviate_target && g.sigma > 0.0) target[j] += rng.uniform(-g.sigma, g.sigma);
    }
    return Replicate{std::move(f), std::move(s), std::move(grid), std::move(target)};
}

CompareResult run_compare(const CompareConfig& cfg) {
    cfg.gen.validate();
    if (cfg.replicates == 0) throw config_error("replicates must be positive");
    for (const auto& [name, fits] : cfg.external)
        if (fits.size() != cfg.replicates)
            throw config_error("external fit '" + name + "' must provide one curve per replicate");
    const double m = cfg.gen.m;
    const bool per = cfg.gen.periodic;
    std::vector<std::string> names{"lipfit", "lipfit.big", "lipfit.sm", "li", "nn", "avg"};
    for (const auto& kv : cfg.external) names.push_back(kv.first);
    std::vector<std::vector<double>> table(names.size(), std::vector<double>(cfg.replicates));
    parallel_for(cfg.replicates, [&](std::size_t r) {
        Replicate rep = make_replicate(cfg, r);
        auto mpwl = [&](const FitCurve& c) {
            return loss(LossKind::MPWL, rep.grid, rep.target, eval_fit(c, rep.grid));
        };
        table[0][r] = mpwl(lipfit_fit(rep.samples, m, per));
        table[1][r] = mpwl(lipfit_fit(rep.samples, 10.0 * m, per));
        table[2][r] = mpwl(lipfit_fit(rep.samples, m / 10.0, per));
        table[3][r] = mpwl(per ? pli_fit(rep.samples) : li_fit(rep.samples));
        table[4][r] = mpwl(per ? pnn_fit(rep.samples) : nn_fit(rep.samples));
        table[5][r] = mpwl(avg_fit(rep.samples));
        std::size_t k = 6;
        for (const auto& kv : cfg.external) table[k++][r] = mpwl(kv.second[r]);
    });
    CompareResult out;
    for (std::size_t k = 0; k < names.size(); ++k) {
        MethodSummary ms;
        ms.name = names[k];
        ms.mpwl = table[k];
        ms.q25 = quantile(table[k], 0.25);
        ms.q50 = quantile(table[k], 0.50);
        ms.q75 = quantile(table[k], 0.75);
        out.methods.push_back(std::move(ms));
    }
    return out;
}

}  // namespace lipfit
