#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lipfit/core.hpp"
#include "lipfit/simgen.hpp"

namespace lipfit {

// Replicated method comparison on simulated functions.
struct CompareConfig {
    GeneratorConfig gen;                    // gen.seed is the base seed
    std::vector<std::size_t> counts{2, 2, 2, 2};  // per equal-width stratum
    std::size_t replicates = 300;
    std::size_t grid_n = 2001;
    // The target adds iid deviations to the generated curve at every grid
    // point; otherwise the target is the generated curve itself.
    bool deviate_target = true;
    // Externally produced fits, keyed by name, one curve per replicate.
    std::map<std::string, std::vector<FitCurve>> external;
};

struct MethodSummary {
    std::string name;
    double q25 = 0.0, q50 = 0.0, q75 = 0.0;
    std::vector<double> mpwl;  // per replicate
};

struct CompareResult {
    std::vector<MethodSummary> methods;
    const MethodSummary& get(const std::string& name) const;
};

// Roster: lipfit (m), lipfit.big (10 m), lipfit.sm (m / 10), li, nn, avg,
// then any external fits.
CompareResult run_compare(const CompareConfig& cfg);

struct Replicate {
    PiecewiseLinearFn truth_fn;
    SampleSet samples;
    std::vector<double> grid;
    std::vector<double> target;  // target values on grid
};

Replicate make_replicate(const CompareConfig& cfg, std::size_t i);

// Linear-interpolation quantile (type 7).
double quantile(std::vector<double> v, double q);

}  // namespace lipfit
