#pragma once

#include <cstdint>
#include <vector>

#include "lipfit/core.hpp"

namespace lipfit {

// SplitMix64 (Steele, Lea and Flood): state advances by 0x9E3779B97F4A7C15
// and each output is the finalizer of the new state. Doubles take the top 53
// bits. Fixed so that seeds reproduce across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);  // [lo, hi)

private:
    std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t z);
// Seed of replicate (or stream) i derived from a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i);

struct GeneratorConfig {
    Interval1D interval{0.0, 1.0};
    std::size_t k = 5;
    double m = 10.0;
    double sigma = 0.0;
    double min_spacing_factor = -1.0;  // negative means 1/(k+2)
    bool periodic = false;
    std::uint64_t seed = 1;

    double spacing_factor() const;
    void validate() const;
};

constexpr int kMaxRedraws = 10000;

PiecewiseLinearFn gen_pl(const GeneratorConfig& cfg);
PiecewiseLinearFn gen_ppl(const GeneratorConfig& cfg);

// ys = f(xs) + iid uniform(-sigma, sigma).
SampleSet add_deviation(const PiecewiseLinearFn& f, double sigma, const std::vector<double>& xs,
                        std::uint64_t seed);

struct SamplingScheme {
    std::vector<Interval1D> strata;
    std::vector<std::size_t> per_stratum;
    std::uint64_t seed = 1;
};

// Equal-width strata of the interval with the given counts.
SamplingScheme make_scheme(const Interval1D& interval, const std::vector<std::size_t>& counts,
                           std::uint64_t seed);

std::vector<double> stratified_sample(const SamplingScheme& scheme);

// Centered mean; near the ends the window shrinks symmetrically.
std::vector<double> moving_average(const std::vector<double>& values, std::size_t window);

}  // namespace lipfit
