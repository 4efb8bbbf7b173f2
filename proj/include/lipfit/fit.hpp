#pragma once

#include <vector>

#include "lipfit/core.hpp"

namespace lipfit {

struct EnvelopePair {
    double lower;
    double upper;
    double midpoint() const { return 0.5 * (lower + upper); }
};

struct Site {
    double x;
    double y;
};

FitCurve avg_fit(const SampleSet& s);
FitCurve nn_fit(const SampleSet& s);
FitCurve pnn_fit(const SampleSet& s);
FitCurve li_fit(const SampleSet& s);
FitCurve pli_fit(const SampleSet& s);

struct LipfitSegment {
    FitSegment piece;  // open-segment function; endpoint values are pinned separately
    bool case2;        // |m*| > m
    double delta;      // Delta in case 1, Delta' in case 2
};

LipfitSegment lipfit_segment(Site A, Site B, double m);

// Lipschitz envelopes over all samples, sigma excluded.
EnvelopePair lipfit_envelope(const SampleSet& s, double m, const Point& x);
EnvelopePair envelope_1d(const std::vector<Site>& sites, double m, double x);

FitCurve lipfit_fit(const SampleSet& s, double m, bool periodic);

// Same construction as lipfit_fit but also accepts m = 0, where the curve is
// the constant envelope midpoint. Used by error evaluation on LB-BD grids.
FitCurve lipfit_envelope_curve(const SampleSet& s, double m, bool periodic);

// Sample sites used by the periodic variants. With all_copies every sample is
// repeated at +-(b-a); otherwise only x_n-(b-a) and x_1+(b-a) are added.
// Shifted copies landing on an existing coordinate are dropped.
std::vector<Site> periodic_sites(const SampleSet& s, bool all_copies);
std::vector<Site> plain_sites(const SampleSet& s);

// Dispatch. NN/LI/LIPFIT with periodic=true map to their periodic variants.
FitCurve fit_method(const SampleSet& s, MethodId method, double m, bool periodic);

// Piecewise-linear curve through externally produced (x, value) pairs.
FitCurve external_fit(const std::vector<double>& xs, const std::vector<double>& values,
                      Interval1D domain);

// Max |closed form - envelope midpoint| over the given points, for
// m-consistent data. Used as a verification mode of the fast path.
double lipfit_segment_envelope_gap(const SampleSet& s, double m, const std::vector<double>& xs);

}  // namespace lipfit
