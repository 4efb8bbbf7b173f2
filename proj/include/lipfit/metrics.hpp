#pragma once

#include <optional>
#include <vector>

#include "lipfit/core.hpp"
#include "lipfit/fit.hpp"

namespace lipfit {

enum class LossKind { IL, SPWL, MPWL, SSPWL, SMPWL, SIL, FSPWL, FMPWL, FIL };

LossKind loss_from_string(const std::string& s);
std::string to_string(LossKind k);

// f and g are sampled on the shared increasing grid. IL and MPWL use the
// trapezoid rule; the F-variants need ctx for v(D)*m.
double loss(LossKind kind, const std::vector<double>& grid, const std::vector<double>& f,
            const std::vector<double>& g, std::optional<LBBDPair> ctx = std::nullopt);

struct PefValue {
    double value = 0.0;
    bool feasible = true;
};

// Half-width of the admissible band at x. periodic uses the circle distance
// on the sample interval (1-d only).
PefValue pef_envelope(const SampleSet& s, const LBBDPair& pair, const Point& x,
                      bool periodic = false);

// Admissible band at x including the sigma terms. At a sample point the band
// collapses to the sample value.
struct Band {
    double lower;
    double upper;
    bool feasible;
};

// Worst-case pointwise error of a given estimate v at x: the larger distance
// from v to the band edges.
double pef_of_estimate(const Band& band, double v);

struct SegmentErrors {
    double dspwe = 0.0;
    double die = 0.0;
    double spwe = 0.0;
    bool feasible = true;
    bool case2 = false;
};

SegmentErrors segment_errors(Site A, Site B, const LBBDPair& pair, MethodId method);

struct SegmentReport {
    double lo, hi;
    double dspwe, die, spwe, ie;
};

struct ErrorReport {
    MethodId method = MethodId::LIPFIT;
    LBBDPair pair;
    bool periodic = false;
    std::size_t grid_n = 0;
    bool feasible = true;
    std::vector<SegmentReport> per_segment;
    double dspwe = 0.0, die = 0.0, spwe = 0.0, ie = 0.0;
};

constexpr std::size_t kDefaultGridN = 10000;

ErrorReport error_report(const SampleSet& s, const LBBDPair& pair, MethodId method, bool periodic,
                         std::size_t grid_n = kDefaultGridN);
// Same, for an already constructed estimate (e.g. an ingested external fit).
ErrorReport error_report(const SampleSet& s, const LBBDPair& pair, const FitCurve& approx,
                         bool periodic, std::size_t grid_n = kDefaultGridN);

// pef profile of an estimate on the report grid (uniform grid merged with
// the domain ends, the sample points and the gap midpoints).
struct PefProfile {
    std::vector<double> grid;
    std::vector<double> pef;
    std::vector<double> lower, upper;  // band edges including sigma
    bool feasible = true;
};

// uniform grid plus the sample abscissae and gap midpoints
std::vector<double> report_grid(const SampleSet& s, std::size_t grid_n);
PefProfile pef_profile(const SampleSet& s, const LBBDPair& pair, const FitCurve& approx,
                       bool periodic, const std::vector<double>& grid);

// Feasible iff |y_i - y_j| <= m d_ij + 2 sigma for every pair (circle
// distance when periodic).
bool pair_feasible(const SampleSet& s, const LBBDPair& pair, bool periodic = false);

enum class PwOrder { dominates, dominated, incomparable };

// e1 dominates e2 when e1 <= e2 + 1e-12 componentwise. Identical profiles
// dominate in both directions.
PwOrder pw_dominates(const std::vector<double>& e1, const std::vector<double>& e2);

double trapezoid(const std::vector<double>& grid, const std::vector<double>& v);

}  // namespace lipfit
