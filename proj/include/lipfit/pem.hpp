#pragma once

#include <string>
#include <vector>

#include "lipfit/core.hpp"
#include "lipfit/lbbd.hpp"
#include "lipfit/metrics.hpp"

namespace lipfit {

enum class ErrorKind { DSPWE, DIE, SPWE, IE };

ErrorKind error_kind_from_string(const std::string& s);
std::string to_string(ErrorKind k);
double pick_error(const ErrorReport& r, ErrorKind k);

struct PemAudit {
    double m;
    double gamma;
    double error;  // +inf when the pair is infeasible for the samples
    bool feasible;
};

struct PemResult {
    LBBDPair chosen;
    double upsilon = 0.0;
    ErrorKind error_kind = ErrorKind::DSPWE;
    MethodId method = MethodId::LIPFIT;
    std::vector<PemAudit> per_m;
};

PemResult pem_select(const SampleSet& s, const LBBDCurve& curve, ErrorKind kind, MethodId method,
                     bool periodic, std::size_t grid_n = kDefaultGridN);

double upsilon_only(const SampleSet& s, const LBBDCurve& curve, ErrorKind kind, MethodId method,
                    bool periodic, std::size_t grid_n = kDefaultGridN);

// (IE, DIE); (SPWE, DSPWE[LI], DSPWE[Lipfit]), each the minimal error over the
// curve. pair is the pair chosen for DSPWE[Lipfit].
struct ErrorBlock {
    double ie, die, spwe, dspwe_li, dspwe_lipfit;
    LBBDPair pair;
};

ErrorBlock error_block(const SampleSet& s, const LBBDCurve& curve, bool periodic,
                       std::size_t grid_n = kDefaultGridN);

}  // namespace lipfit
