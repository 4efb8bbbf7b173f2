#include "lipfit/pem.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "lipfit/parallel.hpp"

namespace lipfit {

ErrorKind error_kind_from_string(const std::string& s) {
    std::string u = s;
    std::transform(u.begin(), u.end(), u.begin(), [](unsigned char c) { return std::toupper(c); });
    if (u == "DSPWE") return ErrorKind::DSPWE;
    if (u == "DIE") return ErrorKind::DIE;
    if (u == "SPWE") return ErrorKind::SPWE;
    if (u == "IE") return ErrorKind::IE;
    throw input_error("unknown error kind '" + s + "'");
}

std::string to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::DSPWE: return "DSPWE";
        case ErrorKind::DIE: return "DIE";
        case ErrorKind::SPWE: return "SPWE";
        case ErrorKind::IE: return "IE";
    }
    return "unknown";
}

double pick_error(const ErrorReport& r, ErrorKind k) {
    switch (k) {
        case ErrorKind::DSPWE: return r.dspwe;
        case ErrorKind::DIE: return r.die;
        case ErrorKind::SPWE: return r.spwe;
        case ErrorKind::IE: return r.ie;
    }
    return r.dspwe;
}

PemResult pem_select(const SampleSet& s, const LBBDCurve& curve, ErrorKind kind, MethodId method,
                     bool periodic, std::size_t grid_n) {
    if (curve.m_grid.empty() || curve.m_grid.size() != curve.gamma.size())
        throw input_error("PEM needs a nonempty curve");
    if (method != MethodId::NN && method != MethodId::LI && method != MethodId::LIPFIT)
        throw parameter_error("PEM supports NN, LI and Lipfit");
    PemResult res;
    res.error_kind = kind;
    res.method = method;
    res.per_m.resize(curve.m_grid.size());
    parallel_for(curve.m_grid.size(), [&](std::size_t i) {
        const double m = curve.m_grid[i];
        const double g = std::max(0.0, curve.gamma[i]);
        ErrorReport r = error_report(s, LBBDPair(m, g), method, periodic, grid_n);
        res.per_m[i] = PemAudit{m, g, r.feasible ? pick_error(r, kind)
                                                 : std::numeric_limits<double>::infinity(),
                                r.feasible};
    });
    std::size_t best = res.per_m.size();
    for (std::size_t i = 0; i < res.per_m.size(); ++i) {
        if (!res.per_m[i].feasible) continue;
        if (best == res.per_m.size() || res.per_m[i].error < res.per_m[best].error) best = i;
    }
    if (best == res.per_m.size())
        throw infeasible_error("every LB-BD pair on the curve is infeasible for these samples");
    res.chosen = LBBDPair(res.per_m[best].m, res.per_m[best].gamma);
    res.upsilon = res.per_m[best].error;
    return res;
}

double upsilon_only(const SampleSet& s, const LBBDCurve& curve, ErrorKind kind, MethodId method,
                    bool periodic, std::size_t grid_n) {
    return pem_select(s, curve, kind, method, periodic, grid_n).upsilon;
}

ErrorBlock error_block(const SampleSet& s, const LBBDCurve& curve, bool periodic,
                       std::size_t grid_n) {
    ErrorBlock b{};
    b.ie = upsilon_only(s, curve, ErrorKind::IE, MethodId::LIPFIT, periodic, grid_n);
    b.die = upsilon_only(s, curve, ErrorKind::DIE, MethodId::LIPFIT, periodic, grid_n);
    b.spwe = upsilon_only(s, curve, ErrorKind::SPWE, MethodId::LIPFIT, periodic, grid_n);
    b.dspwe_li = upsilon_only(s, curve, ErrorKind::DSPWE, MethodId::LI, periodic, grid_n);
    PemResult lf = pem_select(s, curve, ErrorKind::DSPWE, MethodId::LIPFIT, periodic, grid_n);
    b.dspwe_lipfit = lf.upsilon;
    b.pair = lf.chosen;
    return b;
}

}  // namespace lipfit
