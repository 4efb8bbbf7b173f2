#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lipfit/core.hpp"

namespace lipfit {

// Raw rows of a sample CSV: header "x,y" or "x1,...,xd,y".
struct SampleTable {
    std::size_t dim = 1;
    std::vector<std::vector<double>> xs;
    std::vector<double> ys;
};

// Errors carry the 1-based line number of the offending record.
SampleTable read_sample_table(std::istream& is);

// 1-d tables must be strictly increasing in x. The domain defaults to the
// data span; with d > 1 the bounding box of the data is used.
SampleSet to_sample_set(const SampleTable& t, std::optional<Interval1D> domain = std::nullopt);

void write_samples_csv(const SampleSet& s, std::ostream& os);
void write_xy_csv(const std::vector<double>& xs, const std::vector<double>& ys, std::ostream& os);

// "replicate,x,fit" records; one curve per replicate index 0..R-1.
std::vector<FitCurve> read_external_fits(std::istream& is, Interval1D domain);

// m-grid spec: comma list "0,0.5,1", "lin:lo:hi:n" or "geom:lo:hi:n" (lo > 0).
std::vector<double> parse_m_grid(const std::string& spec);

// Shortest decimal form that round-trips.
std::string fmt_double(double v);

}  // namespace lipfit
