#include "lipfit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "lipfit/fit.hpp"

namespace lipfit {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_num(const std::string& cell, std::size_t line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || p != cell.data() + cell.size() || cell.empty())
        throw input_error("line " + std::to_string(line) + ": '" + cell + "' is not a number");
    require_finite(v, "CSV value");
    return v;
}

}  // namespace

std::string fmt_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

SampleTable read_sample_table(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(is, line)) {
        ++lineno;
        if (!trim(line).empty()) {
            header = split(trim(line));
            break;
        }
    }
    if (header.size() < 2) throw input_error("missing header 'x,y' or 'x1,...,xd,y'");
    SampleTable t;
    t.dim = header.size() - 1;
    if (header.back() != "y") throw input_error("line " + std::to_string(lineno) + ": last column must be 'y'");
    if (t.dim == 1 && header[0] != "x")
        throw input_error("line " + std::to_string(lineno) + ": expected header 'x,y'");
    for (std::size_t j = 0; t.dim > 1 && j < t.dim; ++j)
        if (header[j] != "x" + std::to_string(j + 1))
            throw input_error("line " + std::to_string(lineno) + ": expected column x" + std::to_string(j + 1));
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(trim(line));
        if (cells.size() != header.size())
            throw input_error("line " + std::to_string(lineno) + ": expected " +
                              std::to_string(header.size()) + " fields");
        std::vector<double> x(t.dim);
        for (std::size_t j = 0; j < t.dim; ++j) x[j] = parse_num(cells[j], lineno);
        if (t.dim == 1 && !t.xs.empty()) {
            if (x[0] == t.xs.back()[0])
                throw input_error("line " + std::to_string(lineno) + ": duplicate x");
            if (x[0] < t.xs.back()[0])
                throw input_error("line " + std::to_string(lineno) + ": x not increasing");
        }
        t.xs.push_back(std::move(x));
        t.ys.push_back(parse_num(cells.back(), lineno));
    }
    if (t.ys.empty()) throw input_error("no sample records");
    return t;
}

SampleSet to_sample_set(const SampleTable& t, std::optional<Interval1D> domain) {
    if (t.dim == 1) {
        std::vector<double> xs;
        for (const auto& r : t.xs) xs.push_back(r[0]);
        Interval1D dom = domain ? *domain : Interval1D(xs.front(), xs.back());
        return SampleSet::make_1d(xs, t.ys, dom);
    }
    std::vector<double> lo(t.dim, t.xs[0][0]), hi(t.dim);
    for (std::size_t j = 0; j < t.dim; ++j) {
        lo[j] = hi[j] = t.xs[0][j];
        for (const auto& r : t.xs) {
            lo[j] = std::min(lo[j], r[j]);
            hi[j] = std::max(hi[j], r[j]);
        }
    }
    std::vector<Point> pts;
    for (const auto& r : t.xs) pts.emplace_back(r);
    return SampleSet(std::move(pts), t.ys, lo, hi);
}

void write_samples_csv(const SampleSet& s, std::ostream& os) {
    if (s.dim() == 1) {
        os << "x,y\n";
    } else {
        for (std::size_t j = 0; j < s.dim(); ++j) os << 'x' << j + 1 << ',';
        os << "y\n";
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (double c : s.xs()[i].coords) os << fmt_double(c) << ',';
        os << fmt_double(s.y(i)) << '\n';
    }
}

void write_xy_csv(const std::vector<double>& xs, const std::vector<double>& ys, std::ostream& os) {
    os << "x,y\n";
    for (std::size_t i = 0; i < xs.size(); ++i) os << fmt_double(xs[i]) << ',' << fmt_double(ys[i]) << '\n';
}

std::vector<double> parse_m_grid(const std::string& spec) {
    auto num = [&](const std::string& cell) {
        double v = 0.0;
        auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || p != cell.data() + cell.size() || cell.empty())
            throw input_error("m-grid: '" + cell + "' is not a number");
        require_finite(v, "m-grid value");
        return v;
    };
    std::vector<double> out;
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        for (const auto& c : split(spec)) out.push_back(num(c));
        return out;
    }
    std::string kind = spec.substr(0, colon);
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(colon + 1));
    std::string cell;
    while (std::getline(ss, cell, ':')) parts.push_back(trim(cell));
    if (parts.size() != 3) throw input_error("m-grid: expected kind:lo:hi:n");
    const double lo = num(parts[0]), hi = num(parts[1]);
    const double nd = num(parts[2]);
    if (nd < 2 || nd != static_cast<double>(static_cast<long>(nd)))
        throw input_error("m-grid: n must be an integer >= 2");
    const auto n = static_cast<std::size_t>(nd);
    if (!(lo < hi)) throw input_error("m-grid: need lo < hi");
    if (kind == "lin") return uniform_grid(lo, hi, n);
    if (kind == "geom") {
        if (!(lo > 0.0)) throw input_error("m-grid: geom needs lo > 0");
        for (std::size_t i = 0; i < n; ++i)
            out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1)));
        out.back() = hi;
        return out;
    }
    throw input_error("m-grid: unknown kind '" + kind + "'");
}

std::vector<FitCurve> read_external_fits(std::istream& is, Interval1D domain) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::map<long, std::pair<std::vector<double>, std::vector<double>>> rows;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(trim(line));
        if (!header) {
            if (cells != std::vector<std::string>{"replicate", "x", "fit"})
                throw input_error("line " + std::to_string(lineno) + ": expected header 'replicate,x,fit'");
            header = true;
            continue;
        }
        if (cells.size() != 3)
            throw input_error("line " + std::to_string(lineno) + ": expected 3 fields");
        double r = parse_num(cells[0], lineno);
        if (r < 0 || r != static_cast<double>(static_cast<long>(r)))
            throw input_error("line " + std::to_string(lineno) + ": bad replicate index");
        auto& [xs, vs] = rows[static_cast<long>(r)];
        double x = parse_num(cells[1], lineno);
        if (!xs.empty() && x <= xs.back())
            throw input_error("line " + std::to_string(lineno) + ": x not increasing within replicate");
        xs.push_back(x);
        vs.push_back(parse_num(cells[2], lineno));
    }
    if (!header) throw input_error("missing header 'replicate,x,fit'");
    std::vector<FitCurve> out;
    long expect = 0;
    for (auto& [r, xv] : rows) {
        if (r != expect++) throw input_error("replicate indices must be 0..R-1 without gaps");
        out.push_back(external_fit(xv.first, xv.second, domain));
    }
    return out;
}

}  // namespace lipfit
