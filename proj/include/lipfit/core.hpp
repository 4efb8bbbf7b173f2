#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lipfit {

// Error categories. The CLI maps these onto exit codes.
struct input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct parameter_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct Point {
    std::vector<double> coords;

    Point() = default;
    Point(double x) : coords{x} {}  // NOLINT(google-explicit-constructor)
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
};

double distance(const Point& p, const Point& q);

struct Interval1D {
    double a = 0.0;
    double b = 1.0;

    Interval1D() = default;
    Interval1D(double lo, double hi);

    double length() const { return b - a; }
    bool contains(double x) const { return x >= a && x <= b; }
};

// Observed points with values. For d = 1 the xs are strictly increasing and
// lie in the declared interval; for d > 1 a bounding box is kept instead.
class SampleSet {
public:
    SampleSet(std::vector<Point> xs, std::vector<double> ys, Interval1D domain);
    SampleSet(std::vector<Point> xs, std::vector<double> ys, std::vector<double> box_lo,
              std::vector<double> box_hi);

    static SampleSet make_1d(const std::vector<double>& xs, std::vector<double> ys,
                             Interval1D domain);

    std::size_t size() const { return ys_.size(); }
    std::size_t dim() const { return d_; }
    const std::vector<Point>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    double x(std::size_t i) const { return xs_[i].coords[0]; }
    double y(std::size_t i) const { return ys_[i]; }
    std::vector<double> xs_1d() const;

    bool has_interval() const { return domain_.has_value(); }
    const Interval1D& interval() const;
    const std::vector<double>& box_lo() const { return box_lo_; }
    const std::vector<double>& box_hi() const { return box_hi_; }

private:
    void validate_common();

    std::vector<Point> xs_;
    std::vector<double> ys_;
    std::size_t d_ = 1;
    std::optional<Interval1D> domain_;
    std::vector<double> box_lo_, box_hi_;
};

class PiecewiseLinearFn {
public:
    PiecewiseLinearFn(std::vector<double> knots, std::vector<double> values);

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }
    double lo() const { return knots_.front(); }
    double hi() const { return knots_.back(); }
    // Max adjacent slope magnitude.
    double lip() const;

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

double eval_pl(const PiecewiseLinearFn& f, double x);

enum class MethodId { AVG, NN, PNN, LI, PLI, LIPFIT, PLIPFIT, EXTERNAL };

std::string to_string(MethodId m);
MethodId method_from_string(const std::string& s);
bool is_periodic_method(MethodId m);

struct FitSegment {
    double lo;
    double hi;
    PiecewiseLinearFn fn;
};

// A 1-d fitted function. Segments tile the domain and a point shared by two
// segments belongs to the left one. Pinned sample values take precedence.
class FitCurve {
public:
    FitCurve(Interval1D domain, std::vector<FitSegment> segments,
             std::vector<std::pair<double, double>> pinned, MethodId method, bool periodic);

    const Interval1D& domain() const { return domain_; }
    const std::vector<FitSegment>& segments() const { return segments_; }
    const std::vector<std::pair<double, double>>& pinned() const { return pinned_; }
    MethodId method() const { return method_; }
    bool periodic() const { return periodic_; }

private:
    Interval1D domain_;
    std::vector<FitSegment> segments_;
    std::vector<std::pair<double, double>> pinned_;
    MethodId method_;
    bool periodic_;
};

double eval_fit(const FitCurve& c, double x);
std::vector<double> eval_fit(const FitCurve& c, const std::vector<double>& xs);

struct LBBDPair {
    double m = 0.0;
    double sigma = 0.0;

    LBBDPair() = default;
    LBBDPair(double m_, double sigma_);
};

struct LipResult {
    double value = 0.0;
    bool degenerate = false;
};

LipResult lip_of_samples(const SampleSet& s);

double diam_of(const std::vector<double>& values);

// Uniform grid of n points on [a,b], endpoints included.
std::vector<double> uniform_grid(double a, double b, std::size_t n);

void require_finite(double v, const char* what);

}  // namespace lipfit
