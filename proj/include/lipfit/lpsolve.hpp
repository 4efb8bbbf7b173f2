#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace lipfit {

// min c'z subject to A z <= b, z free. A is stored row-major.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> c;
    std::vector<double> A;
    std::vector<double> b;

    LinearProgram() = default;
    explicit LinearProgram(std::size_t p) : num_vars(p), c(p, 0.0) {}

    std::size_t num_rows() const { return b.size(); }
    void add_row(const std::vector<double>& row, double rhs);
    double at(std::size_t i, std::size_t j) const { return A[i * num_vars + j]; }
};

enum class LPStatus { optimal, infeasible, unbounded };

const char* to_string(LPStatus s);

struct LPSolution {
    LPStatus status = LPStatus::infeasible;
    std::vector<double> z;
    double objective = 0.0;
};

LPSolution solve_lp(const LinearProgram& lp, double feas_tol = 1e-9, double opt_tol = 1e-8);

// coef'z + constant
struct AffineExpr {
    std::vector<double> coef;
    double constant = 0.0;
};

// Epigraph form of min_z max_k |term_k(z)| subject to extra_k(z) <= 0.
// The epigraph variable t is appended as the last variable.
LinearProgram minmax_affine_to_lp(const std::vector<AffineExpr>& terms,
                                  const std::vector<AffineExpr>& extra);

// Plain-text dump: objective row, then one "row <= rhs" line per constraint.
void write_lp_text(const LinearProgram& lp, std::ostream& os);

}  // namespace lipfit
