#include "lipfit/lpsolve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "lipfit/core.hpp"

namespace lipfit {

void LinearProgram::add_row(const std::vector<double>& row, double rhs) {
    if (row.size() != num_vars) throw input_error("LP row length does not match num_vars");
    A.insert(A.end(), row.begin(), row.end());
    b.push_back(rhs);
}

const char* to_string(LPStatus s) {
    switch (s) {
        case LPStatus::optimal: return "optimal";
        case LPStatus::infeasible: return "infeasible";
        case LPStatus::unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr std::size_t kMaxIter = 200000;
constexpr std::size_t kDegenerateSwitch = 50;
constexpr std::size_t kRefreshEvery = 64;
constexpr double kHarrisTol = 1e-9;

// Primal LP min c'z, Az <= b is solved through its dual in standard form,
//   min b'l  s.t.  A'l = -c, l >= 0,
// with a two-phase tableau simplex. The optimal basis names the active rows
// of the primal, from which z is recovered by a direct solve.
enum class DualOutcome { optimal, dual_infeasible, dual_unbounded };

struct DualResult {
    DualOutcome outcome = DualOutcome::optimal;
    std::vector<std::size_t> basis_rows;
};

class Tableau {
public:
    Tableau(const LinearProgram& lp, double rc_tol) : rc_tol_(rc_tol) {
        p_ = lp.num_vars;
        q_ = lp.num_rows();
        width_ = q_ + p_ + 1;
        t_.assign(p_ * width_, 0.0);
        for (std::size_t j = 0; j < p_; ++j) {
            double rhs = -lp.c[j];
            double sgn = rhs < 0.0 ? -1.0 : 1.0;
            for (std::size_t i = 0; i < q_; ++i) cell(j, i) = sgn * lp.at(i, j);
            cell(j, q_ + j) = 1.0;
            cell(j, width_ - 1) = sgn * rhs;
        }
        basis_.resize(p_);
        for (std::size_t j = 0; j < p_; ++j) basis_[j] = q_ + j;
        cost_.assign(q_ + p_, 0.0);
        for (std::size_t i = 0; i < q_; ++i) cost_[i] = lp.b[i];
        active_.assign(p_, true);
    }

    DualResult run(double feas_tol) {
        DualResult res;
        // Phase 1: minimise the sum of artificials.
        std::vector<double> phase1(q_ + p_, 0.0);
        for (std::size_t j = 0; j < p_; ++j) phase1[q_ + j] = 1.0;
        if (iterate(phase1, q_ + p_) == DualOutcome::dual_unbounded)
            throw internal_error("phase 1 cannot be unbounded");
        double infeas = 0.0;
        for (std::size_t r = 0; r < p_; ++r)
            if (basis_[r] >= q_) infeas += rhs(r);
        double scale = 1.0;
        for (std::size_t r = 0; r < p_; ++r) scale = std::max(scale, std::abs(rhs(r)));
        if (infeas > feas_tol * scale) {
            res.outcome = DualOutcome::dual_infeasible;
            return res;
        }
        drive_out_artificials();
        // Phase 2 over the original columns only.
        DualOutcome o = iterate(cost_, q_);
        res.outcome = o;
        if (o == DualOutcome::optimal)
            for (std::size_t r = 0; r < p_; ++r)
                if (active_[r]) res.basis_rows.push_back(basis_[r]);
        return res;
    }

private:
    double& cell(std::size_t r, std::size_t k) { return t_[r * width_ + k]; }
    double rhs(std::size_t r) const { return t_[r * width_ + width_ - 1]; }

    std::vector<double> reduced_costs(const std::vector<double>& cost, std::size_t ncols) {
        std::vector<double> d(ncols);
        for (std::size_t k = 0; k < ncols; ++k) d[k] = cost[k];
        for (std::size_t r = 0; r < p_; ++r) {
            if (!active_[r]) continue;
            double cb = cost[basis_[r]];
            if (cb == 0.0) continue;
            const double* row = &t_[r * width_];
            for (std::size_t k = 0; k < ncols; ++k) d[k] -= cb * row[k];
        }
        return d;
    }

    DualOutcome iterate(const std::vector<double>& cost, std::size_t ncols) {
        std::vector<double> d = reduced_costs(cost, ncols);
        std::size_t degenerate_run = 0;
        bool fresh = true;
        for (std::size_t iter = 0; iter < kMaxIter; ++iter) {
            const bool bland = degenerate_run >= kDegenerateSwitch;
            std::size_t enter = ncols;
            double best = -rc_tol_;
            for (std::size_t k = 0; k < ncols; ++k) {
                if (d[k] < best) {
                    enter = k;
                    if (bland) break;
                    best = d[k];
                }
            }
            if (enter == ncols) {
                if (!fresh) {
                    d = reduced_costs(cost, ncols);
                    fresh = true;
                    continue;
                }
                return DualOutcome::optimal;
            }

            // Harris two-pass ratio test: relax the bound slightly, then take
            // the largest pivot element among the rows within it.
            std::size_t leave = p_;
            double bound = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < p_; ++r) {
                if (!active_[r]) continue;
                double a = t_[r * width_ + enter];
                if (a <= kPivotTol) continue;
                bound = std::min(bound, (std::max(rhs(r), 0.0) + kHarrisTol) / a);
            }
            double best_ratio = std::numeric_limits<double>::infinity();
            double best_a = 0.0;
            for (std::size_t r = 0; r < p_; ++r) {
                if (!active_[r]) continue;
                double a = t_[r * width_ + enter];
                if (a <= kPivotTol) continue;
                double ratio = std::max(rhs(r), 0.0) / a;
                if (ratio > bound) continue;
                if (a > best_a || (a == best_a && basis_[r] < basis_[leave])) {
                    best_a = a;
                    best_ratio = ratio;
                    leave = r;
                }
            }
            if (leave == p_) {
                if (!fresh) {
                    d = reduced_costs(cost, ncols);
                    fresh = true;
                    continue;
                }
                return DualOutcome::dual_unbounded;
            }
            degenerate_run = best_ratio <= 0.0 ? degenerate_run + 1 : 0;
            pivot(leave, enter);
            // Update the reduced costs with the pivot row.
            double f = d[enter];
            const double* prow = &t_[leave * width_];
            for (std::size_t k = 0; k < ncols; ++k) d[k] -= f * prow[k];
            d[enter] = 0.0;
            fresh = false;
            if ((iter + 1) % kRefreshEvery == 0) {
                d = reduced_costs(cost, ncols);
                fresh = true;
            }
        }
        throw internal_error("simplex iteration limit reached");
    }

    void pivot(std::size_t pr, std::size_t pc) {
        double* prow = &t_[pr * width_];
        const double inv = 1.0 / prow[pc];
        for (std::size_t k = 0; k < width_; ++k) prow[k] *= inv;
        prow[pc] = 1.0;
        for (std::size_t r = 0; r < p_; ++r) {
            if (r == pr || !active_[r]) continue;
            double* row = &t_[r * width_];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < width_; ++k) row[k] -= f * prow[k];
            row[pc] = 0.0;
        }
        basis_[pr] = pc;
    }

    void drive_out_artificials() {
        for (std::size_t r = 0; r < p_; ++r) {
            if (basis_[r] < q_) continue;
            std::size_t best = q_;
            double best_abs = 1e-9;
            for (std::size_t k = 0; k < q_; ++k) {
                double a = std::abs(t_[r * width_ + k]);
                if (a > best_abs) {
                    best_abs = a;
                    best = k;
                }
            }
            if (best < q_)
                pivot(r, best);
            else
                active_[r] = false;  // redundant equality row
        }
    }

    double rc_tol_;
    std::size_t p_ = 0, q_ = 0, width_ = 0;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
    std::vector<bool> active_;
};

std::vector<double> recover_primal(const LinearProgram& lp, const std::vector<std::size_t>& rows) {
    const std::size_t p = lp.num_vars;
    if (p == 0) return {};
    if (rows.empty()) return std::vector<double>(p, 0.0);
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < p; ++j)
            M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = lp.at(rows[r], j);
        rhs(static_cast<Eigen::Index>(r)) = lp.b[rows[r]];
    }
    Eigen::VectorXd z;
    if (rows.size() == p)
        z = M.fullPivLu().solve(rhs);
    else
        z = M.completeOrthogonalDecomposition().solve(rhs);
    return std::vector<double>(z.data(), z.data() + z.size());
}

LPSolution solve_impl(const LinearProgram& lp, double feas_tol, double opt_tol, bool allow_aux);

LPStatus classify_dual_infeasible(const LinearProgram& lp, double feas_tol, double opt_tol) {
    // Primal is unbounded if it is feasible at all: min s s.t. Az - s <= b, s >= 0.
    const std::size_t p = lp.num_vars;
    LinearProgram aux(p + 1);
    aux.c[p] = 1.0;
    std::vector<double> row(p + 1, 0.0);
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        for (std::size_t j = 0; j < p; ++j) row[j] = lp.at(i, j);
        row[p] = -1.0;
        aux.add_row(row, lp.b[i]);
    }
    std::fill(row.begin(), row.end(), 0.0);
    row[p] = -1.0;
    aux.add_row(row, 0.0);
    LPSolution s = solve_impl(aux, feas_tol, opt_tol, false);
    if (s.status != LPStatus::optimal) throw internal_error("feasibility subproblem failed");
    return s.objective <= feas_tol ? LPStatus::unbounded : LPStatus::infeasible;
}

LPSolution solve_impl(const LinearProgram& lp, double feas_tol, double opt_tol, bool allow_aux) {
    LPSolution sol;
    Tableau tab(lp, std::min(1e-11, opt_tol * 1e-3));
    DualResult dr = tab.run(feas_tol);
    if (dr.outcome == DualOutcome::dual_unbounded) {
        sol.status = LPStatus::infeasible;
        return sol;
    }
    if (dr.outcome == DualOutcome::dual_infeasible) {
        sol.status = allow_aux ? classify_dual_infeasible(lp, feas_tol, opt_tol)
                               : LPStatus::unbounded;
        return sol;
    }
    sol.status = LPStatus::optimal;
    sol.z = recover_primal(lp, dr.basis_rows);
    double obj = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) obj += lp.c[j] * sol.z[j];
    sol.objective = obj;
    return sol;
}

}  // namespace

LPSolution solve_lp(const LinearProgram& lp, double feas_tol, double opt_tol) {
    const std::size_t p = lp.num_vars;
    if (lp.c.size() != p) throw input_error("objective length does not match num_vars");
    if (lp.A.size() != lp.b.size() * p) throw input_error("constraint matrix has wrong size");
    for (double v : lp.c) require_finite(v, "objective coefficient");
    for (double v : lp.A) require_finite(v, "constraint coefficient");
    for (double v : lp.b) require_finite(v, "right-hand side");
    if (!(feas_tol > 0.0) || !(opt_tol > 0.0)) throw parameter_error("tolerances must be positive");
    // Equilibrate rows then columns to unit max-norm; z = diag(col) z'.
    LinearProgram sc = lp;
    const std::size_t q = lp.num_rows();
    for (std::size_t i = 0; i < q; ++i) {
        double mx = 0.0;
        for (std::size_t j = 0; j < p; ++j) mx = std::max(mx, std::abs(sc.at(i, j)));
        if (mx == 0.0) continue;
        for (std::size_t j = 0; j < p; ++j) sc.A[i * p + j] /= mx;
        sc.b[i] /= mx;
    }
    std::vector<double> col(p, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
        double mx = 0.0;
        for (std::size_t i = 0; i < q; ++i) mx = std::max(mx, std::abs(sc.at(i, j)));
        if (mx == 0.0) continue;
        col[j] = 1.0 / mx;
        for (std::size_t i = 0; i < q; ++i) sc.A[i * p + j] *= col[j];
        sc.c[j] *= col[j];
    }
    LPSolution sol = solve_impl(sc, feas_tol, opt_tol, true);
    if (sol.status != LPStatus::optimal) return sol;
    double obj = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        sol.z[j] *= col[j];
        obj += lp.c[j] * sol.z[j];
    }
    sol.objective = obj;
    return sol;
}

LinearProgram minmax_affine_to_lp(const std::vector<AffineExpr>& terms,
                                  const std::vector<AffineExpr>& extra) {
    if (terms.empty()) throw input_error("minmax_affine_to_lp needs at least one term");
    const std::size_t p = terms.front().coef.size();
    LinearProgram lp(p + 1);
    lp.c[p] = 1.0;
    std::vector<double> row(p + 1);
    for (const auto& t : terms) {
        if (t.coef.size() != p) throw input_error("affine term length mismatch");
        for (double sgn : {1.0, -1.0}) {
            for (std::size_t j = 0; j < p; ++j) row[j] = sgn * t.coef[j];
            row[p] = -1.0;
            lp.add_row(row, -sgn * t.constant);
        }
    }
    for (const auto& e : extra) {
        if (e.coef.size() != p) throw input_error("affine constraint length mismatch");
        for (std::size_t j = 0; j < p; ++j) row[j] = e.coef[j];
        row[p] = 0.0;
        lp.add_row(row, -e.constant);
    }
    return lp;
}

void write_lp_text(const LinearProgram& lp, std::ostream& os) {
    const auto prec = os.precision(17);
    os << "minimize";
    for (double v : lp.c) os << ' ' << v;
    os << '\n';
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        for (std::size_t j = 0; j < lp.num_vars; ++j) os << (j ? " " : "") << lp.at(i, j);
        os << " <= " << lp.b[i] << '\n';
    }
    os.precision(prec);
}

}  // namespace lipfit
