#include "closedecon/lp.hpp"

#include <cmath>
#include <limits>

namespace closedecon {

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Unbounded: return "unbounded";
        case LpStatus::Infeasible: return "infeasible";
    }
    return "?";
}

namespace {

constexpr double kPivotTol = 1e-12;

struct Tableau {
    // rows 0..r-1 constraints, row r objective (reduced costs, last column = -z)
    Mat t;
    std::vector<int> basis;
    int cols = 0;  // variable count, rhs sits at column `cols`

    void pivot(int row, int col) {
        t.row(row) /= t(row, col);
        for (int i = 0; i < t.rows(); ++i) {
            if (i == row) continue;
            const double f = t(i, col);
            if (f != 0.0) t.row(i) -= f * t.row(row);
        }
        basis[row] = col;
    }

    // Returns false on unboundedness. `allowed` masks columns that may enter.
    bool optimize(const std::vector<bool>& allowed, double tol, int& iters, int max_iters) {
        const int r = static_cast<int>(basis.size());
        for (;;) {
            int enter = -1;
            for (int j = 0; j < cols; ++j)
                if (allowed[j] && t(r, j) > tol) {
                    enter = j;
                    break;
                }
            if (enter < 0) return true;
            int leave = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < r; ++i) {
                const double a = t(i, enter);
                if (a <= kPivotTol) continue;
                const double ratio = t(i, cols) / a;
                const double slack = 1e-12 * (1.0 + std::abs(ratio));
                if (ratio < best - slack || (std::abs(ratio - best) <= slack && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
            if (++iters > max_iters) throw Error(ErrorCode::IterationLimit, "simplex iteration limit reached");
        }
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& prob, double tol) {
    const int r = static_cast<int>(prob.constraint_matrix.rows());
    const int n = static_cast<int>(prob.constraint_matrix.cols());
    if (prob.objective.size() != n || prob.rhs.size() != r)
        throw Error(ErrorCode::DimensionMismatch, "LP dimensions disagree");
    if (!prob.rhs.allFinite() || !prob.objective.allFinite() || !prob.constraint_matrix.allFinite())
        throw Error(ErrorCode::DimensionMismatch, "LP data must be finite");

    std::vector<int> art_row;
    for (int i = 0; i < r; ++i)
        if (prob.rhs(i) < 0) art_row.push_back(i);
    const int na = static_cast<int>(art_row.size());
    const int slack0 = n, art0 = n + r;

    Tableau tb;
    tb.cols = n + r + na;
    tb.t = Mat::Zero(r + 1, tb.cols + 1);
    tb.basis.assign(r, -1);
    int a = 0;
    for (int i = 0; i < r; ++i) {
        const double sgn = prob.rhs(i) < 0 ? -1.0 : 1.0;
        tb.t.block(i, 0, 1, n) = sgn * prob.constraint_matrix.row(i);
        tb.t(i, slack0 + i) = sgn;
        tb.t(i, tb.cols) = sgn * prob.rhs(i);
        if (sgn < 0) {
            tb.t(i, art0 + a) = 1.0;
            tb.basis[i] = art0 + a;
            ++a;
        } else {
            tb.basis[i] = slack0 + i;
        }
    }

    LpSolution sol;
    const int max_iters = 5000 + 50 * (r + tb.cols);
    std::vector<bool> allowed(tb.cols, true);

    if (na > 0) {
        // phase 1: maximize -sum(artificials)
        tb.t.row(r).setZero();
        for (int i = 0; i < r; ++i)
            if (tb.basis[i] >= art0) tb.t.row(r) += tb.t.row(i);
        for (int k = 0; k < na; ++k) tb.t(r, art0 + k) = 0.0;
        tb.optimize(allowed, tol, sol.iterations, max_iters);
        if (tb.t(r, tb.cols) > tol * (1.0 + prob.rhs.cwiseAbs().maxCoeff())) {
            sol.status = LpStatus::Infeasible;
            sol.primal = Vec::Zero(n);
            sol.dual = Vec::Zero(r);
            return sol;
        }
        // drive remaining artificials out of the basis where possible
        for (int i = 0; i < r; ++i) {
            if (tb.basis[i] < art0) continue;
            for (int j = 0; j < art0; ++j)
                if (std::abs(tb.t(i, j)) > 1e-9) {
                    tb.pivot(i, j);
                    break;
                }
        }
        for (int k = 0; k < na; ++k) allowed[art0 + k] = false;
    }

    // phase 2 objective row: d_j = c_j - c_B B^-1 A_j
    tb.t.row(r).setZero();
    for (int j = 0; j < n; ++j) tb.t(r, j) = prob.objective(j);
    for (int i = 0; i < r; ++i) {
        const int b = tb.basis[i];
        const double cb = b < n ? prob.objective(b) : 0.0;
        if (cb != 0.0) tb.t.row(r) -= cb * tb.t.row(i);
    }
    if (!tb.optimize(allowed, tol, sol.iterations, max_iters)) {
        sol.status = LpStatus::Unbounded;
        sol.primal = Vec::Zero(n);
        sol.dual = Vec::Zero(r);
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.primal = Vec::Zero(n);
    std::vector<bool> is_basic(tb.cols, false);
    for (int i = 0; i < r; ++i) {
        const int b = tb.basis[i];
        is_basic[b] = true;
        const double v = tb.t(i, tb.cols);
        if (b < n) sol.primal(b) = v < 0 && v > -tol ? 0.0 : v;
        if (std::abs(v) <= tol) sol.degenerate = true;
    }
    sol.dual = Vec::Zero(r);
    for (int i = 0; i < r; ++i) {
        const double y = -tb.t(r, slack0 + i);
        sol.dual(i) = std::abs(y) <= tol ? 0.0 : y;
    }
    for (int j = 0; j < art0; ++j)
        if (!is_basic[j] && std::abs(tb.t(r, j)) <= tol) sol.degenerate = true;
    sol.objective_value = prob.objective.dot(sol.primal);
    return sol;
}

}  // namespace closedecon
