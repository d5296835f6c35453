#pragma once

#include "closedecon/model.hpp"

namespace closedecon {

// maximize c.x  s.t.  A x <= b, x >= 0
struct LpProblem {
    Vec objective;
    Mat constraint_matrix;
    Vec rhs;
};

enum class LpStatus { Optimal, Unbounded, Infeasible };

const char* to_string(LpStatus s);

struct LpSolution {
    Vec primal;
    Vec dual;
    double objective_value = 0.0;
    LpStatus status = LpStatus::Infeasible;
    bool degenerate = false;
    int iterations = 0;
};

// Dense two-phase tableau simplex with Bland's rule.
LpSolution solve_lp(const LpProblem& problem, double tol = 1e-9);

}  // namespace closedecon
