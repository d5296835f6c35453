#pragma once

#include "closedecon/model.hpp"

namespace closedecon {

struct GoodLevel {
    int good = 0;
    double u_level = 0.0;  // max_i u_ij / bb_i over funded classes
    double t_level = 0.0;  // (wT)_j
    bool reentrant = false;
};

std::vector<GoodLevel> u_t_levels(const Economy& econ, const EquilibriumPoint& point, double activity = 1e-8);

enum class TatonStatus { Converged, Cycle, BudgetExhausted };

const char* to_string(TatonStatus s);

struct TatonState {
    int step = 0;
    EquilibriumPoint point;
    bool lp_degenerate = false;
    bool fisher_generic = true;
    bool verified = false;
    std::vector<GoodLevel> levels;
};

struct TatonnementTrace {
    std::vector<TatonState> states;
    TatonStatus status = TatonStatus::BudgetExhausted;
    int converged_step = -1;
    int cycle_period = 0;
    int cycle_first = -1;
};

struct TatonnementOptions {
    int max_iters = 1000;
    double lp_tol = 1e-9;
    double verify_tol = 1e-7;
    double mbb_tol = 1e-6;
    double quantum = 1e-6;
};

// State 0 is p0 with CP(p0); state n has (q_n, w_n) = CP(p_{n-1}) and (p_n, X_n) from the Fisher market.
TatonnementTrace run_tatonnement(const Economy& econ, const Vec& p0, const TatonnementOptions& opts = {});

}  // namespace closedecon
