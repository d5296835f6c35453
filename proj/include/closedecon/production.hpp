#pragma once

#include "closedecon/model.hpp"

namespace closedecon {

struct ProductionResult {
    Vec quantities;
    Vec wages;
    bool degenerate = false;
};

// CP(T,Y;p): revenue-maximizing production and the dual wages.
ProductionResult solve_production(const Economy& econ, const Vec& prices, double tol = 1e-9);

CheckReport check_production_space(const Economy& econ, const Vec& q, const Vec& w, const Vec& p, double tol = 1e-7);

// Societies share a good list; goods of society s are renamed "<good>@<s>".
Economy joint_frontier(const std::vector<Economy>& econs);

// Sums the per-society copies of each good back to the shared list.
Vec aggregate_goods(const Vec& joint, int goods_per_society);

}  // namespace closedecon
