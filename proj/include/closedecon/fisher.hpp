#pragma once

#include "closedecon/model.hpp"

namespace closedecon {

struct FisherInstance {
    Vec budgets;     // W_i = w_i Y_i
    Vec quantities;  // q
    Mat utility;     // U
};

struct FisherSolution {
    Vec prices;  // zero for goods with q_j = 0 (see price_unproduced)
    Mat allocation;
    Vec bang_per_buck;
    std::vector<Edge> mbb_graph;
    bool generic = true;   // MBB graph over funded buyers is acyclic
    bool snapped = false;  // exact tree solve succeeded
    long rounds = 0;
};

struct FisherOptions {
    double mbb_tol = 1e-6;
    double bid_tol = 1e-10;
    long max_rounds = 1000000;
    int snap_every = 16;
};

FisherSolution solve_fisher(const FisherInstance& inst, const FisherOptions& opts);
FisherSolution solve_fisher(const FisherInstance& inst, double tol = 1e-6);

CheckReport check_fisher(const FisherInstance& inst, const Vec& prices, const Mat& allocation, double tol = 1e-7);

// Full price vector: market prices for produced goods, max_i u_ij / bb_i for the rest.
Vec price_unproduced(const FisherInstance& inst, const FisherSolution& sol);

struct BangPerBuck {
    double value = 0.0;
    std::vector<int> argmax;
};

BangPerBuck bang_per_buck(const Vec& utility_row, const Vec& prices, double rel_tol = 1e-6);

// Edges (i,j) with u_ij/p_j within rel_tol of bb_i, funded buyers and goods in `goods` only.
std::vector<Edge> mbb_edges(const Mat& utility, const Vec& prices, const Vec& budgets, const std::vector<bool>& goods,
                            double rel_tol);

bool has_cycle(const std::vector<Edge>& edges, int m, int n);

}  // namespace closedecon
