#pragma once

#include "closedecon/ccg.hpp"
#include "closedecon/equilibrium.hpp"
#include "closedecon/fisher.hpp"
#include "closedecon/model.hpp"

#include <cmath>
#include <random>

namespace oracles {

using closedecon::Mat;
using closedecon::Vec;

// Eisenberg-Gale objective sum_i W_i log(u_i . x_i).
inline double eg_primal(const Vec& W, const Mat& U, const Mat& X) {
    double f = 0;
    for (int i = 0; i < W.size(); ++i)
        if (W(i) > 0) f += W(i) * std::log(U.row(i).dot(X.row(i)));
    return f;
}

// Lagrangian dual g(p) = sum_j p_j q_j + sum_i (W_i log(W_i bb_i) - W_i); g(p) >= EG optimum for every p > 0.
inline double eg_dual(const Vec& W, const Vec& q, const Mat& U, const Vec& p) {
    double g = p.dot(q);
    for (int i = 0; i < W.size(); ++i) {
        if (W(i) <= 0) continue;
        double bb = 0;
        for (int j = 0; j < p.size(); ++j)
            if (q(j) > 0) bb = std::max(bb, U(i, j) / p(j));
        g += W(i) * std::log(W(i) * bb) - W(i);
    }
    return g;
}

// Frank-Wolfe on the EG program: each good is a scaled simplex over buyers. Returns a feasible lower bound.
inline double eg_frank_wolfe(const Vec& W, const Vec& q, const Mat& U, int iters) {
    const int m = static_cast<int>(W.size()), n = static_cast<int>(q.size());
    Mat X = Mat::Zero(m, n);
    for (int j = 0; j < n; ++j) X.col(j).setConstant(q(j) / m);
    double best = eg_primal(W, U, X);
    for (int k = 0; k < iters; ++k) {
        Vec util(m);
        for (int i = 0; i < m; ++i) util(i) = U.row(i).dot(X.row(i));
        Mat S = Mat::Zero(m, n);
        for (int j = 0; j < n; ++j) {
            int arg = 0;
            double g = -1;
            for (int i = 0; i < m; ++i) {
                const double gi = W(i) * U(i, j) / util(i);
                if (gi > g) g = gi, arg = i;
            }
            S(arg, j) = q(j);
        }
        // exact line search by bisection on the concave 1-d restriction
        const Mat D = S - X;
        double lo = 0, hi = 1;
        for (int t = 0; t < 60; ++t) {
            const double mid = 0.5 * (lo + hi);
            double d = 0;
            for (int i = 0; i < m; ++i) d += W(i) * U.row(i).dot(D.row(i)) / U.row(i).dot((X + mid * D).row(i));
            (d > 0 ? lo : hi) = mid;
        }
        X += lo * D;
        best = std::max(best, eg_primal(W, U, X));
    }
    return best;
}

inline closedecon::Economy random_economy(std::mt19937& rng, int m, int n) {
    std::uniform_real_distribution<double> u(0.1, 1.0), y(1.0, 10.0);
    std::bernoulli_distribution zero(0.25);
    closedecon::Economy e;
    e.supply = Vec(m);
    e.technology = Mat(m, n);
    e.utility = Mat(m, n);
    for (int i = 0; i < m; ++i) {
        e.supply(i) = y(rng);
        for (int j = 0; j < n; ++j) {
            e.technology(i, j) = zero(rng) ? 0.0 : u(rng);
            e.utility(i, j) = zero(rng) ? 0.0 : u(rng);
        }
    }
    for (int j = 0; j < n; ++j)
        if (e.technology.col(j).maxCoeff() == 0) e.technology(j % m, j) = u(rng);
    for (int i = 0; i < m; ++i)
        if (e.utility.row(i).maxCoeff() == 0) e.utility(i, i % n) = u(rng);
    for (int j = 0; j < n; ++j)
        if (e.utility.col(j).maxCoeff() == 0) e.utility(j % m, j) = u(rng);
    return closedecon::validate_economy(e);
}

}  // namespace oracles
