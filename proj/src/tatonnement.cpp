#include "closedecon/tatonnement.hpp"

#include "closedecon/equilibrium.hpp"
#include "closedecon/fisher.hpp"
#include "closedecon/production.hpp"

#include <cmath>
#include <map>

namespace closedecon {

const char* to_string(TatonStatus s) {
    switch (s) {
        case TatonStatus::Converged: return "converged";
        case TatonStatus::Cycle: return "cycle";
        case TatonStatus::BudgetExhausted: return "budget_exhausted";
    }
    return "?";
}

std::vector<GoodLevel> u_t_levels(const Economy& econ, const EquilibriumPoint& point, double activity) {
    std::vector<GoodLevel> out;
    const Vec wt = econ.technology.transpose() * point.wages;
    Vec bb = point.bang_per_buck;
    if (bb.size() != econ.m() || bb.isZero(0.0))
        bb = compute_bang_per_buck(econ.utility, point.prices, point.wages.cwiseProduct(econ.supply));
    for (int j = 0; j < econ.n(); ++j) {
        if (point.quantities(j) > activity) continue;
        GoodLevel g;
        g.good = j;
        g.t_level = wt(j);
        for (int i = 0; i < econ.m(); ++i)
            if (point.wages(i) * econ.supply(i) > 0 && bb(i) > 0) g.u_level = std::max(g.u_level, econ.utility(i, j) / bb(i));
        g.reentrant = g.u_level > g.t_level * (1.0 + 1e-9);
        out.push_back(g);
    }
    return out;
}

namespace {

struct Step {
    EquilibriumPoint point;
    bool degenerate = false;
    bool generic = true;
};

// CP at `p`, then the Fisher market on what was produced; result scaled to revenue one.
Step advance(const Economy& econ, const Vec& p, const TatonnementOptions& o, const Vec* keep_prices) {
    const ProductionResult prod = solve_production(econ, p, o.lp_tol);
    FisherInstance inst{prod.wages.cwiseProduct(econ.supply), prod.quantities, econ.utility};
    FisherOptions fo;
    fo.mbb_tol = o.mbb_tol;
    const FisherSolution fs = solve_fisher(inst, fo);
    Step s;
    s.point = make_point(keep_prices ? *keep_prices : price_unproduced(inst, fs), prod.quantities, prod.wages, fs.allocation);
    const double rev = s.point.prices.dot(s.point.quantities);
    if (rev > 0) {
        s.point.prices /= rev;
        s.point.wages /= rev;
    }
    refresh_bang_per_buck(econ, s.point);
    s.degenerate = prod.degenerate;
    s.generic = fs.generic;
    return s;
}

std::vector<long long> key_of(const EquilibriumPoint& e, double quantum) {
    std::vector<long long> k;
    for (const Vec* v : {&e.prices, &e.quantities, &e.wages})
        for (int t = 0; t < v->size(); ++t) k.push_back(std::llround((*v)(t) / quantum));
    return k;
}

}  // namespace

TatonnementTrace run_tatonnement(const Economy& econ, const Vec& p0, const TatonnementOptions& o) {
    if (p0.size() != econ.n() || !p0.allFinite() || p0.minCoeff() < 0 || !(p0.maxCoeff() > 0))
        throw Error(ErrorCode::UsageError, "p0 must be a non-negative, non-zero price vector");
    TatonnementTrace tr;
    std::map<std::vector<long long>, int> seen;

    auto push = [&](int step, const Step& s) {
        TatonState st;
        st.step = step;
        st.point = s.point;
        st.lp_degenerate = s.degenerate;
        st.fisher_generic = s.generic;
        st.verified = verify_sm(econ, s.point, o.verify_tol).ok();
        st.levels = u_t_levels(econ, s.point);
        tr.states.push_back(std::move(st));
    };

    Step s = advance(econ, p0, o, &p0);
    push(0, s);
    for (int step = 0;; ++step) {
        const TatonState& cur = tr.states.back();
        if (cur.verified) {
            tr.status = TatonStatus::Converged;
            tr.converged_step = step;
            return tr;
        }
        auto key = key_of(cur.point, o.quantum);
        auto it = seen.find(key);
        if (it != seen.end()) {
            tr.status = TatonStatus::Cycle;
            tr.cycle_first = it->second;
            tr.cycle_period = step - it->second;
            return tr;
        }
        seen.emplace(std::move(key), step);
        if (step >= o.max_iters) break;
        s = advance(econ, cur.point.prices, o, nullptr);
        push(step + 1, s);
    }
    tr.status = TatonStatus::BudgetExhausted;
    return tr;
}

}  // namespace closedecon
