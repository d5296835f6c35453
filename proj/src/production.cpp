#include "closedecon/production.hpp"

#include "closedecon/lp.hpp"

#include <sstream>

namespace closedecon {

ProductionResult solve_production(const Economy& econ, const Vec& prices, double tol) {
    if (prices.size() != econ.n()) throw Error(ErrorCode::DimensionMismatch, "price vector length differs from good count");
    if (!prices.allFinite() || prices.minCoeff() < 0) throw Error(ErrorCode::DimensionMismatch, "prices must be finite and non-negative");
    LpProblem lp{prices, econ.technology, econ.supply};
    LpSolution s = solve_lp(lp, tol);
    if (s.status != LpStatus::Optimal)
        throw Error(ErrorCode::NumericFailure, std::string("production LP is ") + to_string(s.status));
    return {s.primal, s.dual, s.degenerate};
}

CheckReport check_production_space(const Economy& econ, const Vec& q, const Vec& w, const Vec& p, double tol) {
    CheckReport r;
    if (q.size() != econ.n() || p.size() != econ.n() || w.size() != econ.m()) {
        r.add("dimension mismatch");
        return r;
    }
    const Vec tq = econ.technology * q;
    const Vec wt = econ.technology.transpose() * w;
    for (int i = 0; i < econ.m(); ++i) {
        if (tq(i) > econ.supply(i) + tol * std::max(1.0, econ.supply(i))) {
            std::ostringstream os;
            os << "labor row " << i + 1 << " over-used: (Tq)=" << tq(i) << " > Y=" << econ.supply(i);
            r.add(os.str());
        }
        if (w(i) < -tol) r.add("negative wage for class " + std::to_string(i + 1));
    }
    for (int j = 0; j < econ.n(); ++j) {
        if (q(j) < -tol) r.add("negative quantity for good " + std::to_string(j + 1));
        if (q(j) * (p(j) - wt(j)) < -tol * std::max(1.0, std::abs(q(j)))) {
            std::ostringstream os;
            os << "produced good " << j + 1 << " is unprofitable: p=" << p(j) << " < (wT)=" << wt(j);
            r.add(os.str());
        }
    }
    return r;
}

Economy joint_frontier(const std::vector<Economy>& econs) {
    if (econs.empty()) throw Error(ErrorCode::DimensionMismatch, "no economies to join");
    if (econs.size() == 1) return econs.front();
    const auto& goods = econs.front().good_names;
    const int n = econs.front().n();
    int m = 0;
    for (const auto& e : econs) {
        if (e.good_names != goods) throw Error(ErrorCode::GoodListMismatch, "societies do not share the same good list");
        m += e.m();
    }
    const int s = static_cast<int>(econs.size());
    Economy j;
    j.supply = Vec::Zero(m);
    j.technology = Mat::Zero(m, n * s);
    j.utility = Mat::Zero(m, n * s);
    j.true_utility = Mat::Zero(m, n * s);
    for (int k = 0; k < s; ++k)
        for (const auto& g : goods) j.good_names.push_back(g + "@" + std::to_string(k + 1));
    int row = 0;
    for (int k = 0; k < s; ++k) {
        const auto& e = econs[k];
        j.supply.segment(row, e.m()) = e.supply;
        j.technology.block(row, k * n, e.m(), n) = e.technology;
        // consumers value every society's copy of a good alike
        for (int c = 0; c < s; ++c) {
            j.utility.block(row, c * n, e.m(), n) = e.utility;
            j.true_utility.block(row, c * n, e.m(), n) = e.true_utility.size() ? e.true_utility : e.utility;
        }
        for (const auto& name : e.class_names) j.class_names.push_back(name + "@" + std::to_string(k + 1));
        row += e.m();
    }
    return validate_economy(std::move(j));
}

Vec aggregate_goods(const Vec& joint, int goods_per_society) {
    Vec out = Vec::Zero(goods_per_society);
    for (int k = 0; k < joint.size(); ++k) out(k % goods_per_society) += joint(k);
    return out;
}

}  // namespace closedecon
