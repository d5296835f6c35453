#include "closedecon/tatonnement.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace closedecon;
using support::maxdiff;
using support::vec;

TEST_CASE("convergent three-class run") {
    const Economy e = support::economy("taton_converges.json");
    const auto tr = run_tatonnement(e, vec({0.7379, 0.9379, 0.3617}));
    REQUIRE(tr.status == TatonStatus::Converged);
    CHECK(tr.converged_step == 3);
    const auto& pt = tr.states.back().point;
    CHECK(maxdiff(pt.prices, vec({1.5099, 2.8636, 1.2273})) < 1e-3);
    CHECK(maxdiff(pt.quantities, vec({0.2631, 0.0526, 0.3684})) < 1e-3);
    CHECK(maxdiff(pt.wages / pt.wages.sum(), vec({0.086693, 0.3865, 0.52681})) < 1e-3);
    for (const auto& g : u_t_levels(e, pt)) CHECK_FALSE(g.reentrant);
}

TEST_CASE("two-state cycle") {
    const Economy e = support::economy("taton_cycle.json");
    const auto tr = run_tatonnement(e, Vec::Ones(3));
    REQUIRE(tr.status == TatonStatus::Cycle);
    CHECK(tr.cycle_period == 2);
    // printed wages are shares of the wage bill
    const auto near = [](const EquilibriumPoint& pt, const Vec& p, const Vec& q, const Vec& w) {
        return maxdiff(pt.prices, p) < 0.01 && maxdiff(pt.quantities, q) < 0.01 &&
               maxdiff(pt.wages / pt.wages.sum(), w) < 0.01;
    };
    const Vec pa = vec({0.11, 0.05, 0.14}), qa = vec({4.35, 9.78, 0}), wa = vec({0.52, 0.48, 0});
    const Vec pb = vec({0.04, 0.12, 0.05}), qb = vec({14.7, 0, 10.3}), wb = vec({0.12, 0, 0.88});
    bool a = false, b = false;
    for (size_t s = static_cast<size_t>(tr.cycle_first); s < tr.states.size(); ++s) {
        a = a || near(tr.states[s].point, pa, qa, wa);
        b = b || near(tr.states[s].point, pb, qb, wb);
    }
    CHECK(a);
    CHECK(b);
    // the state with good 3 idle re-activates it next step
    bool seen = false;
    for (const auto& st : tr.states) {
        if (st.point.quantities(2) > 1e-8) continue;
        for (const auto& g : st.levels)
            if (g.good == 2) {
                CHECK(g.reentrant);
                CHECK(g.u_level > g.t_level);
                seen = true;
            }
    }
    CHECK(seen);
}

TEST_CASE("budget and bad starts") {
    const Economy e = support::economy("taton_cycle.json");
    TatonnementOptions o;
    o.max_iters = 1;
    CHECK(run_tatonnement(e, Vec::Ones(3), o).status == TatonStatus::BudgetExhausted);
    CHECK_THROWS_AS(run_tatonnement(e, vec({1, -1, 1})), Error);
    CHECK_THROWS_AS(run_tatonnement(e, Vec::Zero(3)), Error);
    CHECK_THROWS_AS(run_tatonnement(e, Vec::Ones(2)), Error);
}

TEST_CASE("an equilibrium start is a fixed point") {
    const Economy e = support::economy("soap.json");
    const auto tr = run_tatonnement(e, vec({1.5, 2, 1}));
    CHECK(tr.status == TatonStatus::Converged);
    CHECK(tr.converged_step <= 1);
}
