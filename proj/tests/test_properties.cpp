#include "closedecon/ccg.hpp"
#include "closedecon/fisher.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace closedecon;
using support::maxdiff;

namespace {

const std::vector<std::string> kFixtures{"soap.json", "soap_tprime.json", "soap_y21.json", "soap_y32.json",
                                         "boutique.json", "boutique_yb.json", "two_by_two.json", "breakpoint.json",
                                         "society_a.json", "society_b.json", "taton_converges.json", "two_components.json"};

std::vector<std::pair<Economy, EquilibriumPoint>> verified_points(int randoms) {
    std::vector<std::pair<Economy, EquilibriumPoint>> out;
    for (const auto& f : kFixtures) {
        const Economy e = support::economy(f);
        const SolveResult r = solve_equilibrium(e);
        if (r.found) out.emplace_back(e, r.point);
    }
    std::mt19937 rng(11);
    int got = 0;
    while (got < randoms) {
        const Economy e = oracles::random_economy(rng, 3, 3);
        const SolveResult r = solve_equilibrium(e);
        if (!r.found) continue;
        out.emplace_back(e, r.point);
        ++got;
    }
    return out;
}

}  // namespace

TEST_CASE("fisher objective against the Eisenberg-Gale bounds") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.05, 1.0), w(0.5, 5.0);
    std::bernoulli_distribution zero(0.3);
    for (int trial = 0; trial < 200; ++trial) {
        FisherInstance inst{Vec(3), Vec(3), Mat(3, 3)};
        for (int i = 0; i < 3; ++i) {
            inst.budgets(i) = w(rng);
            inst.quantities(i) = w(rng);
            for (int j = 0; j < 3; ++j) inst.utility(i, j) = zero(rng) ? 0.0 : u(rng);
        }
        for (int i = 0; i < 3; ++i)
            if (inst.utility.row(i).maxCoeff() == 0) inst.utility(i, i) = u(rng);
        for (int j = 0; j < 3; ++j)
            if (inst.utility.col(j).maxCoeff() == 0) inst.utility(j, j) = u(rng);
        const FisherSolution s = solve_fisher(inst);
        CHECK(check_fisher(inst, s.prices, s.allocation).ok());
        const double primal = oracles::eg_primal(inst.budgets, inst.utility, s.allocation);
        const double dual = oracles::eg_dual(inst.budgets, inst.quantities, inst.utility, s.prices);
        const double fw = oracles::eg_frank_wolfe(inst.budgets, inst.quantities, inst.utility, 400);
        CAPTURE(trial);
        CHECK(dual - primal <= 1e-6);
        CHECK(dual - primal >= -1e-9);
        CHECK(fw <= dual + 1e-9);
        CHECK(primal - fw >= -1e-6);
    }
}

TEST_CASE("money is conserved at verified points") {
    for (const auto& [e, pt] : verified_points(100)) {
        CHECK(verify_sm(e, pt).ok());
        const double pq = pt.prices.dot(pt.quantities), wy = pt.wages.dot(e.supply);
        CHECK(std::abs(pq - wy) <= 1e-6 * std::max(1.0, std::abs(pq)));
        CHECK(std::abs((pt.allocation * pt.prices).sum() - pq) <= 1e-6 * std::max(1.0, pq));
    }
}

TEST_CASE("utility row scaling leaves prices and allocations alone") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> s(0.2, 5.0);
    for (const auto& [e, pt] : verified_points(30)) {
        Economy scaled = e;
        for (int i = 0; i < e.m(); ++i) scaled.utility.row(i) *= s(rng);
        const SolveResult r = solve_equilibrium(scaled);
        REQUIRE(r.found);
        CHECK(verify_sm(scaled, pt).ok());
        // a unique equilibrium must reappear; several equilibria only need the same verdicts
        if (solve_equilibrium(e).multiplicity == 1 && r.multiplicity == 1) {
            CHECK(maxdiff(r.point.prices, pt.prices) < 1e-6);
            CHECK(maxdiff(r.point.allocation, pt.allocation) < 1e-6);
        }
    }
}

TEST_CASE("SM verifier and AD checker agree") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> s(0.5, 1.5);
    int disagreements = 0, perturbed_rejected = 0, total = 0;
    for (const auto& [e, pt] : verified_points(100)) {
        disagreements += verify_sm(e, pt).ok() != check_ad_conditions(e, pt).all();
        EquilibriumPoint bad = pt;
        for (int j = 0; j < bad.prices.size(); ++j) bad.prices(j) *= s(rng);
        for (int i = 0; i < bad.allocation.rows(); ++i)
            for (int j = 0; j < bad.allocation.cols(); ++j) bad.allocation(i, j) *= s(rng);
        const bool sm = verify_sm(e, bad).ok(), ad = check_ad_conditions(e, bad).all();
        disagreements += sm != ad;
        perturbed_rejected += !sm;
        ++total;
    }
    CHECK(disagreements == 0);
    CHECK(perturbed_rejected == total);
}

TEST_CASE("single-component fixtures survive a round trip") {
    int tried = 0;
    for (const auto& f : kFixtures) {
        const Economy e = support::economy(f);
        const SolveResult r = solve_equilibrium(e);
        if (!r.found || r.data.components != 1 || !r.generic) continue;
        const auto rec = reconstruct_from_forest(e, r.data);
        CAPTURE(f);
        REQUIRE(rec.status == ReconstructStatus::Feasible);
        CHECK(verify_sm(e, rec.point).ok());
        CHECK(same_structure(extract_combinatorics(e, rec.point), r.data));
        CHECK(maxdiff(rec.point.quantities, r.point.quantities) < 1e-7);
        ++tried;
    }
    CHECK(tried >= 3);
}
