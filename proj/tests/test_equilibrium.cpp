#include "closedecon/equilibrium.hpp"
#include "closedecon/tatonnement.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace closedecon;
using support::mat;
using support::maxdiff;
using support::vec;

namespace {

CombinatorialData soap_forest() {
    CombinatorialData d;
    d.active_classes = {0, 1, 2};
    d.active_goods = {0, 1, 2};
    d.forest = {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}};
    return d;
}

EquilibriumPoint b1_point() { return load_point(support::fixture("two_components_point.json")); }

}  // namespace

TEST_CASE("soap truth point from its forest") {
    const Economy e = support::economy("soap.json");
    const auto r = reconstruct_from_forest(e, soap_forest());
    REQUIRE(r.status == ReconstructStatus::Feasible);
    CHECK(maxdiff(r.point.quantities, vec({10, 7.5, 8.125})) < 1e-12);
    CHECK(verify_sm(e, r.point).ok());
    const support::SoapOracle o(1.5, 2);
    CHECK(maxdiff(r.point.allocation.col(0), vec({o.x11, o.x21, 0})) < 1e-9);
    // prices in ratio alpha*beta/2 : beta : 1
    CHECK(r.point.prices(0) / r.point.prices(2) == doctest::Approx(1.5));
    CHECK(r.point.prices(1) / r.point.prices(2) == doctest::Approx(2));
    CHECK(extract_combinatorics(e, r.point).canonical() == soap_forest().canonical());
    CHECK(is_generic(e, r.point).generic);
}

TEST_CASE("reconstruction honors the requested normalization") {
    const Economy e = support::economy("soap.json");
    ReconstructOptions o;
    o.normalization = Normalization::parse("money");
    auto r = reconstruct_from_forest(e, soap_forest(), o);
    CHECK(r.point.wages.dot(e.supply) == doctest::Approx(1));
    o.normalization = Normalization::parse("numeraire:3");
    r = reconstruct_from_forest(e, soap_forest(), o);
    CHECK(r.point.prices(2) == doctest::Approx(1));
}

TEST_CASE("boutique forest needs a smaller boutique labor pool") {
    CombinatorialData fb = load_forest(support::fixture("boutique_forest.json"));
    const Economy at_true = support::economy("boutique.json");
    CHECK(reconstruct_from_forest(at_true, fb).status == ReconstructStatus::Infeasible);
    const Economy yb = support::economy("boutique_yb.json");
    const auto r = reconstruct_from_forest(yb, fb);
    REQUIRE(r.status == ReconstructStatus::Feasible);
    CHECK(maxdiff(r.point.quantities, vec({10, 2.5, 10.625})) < 1e-12);
}

TEST_CASE("forest with a non-utility edge is infeasible") {
    const Economy e = support::economy("soap.json");
    CombinatorialData d = soap_forest();
    d.forest = {{0, 1}, {1, 0}, {1, 1}, {2, 1}, {2, 2}};
    CHECK(reconstruct_from_forest(e, d).status != ReconstructStatus::Feasible);
}

TEST_CASE("verification fixture with two goods per component") {
    const Economy e = support::economy("two_components.json");
    const EquilibriumPoint pt = b1_point();
    CHECK(verify_sm(e, pt, 2e-3).ok());
    CHECK_FALSE(verify_sm(e, pt, 1e-9).ok());
    const auto d = extract_combinatorics(e, pt);
    CHECK(d.components == 2);
    CHECK(d.components == e.n() - e.m() + 1);
    CHECK_FALSE(d.bound_violated);
    CHECK(check_ad_conditions(e, pt, 2e-3).all());

    // the exact point behind the rounded one
    const auto r = reconstruct_from_forest(e, d);
    REQUIRE(r.status == ReconstructStatus::Feasible);
    CHECK(verify_sm(e, r.point, 1e-9).ok());
    CHECK(maxdiff(r.point.quantities, pt.quantities) < 2e-3);
}

TEST_CASE("verify flags each broken condition") {
    const Economy e = support::economy("soap.json");
    const auto good = reconstruct_from_forest(e, soap_forest()).point;
    auto bad = good;
    bad.prices(0) *= 1.1;  // above cost
    CHECK_FALSE(verify_sm(e, bad).ok());
    bad = good;
    bad.quantities(2) *= 1.1;  // labor over-used
    CHECK_FALSE(verify_sm(e, bad).ok());
    bad = good;
    bad.allocation(0, 0) *= 0.5;  // market does not clear
    CHECK_FALSE(verify_sm(e, bad).ok());
    CHECK_FALSE(check_ad_conditions(e, bad).all());
    bad = good;
    bad.prices.setZero();
    bad.wages.setZero();
    CHECK_FALSE(verify_sm(e, bad).ok());
    CHECK_FALSE(check_ad_conditions(e, bad).ad3);
}

TEST_CASE("genericity and cycles on the two-class instance") {
    const auto fam = support::family("two_by_two.json");
    const SolveResult tie = solve_equilibrium(fam.instantiate({1, 1}));
    REQUIRE(tie.found);
    CHECK(mbb_cycle(fam.instantiate({1, 1}), tie.point));
    CHECK_FALSE(is_generic(fam.instantiate({1, 1}), tie.point).generic);
    const SolveResult inner = solve_equilibrium(fam.instantiate({1, 0.5}));
    REQUIRE(inner.found);
    CHECK_FALSE(mbb_cycle(fam.instantiate({1, 0.5}), inner.point));
    CHECK(is_generic(fam.instantiate({1, 0.5}), inner.point).generic);
}

TEST_CASE("tight zero edges are reported apart from the forest") {
    const auto fam = support::family("two_by_two.json");
    const Economy e = fam.instantiate({0.5, 1});  // Forest-4 at its alpha edge: class 1 indifferent
    const SolveResult r = solve_equilibrium(e);
    REQUIRE(r.found);
    const auto d = extract_combinatorics(e, r.point);
    CHECK(d.forest.size() == 2);
    CHECK(d.tight_zero_edges == std::vector<Edge>{{0, 0}});
}
