#include "closedecon/production.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace closedecon;
using support::mat;
using support::maxdiff;
using support::vec;

TEST_CASE("soap production and wages at true prices") {
    const Economy e = support::economy("soap.json");
    const auto r = solve_production(e, vec({1.5, 2, 1}));
    CHECK(maxdiff(r.quantities, vec({10, 7.5, 8.125})) < 1e-12);
    CHECK(maxdiff(r.wages, vec({2.125, 0.75, 0.125})) < 1e-12);
}

TEST_CASE("labor breakpoint of the two-good example") {
    Economy e = support::economy("breakpoint.json");
    for (double d : {1.0, 1.9}) {
        e.supply(0) = d;
        const auto r = solve_production(e, vec({1, 1}));
        CHECK(maxdiff(r.wages, vec({0.5, 0.1})) < 1e-12);
        CHECK(maxdiff(r.quantities, vec({d, 1 - 0.5 * d})) < 1e-12);
    }
    for (double d : {2.1, 3.0}) {
        e.supply(0) = d;
        const auto r = solve_production(e, vec({1, 1}));
        CHECK(maxdiff(r.wages, vec({0, 0.2})) < 1e-12);
        CHECK(maxdiff(r.quantities, vec({2, 0})) < 1e-12);
    }
}

TEST_CASE("production space check") {
    Economy e = support::economy("breakpoint.json");
    e.supply(0) = 3;
    CHECK(check_production_space(e, vec({2, 0}), vec({0, 0.2}), vec({1, 1})).ok());
    // over-use of class 2
    CHECK_FALSE(check_production_space(e, vec({2, 1}), vec({0, 0.2}), vec({1, 1})).ok());
    // good 1 produced at a loss under these wages
    CHECK_FALSE(check_production_space(e, vec({2, 0}), vec({0, 0.5}), vec({1, 1})).ok());
    CHECK_FALSE(check_production_space(e, vec({-1, 0}), vec({0, 0.2}), vec({1, 1})).ok());
}

TEST_CASE("joint frontier of two trading societies") {
    const Economy a = support::economy("society_a.json");
    const Economy b = support::economy("society_b.json");
    const Economy joint = joint_frontier({a, b});
    CHECK(joint.m() == 2);
    CHECK(joint.n() == 4);
    CHECK(maxdiff(joint.technology, mat({{4, 2, 0, 0}, {0, 0, 6, 15}})) == 0);
    CHECK(joint.good_names[2] == "rice@2");
    const auto r = solve_production(joint, vec({1, 1, 1, 1}));
    CHECK(maxdiff(aggregate_goods(r.quantities, 2), vec({10, 5})) < 1e-9);

    Economy c = b;
    c.good_names = {"rice", "phones"};
    CHECK_THROWS_AS(joint_frontier({a, c}), Error);
}
