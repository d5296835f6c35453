#include "closedecon/fisher.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace closedecon;
using support::mat;
using support::maxdiff;
using support::vec;

TEST_CASE("two buyers on separate goods") {
    FisherInstance inst{vec({10, 10}), vec({1, 1}), mat({{2, 1}, {1, 3}})};
    const auto s = solve_fisher(inst);
    CHECK(maxdiff(s.prices, vec({10, 10})) < 1e-9);
    CHECK(maxdiff(s.allocation, mat({{1, 0}, {0, 1}})) < 1e-9);
    CHECK(maxdiff(s.bang_per_buck, vec({0.2, 0.3})) < 1e-9);
    CHECK(s.generic);
    CHECK(check_fisher(inst, s.prices, s.allocation).ok());
}

TEST_CASE("richer buyer spills into the second good") {
    FisherInstance inst{vec({30, 10}), vec({1, 1}), mat({{2, 1}, {1, 3}})};
    const auto s = solve_fisher(inst);
    CHECK(maxdiff(s.prices, vec({80.0 / 3, 40.0 / 3})) < 1e-8);
    CHECK(s.allocation(0, 1) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(s.allocation(1, 1) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(s.allocation(0, 0) == doctest::Approx(1).epsilon(1e-9));
}

TEST_CASE("bang per buck") {
    const auto b = bang_per_buck(vec({2, 1}), vec({10, 10}));
    CHECK(b.value == doctest::Approx(0.2));
    CHECK(b.argmax == std::vector<int>{0});
    const auto tie = bang_per_buck(vec({1, 1}), vec({2, 2}));
    CHECK(tie.argmax.size() == 2);
    CHECK_THROWS_AS(bang_per_buck(vec({0, 0}), vec({1, 1})), Error);
}

TEST_CASE("fisher check catches each kind of failure") {
    FisherInstance inst{vec({10, 10}), vec({1, 1}), mat({{2, 1}, {1, 3}})};
    CHECK_FALSE(check_fisher(inst, vec({10, 10}), mat({{1, 0}, {0, 0.5}})).ok());   // does not clear
    CHECK_FALSE(check_fisher(inst, vec({10, 10}), mat({{0, 1}, {1, 0}})).ok());     // off MBB
    CHECK_FALSE(check_fisher(inst, vec({12, 10}), mat({{1, 0}, {0, 1}})).ok());     // overspends
}

TEST_CASE("fully tied market is cyclic and still clears") {
    FisherInstance inst{vec({1, 1}), vec({1, 1}), mat({{1, 1}, {1, 1}})};
    const auto s = solve_fisher(inst);
    CHECK_FALSE(s.generic);
    CHECK(has_cycle(s.mbb_graph, 2, 2));
    CHECK(maxdiff(s.prices, vec({1, 1})) < 1e-8);
    CHECK(check_fisher(inst, s.prices, s.allocation, 1e-6).ok());
}

TEST_CASE("unproduced goods get the U-level price") {
    // two funded buyers, good 3 not produced
    FisherInstance inst{vec({1, 1}), vec({1, 1, 0}), mat({{1, 0, 2}, {0, 1, 1}})};
    const auto s = solve_fisher(inst);
    const Vec p = price_unproduced(inst, s);
    CHECK(p(0) == doctest::Approx(1));
    CHECK(p(1) == doctest::Approx(1));
    // bb = [1, 1] so the virtual price is max(2/1, 1/1)
    CHECK(p(2) == doctest::Approx(2));
}

TEST_CASE("goods nobody wants are free and go to an unfunded class") {
    FisherInstance inst{vec({1, 0}), vec({1, 1}), mat({{1, 0}, {0, 1}})};
    const auto s = solve_fisher(inst);
    CHECK(s.prices(0) == doctest::Approx(1));
    CHECK(s.prices(1) == 0);
    CHECK(s.allocation(1, 1) == doctest::Approx(1));
}

TEST_CASE("mbb edges respect goods mask and funding") {
    const auto e = mbb_edges(mat({{1, 1}, {2, 1}}), vec({1, 1}), vec({1, 0}), {true, true}, 1e-9);
    CHECK(e.size() == 2);
    const auto e2 = mbb_edges(mat({{1, 1}, {2, 1}}), vec({1, 1}), vec({1, 1}), {true, false}, 1e-9);
    CHECK(e2.size() == 2);
    CHECK_FALSE(has_cycle({{0, 0}, {1, 0}}, 2, 2));
    CHECK(has_cycle({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 2, 2));
}
