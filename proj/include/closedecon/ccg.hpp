#pragma once

#include "closedecon/equilibrium.hpp"
#include "closedecon/model.hpp"
#include "closedecon/tatonnement.hpp"

#include <cstdint>
#include <map>

namespace closedecon {

enum class PayoffConvention { PerCapita, Total };

const char* to_string(PayoffConvention c);
PayoffConvention parse_convention(const std::string& s);

// b_i = sum_j Ut_ij x_ij, divided by Y_i for per-capita.
Vec payoff(const Economy& econ, const EquilibriumPoint& point, PayoffConvention conv = PayoffConvention::PerCapita);

struct SolveOptions {
    int taton_iters = 1000;
    double verify_tol = 1e-7;
    Normalization normalization;
    std::uint64_t seed = 0;
    bool count_multiplicity = true;
};

struct SolveResult {
    bool found = false;
    EquilibriumPoint point;
    std::string method;  // "tatonnement" or "forest"
    int multiplicity = 0;  // distinct verified points seen by the forest search
    TatonStatus taton_status = TatonStatus::BudgetExhausted;
    int taton_steps = 0;
    CombinatorialData data;
    bool cycle = false;    // MBB graph of the point has a cycle
    bool generic = false;
};

// Tatonnement from uniform prices; forest search when it fails or stops on a degenerate LP.
SolveResult solve_equilibrium(const Economy& econ, const SolveOptions& opts = {});

// Candidate (I, J, F) triples, smallest active sets first.
std::vector<CombinatorialData> enumerate_structures(const Economy& econ);

std::string zone_label(const SolveResult& r);

struct GameTable {
    std::vector<std::string> names;  // parameter names
    std::vector<int> players;        // class controlling each parameter
    std::vector<std::vector<double>> grids;
    PayoffConvention convention = PayoffConvention::PerCapita;
    std::vector<Vec> payoffs;  // by flat cell index, first parameter slowest
    std::vector<bool> solved;
    std::vector<std::string> labels;
    std::vector<int> multiplicity;

    size_t cells() const;
    std::vector<int> unravel(size_t flat) const;
    size_t ravel(const std::vector<int>& idx) const;
};

GameTable sweep(const ParametricFamily& family, const std::vector<std::vector<double>>& grids,
                PayoffConvention conv = PayoffConvention::PerCapita, const SolveOptions& opts = {});

std::vector<std::vector<int>> pure_nash(const GameTable& table);

struct ZoneMap {
    std::string x_name, y_name;
    std::vector<double> xs, ys;
    std::vector<std::string> labels;  // index ix * ys.size() + iy
    std::vector<Vec> payoffs;
    std::map<std::string, CombinatorialData> legend;

    const std::string& at(size_t ix, size_t iy) const { return labels[ix * ys.size() + iy]; }
};

ZoneMap zone_map(const ParametricFamily& family, const std::vector<double>& xs, const std::vector<double>& ys,
                 const SolveOptions& opts = {});
ZoneMap zone_map(const ParametricFamily& family, int resolution, const SolveOptions& opts = {});

struct TwoByTwoConstants {
    double c1 = 0, c2 = 0, d1 = 0, d2 = 0;
    int det_sign = 0;
    bool c_defined = false, d_defined = false;
};

TwoByTwoConstants two_by_two_constants(const Economy& econ);

struct TwoByTwoResult {
    std::string forest;  // "Forest-1".."Forest-7", "Cycle", "One-class(i,j)"
    double price_ratio = 0;  // p1/p2
    Vec money_shares;        // W_i / sum W
    Vec payoffs;             // totals under Ut
    CombinatorialData data;
    bool closed_form = false;
};

// Posted U = [[alpha, 1], [beta, 1]].
TwoByTwoResult classify_2x2(const Economy& econ, double alpha, double beta, const SolveOptions& opts = {});
std::string two_by_two_name(const CombinatorialData& d);

enum class BoundaryVerdict { Interval, Coincide, Jump };
const char* to_string(BoundaryVerdict v);

struct BoundarySide {
    std::vector<double> offsets;
    std::vector<Vec> payoffs;
    Vec limit;
    std::string label;
};

struct BoundaryProbe {
    BoundarySide minus, plus;
    Vec at_boundary;
    Vec range_lo, range_hi;  // payoff range over MBB-graph allocations at the boundary point
    bool boundary_cycle = false;
    BoundaryVerdict verdict = BoundaryVerdict::Coincide;
};

// Approaches `point` along -direction and +direction at the given (decreasing) offsets.
BoundaryProbe boundary_probe(const ParametricFamily& family, const std::vector<double>& point,
                             const std::vector<double>& direction, const std::vector<double>& offsets,
                             PayoffConvention conv = PayoffConvention::Total, const SolveOptions& opts = {});

struct ScenarioDelta {
    bool solved = false;
    Vec q_before, q_after, payoff_before, payoff_after;
    std::vector<int> q_flags, payoff_flags;  // +1 up, -1 down, 0 unchanged
};

ScenarioDelta scenario_delta(const Economy& before, const Economy& after,
                             PayoffConvention conv = PayoffConvention::PerCapita, const SolveOptions& opts = {});

Economy with_technology(const Economy& econ, const Mat& technology);
Economy with_supply(const Economy& econ, const Vec& supply);

}  // namespace closedecon
