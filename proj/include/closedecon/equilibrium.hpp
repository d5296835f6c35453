#pragma once

#include "closedecon/fisher.hpp"
#include "closedecon/model.hpp"

#include <cstdint>

namespace closedecon {

constexpr double kActivity = 1e-8;

// Both sectors at once; prices and wages are rescaled to p.q = 1 before checking.
CheckReport verify_sm(const Economy& econ, const EquilibriumPoint& point, double tol = 1e-7);

CombinatorialData extract_combinatorics(const EquilibriumPoint& point, double tol = kActivity);
// Same, plus tight-but-unused MBB edges, which need the posted utilities.
CombinatorialData extract_combinatorics(const Economy& econ, const EquilibriumPoint& point, double tol = kActivity);

struct GenericityReport {
    bool generic = true;
    std::vector<std::string> tight;  // non-forest constraints holding with equality
};

GenericityReport is_generic(const Economy& econ, const EquilibriumPoint& point, double tol = 1e-7);

// MBB graph of the point (funded classes, produced goods) contains a cycle.
bool mbb_cycle(const Economy& econ, const EquilibriumPoint& point, double rel_tol = 1e-6);

enum class ReconstructStatus { Feasible, Infeasible, NumericFailure };

const char* to_string(ReconstructStatus s);

struct ReconstructOptions {
    Normalization normalization;
    std::uint64_t seed = 0;
    int starts = 32;
    int max_steps = 200;
    double damping = 0.5;
    double residual_tol = 1e-10;
    double tol = 1e-9;
};

struct ReconstructResult {
    ReconstructStatus status = ReconstructStatus::Infeasible;
    EquilibriumPoint point;
    std::string reason;
    int solutions = 0;  // distinct valid roots found
};

ReconstructResult reconstruct_from_forest(const Economy& econ, const CombinatorialData& data,
                                          const ReconstructOptions& opts = {});

struct AdReport {
    bool ad1 = false;  // firms maximize profit
    bool ad2 = false;  // consumers optimize under budget
    bool ad3 = false;  // prices and wages non-negative, not all zero
    bool ad4 = false;  // no excess demand, zero price on strict excess supply
    std::vector<std::string> violations;
    bool all() const { return ad1 && ad2 && ad3 && ad4; }
};

AdReport check_ad_conditions(const Economy& econ, const EquilibriumPoint& point, double tol = 1e-7);

}  // namespace closedecon
