#pragma once

#include "closedecon/ccg.hpp"
#include "closedecon/equilibrium.hpp"
#include "closedecon/model.hpp"
#include "closedecon/tatonnement.hpp"

#include <string>

namespace closedecon {

// Scenario files: labor_classes, goods, technology, utility, true_utility, optional parameters.
// Parameter row/col are 1-based in files. An economy without parameters is a family with none.
ParametricFamily load_scenario(const std::string& path);
ParametricFamily parse_scenario(const std::string& text);

// {"prices", "quantities", "wages", "allocation"} (or p, q, w, X).
EquilibriumPoint load_point(const std::string& path);
EquilibriumPoint parse_point(const std::string& text);

// {"classes": [..], "goods": [..], "edges": [[i, j], ..]}, all 1-based.
CombinatorialData load_forest(const std::string& path);
CombinatorialData parse_forest(const std::string& text);

std::string format_number(double x);  // 9 significant digits

std::string point_csv(const Economy& econ, const EquilibriumPoint& point);
std::string point_json(const Economy& econ, const EquilibriumPoint& point, const CombinatorialData& data);
std::string point_dot(const Economy& econ, const EquilibriumPoint& point);

// One JSON object per line with keys p, q, w, X, step, status.
std::string trace_jsonl(const TatonnementTrace& trace);

std::string game_csv(const GameTable& table, const Economy& econ);
std::string game_json(const GameTable& table, const Economy& econ);
std::string zone_csv(const ZoneMap& zones);
std::string zone_legend_json(const ZoneMap& zones);

}  // namespace closedecon
