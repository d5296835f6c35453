#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace closedecon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Edge = std::pair<int, int>;  // (class, good), 0-based

enum class ErrorCode {
    DimensionMismatch,
    ZeroUtilityRowOrColumn,
    NonPositiveSupply,
    EmptyTechnologyColumn,
    NegativeEntry,
    InvalidParameter,
    IterationLimit,
    GoodListMismatch,
    NoUsefulGoods,
    NonConvergence,
    UndefinedBB,
    NumericFailure,
    IncompleteTable,
    FormulaUndefined,
    ParseError,
    SchemaError,
    ValidationError,
    UsageError,
};

const char* to_string(ErrorCode code);

struct Violation {
    ErrorCode code;
    std::string detail;
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::vector<Violation> violations = {});
    ErrorCode code() const { return code_; }
    const std::vector<Violation>& violations() const { return violations_; }

private:
    ErrorCode code_;
    std::vector<Violation> violations_;
};

// Outcome of a report-style check: empty violation list means pass.
struct CheckReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    void add(std::string v) { violations.push_back(std::move(v)); }
};

struct Economy {
    std::vector<std::string> class_names;
    std::vector<std::string> good_names;
    Vec supply;             // Y
    Mat technology;         // T, m x n
    Mat utility;            // posted U
    Mat true_utility;       // U^t; empty means "same as utility"

    int m() const { return static_cast<int>(supply.size()); }
    int n() const { return static_cast<int>(technology.cols()); }
};

std::vector<Violation> economy_violations(const Economy& raw);

// Throws Error(ValidationError) carrying every violation found.
Economy validate_economy(Economy raw);

struct EquilibriumPoint {
    Vec prices;
    Vec quantities;
    Vec wages;
    Mat allocation;
    Vec bang_per_buck;
};

EquilibriumPoint make_point(const Vec& p, const Vec& q, const Vec& w, const Mat& X);

// bb_i = max_j u_ij / p_j over priced goods for funded classes, 0 otherwise.
Vec compute_bang_per_buck(const Mat& utility, const Vec& prices, const Vec& budgets);
void refresh_bang_per_buck(const Economy& econ, EquilibriumPoint& point);

struct CombinatorialData {
    std::vector<int> active_classes;
    std::vector<int> active_goods;
    std::vector<Edge> forest;
    int components = 0;
    bool bound_violated = false;
    std::vector<Edge> tight_zero_edges;

    std::string canonical() const;  // 1-based, human readable
};

bool same_structure(const CombinatorialData& a, const CombinatorialData& b);

struct Normalization {
    enum class Kind { Money, Revenue, Numeraire };
    Kind kind = Kind::Revenue;
    int good = 0;  // for Numeraire, 0-based

    static Normalization parse(const std::string& text);  // "money", "revenue", "numeraire:<j>" (1-based)
    std::string str() const;
};

// Rescales prices and wages together; returns the factor applied (0 if undefined).
double normalize(const Economy& econ, EquilibriumPoint& point, const Normalization& norm);

struct Parameter {
    std::string name;
    int row = 0;
    int col = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> grid;
};

struct ParametricFamily {
    Economy base;
    std::vector<Parameter> params;

    int index_of(const std::string& name) const;
    Economy instantiate(const std::vector<double>& values) const;
};

ParametricFamily make_family(Economy base, std::vector<Parameter> params);

}  // namespace closedecon
