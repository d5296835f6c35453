#include "closedecon/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace closedecon {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroUtilityRowOrColumn: return "ZeroUtilityRowOrColumn";
        case ErrorCode::NonPositiveSupply: return "NonPositiveSupply";
        case ErrorCode::EmptyTechnologyColumn: return "EmptyTechnologyColumn";
        case ErrorCode::NegativeEntry: return "NegativeEntry";
        case ErrorCode::InvalidParameter: return "InvalidParameter";
        case ErrorCode::IterationLimit: return "IterationLimit";
        case ErrorCode::GoodListMismatch: return "GoodListMismatch";
        case ErrorCode::NoUsefulGoods: return "NoUsefulGoods";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::UndefinedBB: return "UndefinedBB";
        case ErrorCode::NumericFailure: return "NumericFailure";
        case ErrorCode::IncompleteTable: return "IncompleteTable";
        case ErrorCode::FormulaUndefined: return "FormulaUndefined";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::SchemaError: return "SchemaError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::UsageError: return "UsageError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, std::vector<Violation> violations)
    : std::runtime_error(what), code_(code), violations_(std::move(violations)) {}

namespace {

bool all_finite(const Mat& a) { return a.allFinite(); }

void check_matrix(const char* name, const Mat& a, int m, int n, std::vector<Violation>& out) {
    if (a.rows() != m || a.cols() != n) {
        std::ostringstream os;
        os << name << " is " << a.rows() << "x" << a.cols() << ", expected " << m << "x" << n;
        out.push_back({ErrorCode::DimensionMismatch, os.str()});
        return;
    }
    if (!all_finite(a)) out.push_back({ErrorCode::NegativeEntry, std::string(name) + " has non-finite entries"});
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (a(i, j) < 0) {
                std::ostringstream os;
                os << name << "[" << i + 1 << "," << j + 1 << "] is negative";
                out.push_back({ErrorCode::NegativeEntry, os.str()});
            }
}

void check_utility(const char* name, const Mat& u, std::vector<Violation>& out) {
    for (int i = 0; i < u.rows(); ++i)
        if (u.row(i).maxCoeff() <= 0) {
            std::ostringstream os;
            os << name << " row " << i + 1 << " has no positive entry";
            out.push_back({ErrorCode::ZeroUtilityRowOrColumn, os.str()});
        }
    for (int j = 0; j < u.cols(); ++j)
        if (u.col(j).maxCoeff() <= 0) {
            std::ostringstream os;
            os << name << " column " << j + 1 << " has no positive entry";
            out.push_back({ErrorCode::ZeroUtilityRowOrColumn, os.str()});
        }
}

}  // namespace

std::vector<Violation> economy_violations(const Economy& raw) {
    std::vector<Violation> out;
    const int m = raw.m();
    const int n = static_cast<int>(raw.technology.cols());
    if (m < 1 || n < 1) {
        out.push_back({ErrorCode::DimensionMismatch, "need at least one labor class and one good"});
        return out;
    }
    if (!raw.class_names.empty() && static_cast<int>(raw.class_names.size()) != m)
        out.push_back({ErrorCode::DimensionMismatch, "class name count differs from supply length"});
    if (!raw.good_names.empty() && static_cast<int>(raw.good_names.size()) != n)
        out.push_back({ErrorCode::DimensionMismatch, "good name count differs from technology columns"});
    for (int i = 0; i < m; ++i)
        if (!(raw.supply(i) > 0) || !std::isfinite(raw.supply(i))) {
            std::ostringstream os;
            os << "supply of class " << i + 1 << " is not positive";
            out.push_back({ErrorCode::NonPositiveSupply, os.str()});
        }
    const size_t before = out.size();
    check_matrix("technology", raw.technology, m, n, out);
    check_matrix("utility", raw.utility, m, n, out);
    if (raw.true_utility.size() > 0) check_matrix("true_utility", raw.true_utility, m, n, out);
    if (out.size() != before) return out;

    for (int j = 0; j < n; ++j)
        if (raw.technology.col(j).maxCoeff() <= 0) {
            std::ostringstream os;
            os << "technology column " << j + 1 << " has no positive entry";
            out.push_back({ErrorCode::EmptyTechnologyColumn, os.str()});
        }
    check_utility("utility", raw.utility, out);
    return out;
}

Economy validate_economy(Economy raw) {
    auto v = economy_violations(raw);
    if (!v.empty()) {
        std::string msg = "invalid economy: " + v.front().detail;
        if (v.size() > 1) msg += " (+" + std::to_string(v.size() - 1) + " more)";
        throw Error(ErrorCode::ValidationError, msg, std::move(v));
    }
    if (raw.class_names.empty())
        for (int i = 0; i < raw.m(); ++i) raw.class_names.push_back("L" + std::to_string(i + 1));
    if (raw.good_names.empty())
        for (int j = 0; j < raw.n(); ++j) raw.good_names.push_back("g" + std::to_string(j + 1));
    if (raw.true_utility.size() == 0) raw.true_utility = raw.utility;
    return raw;
}

EquilibriumPoint make_point(const Vec& p, const Vec& q, const Vec& w, const Mat& X) {
    EquilibriumPoint e;
    e.prices = p;
    e.quantities = q;
    e.wages = w;
    e.allocation = X;
    e.bang_per_buck = Vec::Zero(w.size());
    return e;
}

Vec compute_bang_per_buck(const Mat& utility, const Vec& prices, const Vec& budgets) {
    Vec bb = Vec::Zero(utility.rows());
    for (int i = 0; i < utility.rows(); ++i) {
        if (!(budgets(i) > 0)) continue;
        double best = 0.0;
        for (int j = 0; j < utility.cols(); ++j)
            if (prices(j) > 0) best = std::max(best, utility(i, j) / prices(j));
        bb(i) = best;
    }
    return bb;
}

void refresh_bang_per_buck(const Economy& econ, EquilibriumPoint& point) {
    Vec budgets = point.wages.cwiseProduct(econ.supply);
    point.bang_per_buck = compute_bang_per_buck(econ.utility, point.prices, budgets);
}

std::string CombinatorialData::canonical() const {
    std::ostringstream os;
    os << "I{";
    for (size_t k = 0; k < active_classes.size(); ++k) os << (k ? "," : "") << active_classes[k] + 1;
    os << "}|J{";
    for (size_t k = 0; k < active_goods.size(); ++k) os << (k ? "," : "") << active_goods[k] + 1;
    os << "}|F{";
    auto f = forest;
    std::sort(f.begin(), f.end());
    for (size_t k = 0; k < f.size(); ++k) os << (k ? "," : "") << "(" << f[k].first + 1 << "," << f[k].second + 1 << ")";
    os << "}";
    return os.str();
}

bool same_structure(const CombinatorialData& a, const CombinatorialData& b) {
    return a.canonical() == b.canonical();
}

Normalization Normalization::parse(const std::string& text) {
    Normalization n;
    if (text == "money") {
        n.kind = Kind::Money;
    } else if (text == "revenue") {
        n.kind = Kind::Revenue;
    } else if (text.rfind("numeraire:", 0) == 0) {
        n.kind = Kind::Numeraire;
        try {
            n.good = std::stoi(text.substr(10)) - 1;
        } catch (...) {
            throw Error(ErrorCode::UsageError, "bad numeraire index in '" + text + "'");
        }
        if (n.good < 0) throw Error(ErrorCode::UsageError, "numeraire index is 1-based");
    } else {
        throw Error(ErrorCode::UsageError, "unknown normalization '" + text + "'");
    }
    return n;
}

std::string Normalization::str() const {
    switch (kind) {
        case Kind::Money: return "money";
        case Kind::Revenue: return "revenue";
        case Kind::Numeraire: return "numeraire:" + std::to_string(good + 1);
    }
    return "revenue";
}

double normalize(const Economy& econ, EquilibriumPoint& point, const Normalization& norm) {
    double current = 0.0;
    switch (norm.kind) {
        case Normalization::Kind::Money: current = point.wages.dot(econ.supply); break;
        case Normalization::Kind::Revenue: current = point.prices.dot(point.quantities); break;
        case Normalization::Kind::Numeraire:
            if (norm.good >= point.prices.size())
                throw Error(ErrorCode::UsageError, "numeraire good out of range");
            current = point.prices(norm.good);
            break;
    }
    if (!(current > 0) || !std::isfinite(current)) return 0.0;
    const double f = 1.0 / current;
    point.prices *= f;
    point.wages *= f;
    if (point.bang_per_buck.size() > 0) point.bang_per_buck /= f;
    return f;
}

int ParametricFamily::index_of(const std::string& name) const {
    for (size_t k = 0; k < params.size(); ++k)
        if (params[k].name == name) return static_cast<int>(k);
    return -1;
}

Economy ParametricFamily::instantiate(const std::vector<double>& values) const {
    if (values.size() != params.size())
        throw Error(ErrorCode::InvalidParameter, "expected " + std::to_string(params.size()) + " parameter values");
    Economy e = base;
    for (size_t k = 0; k < params.size(); ++k) e.utility(params[k].row, params[k].col) = values[k];
    return validate_economy(std::move(e));
}

ParametricFamily make_family(Economy base, std::vector<Parameter> params) {
    ParametricFamily fam;
    fam.base = validate_economy(std::move(base));
    std::set<std::pair<int, int>> cells;
    std::set<std::string> names;
    for (const auto& p : params) {
        if (p.row < 0 || p.row >= fam.base.m() || p.col < 0 || p.col >= fam.base.n())
            throw Error(ErrorCode::InvalidParameter, "parameter '" + p.name + "' binds a cell outside U");
        if (!cells.insert({p.row, p.col}).second)
            throw Error(ErrorCode::InvalidParameter, "parameter '" + p.name + "' rebinds a bound cell");
        if (!names.insert(p.name).second)
            throw Error(ErrorCode::InvalidParameter, "duplicate parameter name '" + p.name + "'");
        if (!(p.lo <= p.hi) || p.lo < 0)
            throw Error(ErrorCode::InvalidParameter, "parameter '" + p.name + "' has an invalid range");
    }
    fam.params = std::move(params);
    // Every corner of the box must give a valid economy.
    const size_t np = fam.params.size();
    for (size_t mask = 0; mask < (size_t{1} << np); ++mask) {
        std::vector<double> v(np);
        for (size_t k = 0; k < np; ++k) v[k] = (mask >> k & 1) ? fam.params[k].hi : fam.params[k].lo;
        fam.instantiate(v);
    }
    return fam;
}

}  // namespace closedecon
