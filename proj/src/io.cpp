#include "closedecon/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace closedecon {

using json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) throw Error(ErrorCode::SchemaError, "missing field '" + where + key + "'");
    return obj.at(key);
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw Error(ErrorCode::SchemaError, "field '" + where + "' must be a number");
    return v.get<double>();
}

Vec vector_of(const json& v, const std::string& where) {
    if (!v.is_array()) throw Error(ErrorCode::SchemaError, "field '" + where + "' must be an array");
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = number(v[k], where + "[" + std::to_string(k) + "]");
    return out;
}

Mat matrix_of(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) throw Error(ErrorCode::SchemaError, "field '" + where + "' must be a non-empty array of rows");
    const size_t cols = v[0].is_array() ? v[0].size() : 0;
    Mat out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
    for (size_t r = 0; r < v.size(); ++r) {
        const std::string row = where + "[" + std::to_string(r) + "]";
        if (!v[r].is_array() || v[r].size() != cols)
            throw Error(ErrorCode::SchemaError, "field '" + row + "' must be a row of length " + std::to_string(cols));
        for (size_t c = 0; c < cols; ++c) out(r, c) = number(v[r][c], row + "[" + std::to_string(c) + "]");
    }
    return out;
}

json to_json(const Vec& v) {
    json a = json::array();
    for (int k = 0; k < v.size(); ++k) a.push_back(v(k));
    return a;
}

json to_json(const Mat& m) {
    json a = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        a.push_back(std::move(row));
    }
    return a;
}

json data_json(const CombinatorialData& d) {
    json j;
    json cls = json::array(), goods = json::array(), edges = json::array(), zero = json::array();
    for (int i : d.active_classes) cls.push_back(i + 1);
    for (int g : d.active_goods) goods.push_back(g + 1);
    for (auto [i, g] : d.forest) edges.push_back({i + 1, g + 1});
    for (auto [i, g] : d.tight_zero_edges) zero.push_back({i + 1, g + 1});
    j["classes"] = cls;
    j["goods"] = goods;
    j["edges"] = edges;
    j["components"] = d.components;
    j["bound_violated"] = d.bound_violated;
    j["tight_zero_edges"] = zero;
    j["canonical"] = d.canonical();
    return j;
}

}  // namespace

ParametricFamily parse_scenario(const std::string& text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "scenario must be a JSON object");
    Economy e;
    const json& classes = field(doc, "labor_classes", "");
    if (!classes.is_array() || classes.empty()) throw Error(ErrorCode::SchemaError, "field 'labor_classes' must be a non-empty array");
    e.supply = Vec(static_cast<Eigen::Index>(classes.size()));
    for (size_t k = 0; k < classes.size(); ++k) {
        const std::string where = "labor_classes[" + std::to_string(k) + "].";
        const json& c = classes[k];
        e.class_names.push_back(c.contains("name") && c["name"].is_string() ? c["name"].get<std::string>() : "");
        e.supply(static_cast<Eigen::Index>(k)) = number(field(c, "supply", where), where + "supply");
    }
    const json& goods = field(doc, "goods", "");
    if (!goods.is_array() || goods.empty()) throw Error(ErrorCode::SchemaError, "field 'goods' must be a non-empty array");
    for (const json& g : goods) e.good_names.push_back(g.is_object() && g.contains("name") && g["name"].is_string() ? g["name"].get<std::string>() : "");
    e.technology = matrix_of(field(doc, "technology", ""), "technology");
    e.utility = matrix_of(field(doc, "utility", ""), "utility");
    if (doc.contains("true_utility")) e.true_utility = matrix_of(doc["true_utility"], "true_utility");
    const int n = static_cast<int>(goods.size());
    if (e.technology.cols() != n || e.utility.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "technology and utility need one column per good (" + std::to_string(n) + ")");
    bool unnamed = false;
    for (const auto& s : e.class_names) unnamed = unnamed || s.empty();
    if (unnamed) e.class_names.clear();
    unnamed = false;
    for (const auto& s : e.good_names) unnamed = unnamed || s.empty();
    if (unnamed) e.good_names.clear();

    std::vector<Parameter> params;
    if (doc.contains("parameters")) {
        const json& ps = doc["parameters"];
        if (!ps.is_array()) throw Error(ErrorCode::SchemaError, "field 'parameters' must be an array");
        for (size_t k = 0; k < ps.size(); ++k) {
            const std::string where = "parameters[" + std::to_string(k) + "].";
            const json& p = ps[k];
            Parameter par;
            const json& name = field(p, "name", where);
            if (!name.is_string()) throw Error(ErrorCode::SchemaError, "field '" + where + "name' must be a string");
            par.name = name.get<std::string>();
            par.row = static_cast<int>(number(field(p, "row", where), where + "row")) - 1;
            par.col = static_cast<int>(number(field(p, "col", where), where + "col")) - 1;
            par.lo = number(field(p, "lo", where), where + "lo");
            par.hi = number(field(p, "hi", where), where + "hi");
            if (p.contains("grid")) {
                const Vec g = vector_of(p["grid"], where + "grid");
                par.grid.assign(g.data(), g.data() + g.size());
            }
            params.push_back(std::move(par));
        }
    }
    return make_family(std::move(e), std::move(params));
}

ParametricFamily load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

EquilibriumPoint parse_point(const std::string& text) {
    const json doc = parse_json(text);
    auto get = [&](const char* longk, const char* shortk) -> const json& {
        if (doc.is_object() && doc.contains(longk)) return doc.at(longk);
        return field(doc, shortk, "");
    };
    return make_point(vector_of(get("prices", "p"), "prices"), vector_of(get("quantities", "q"), "quantities"),
                      vector_of(get("wages", "w"), "wages"), matrix_of(get("allocation", "X"), "allocation"));
}

EquilibriumPoint load_point(const std::string& path) { return parse_point(read_file(path)); }

CombinatorialData parse_forest(const std::string& text) {
    const json doc = parse_json(text);
    CombinatorialData d;
    for (const json& v : field(doc, "classes", "")) d.active_classes.push_back(static_cast<int>(number(v, "classes")) - 1);
    for (const json& v : field(doc, "goods", "")) d.active_goods.push_back(static_cast<int>(number(v, "goods")) - 1);
    for (const json& e : field(doc, "edges", "")) {
        if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::SchemaError, "field 'edges' entries must be [class, good] pairs");
        d.forest.emplace_back(static_cast<int>(number(e[0], "edges")) - 1, static_cast<int>(number(e[1], "edges")) - 1);
    }
    std::sort(d.active_classes.begin(), d.active_classes.end());
    std::sort(d.active_goods.begin(), d.active_goods.end());
    std::sort(d.forest.begin(), d.forest.end());
    d.components = static_cast<int>(d.active_classes.size() + d.active_goods.size() - d.forest.size());
    return d;
}

CombinatorialData load_forest(const std::string& path) { return parse_forest(read_file(path)); }

std::string format_number(double x) {
    if (x == 0) x = 0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

std::string point_csv(const Economy& econ, const EquilibriumPoint& pt) {
    std::ostringstream os;
    os << "kind,row,col,value\n";
    for (int j = 0; j < econ.n(); ++j) os << "p,," << j + 1 << "," << format_number(pt.prices(j)) << "\n";
    for (int j = 0; j < econ.n(); ++j) os << "q,," << j + 1 << "," << format_number(pt.quantities(j)) << "\n";
    for (int i = 0; i < econ.m(); ++i) os << "w," << i + 1 << ",," << format_number(pt.wages(i)) << "\n";
    for (int i = 0; i < econ.m(); ++i)
        for (int j = 0; j < econ.n(); ++j) os << "X," << i + 1 << "," << j + 1 << "," << format_number(pt.allocation(i, j)) << "\n";
    return os.str();
}

std::string point_json(const Economy& econ, const EquilibriumPoint& pt, const CombinatorialData& data) {
    json j;
    j["classes"] = econ.class_names;
    j["goods"] = econ.good_names;
    j["p"] = to_json(pt.prices);
    j["q"] = to_json(pt.quantities);
    j["w"] = to_json(pt.wages);
    j["X"] = to_json(pt.allocation);
    j["bang_per_buck"] = to_json(pt.bang_per_buck);
    j["combinatorics"] = data_json(data);
    return j.dump(2) + "\n";
}

std::string point_dot(const Economy& econ, const EquilibriumPoint& pt) {
    std::ostringstream os;
    os << "graph fisher_forest {\n  rankdir=LR;\n";
    for (int i = 0; i < econ.m(); ++i) os << "  L" << i + 1 << " [shape=box,label=\"" << econ.class_names[i] << "\"];\n";
    for (int j = 0; j < econ.n(); ++j) os << "  g" << j + 1 << " [shape=ellipse,label=\"" << econ.good_names[j] << "\"];\n";
    for (int i = 0; i < econ.m(); ++i)
        for (int j = 0; j < econ.n(); ++j) {
            const double spend = pt.prices(j) * pt.allocation(i, j);
            if (pt.allocation(i, j) > kActivity)
                os << "  L" << i + 1 << " -- g" << j + 1 << " [weight=" << format_number(spend) << ",label=\"" << format_number(spend) << "\"];\n";
        }
    os << "}\n";
    return os.str();
}

std::string trace_jsonl(const TatonnementTrace& tr) {
    std::string out;
    for (size_t k = 0; k < tr.states.size(); ++k) {
        const TatonState& s = tr.states[k];
        json j;
        j["step"] = s.step;
        const bool last = k + 1 == tr.states.size();
        j["status"] = last ? to_string(tr.status) : (s.verified ? "verified" : "running");
        j["p"] = to_json(s.point.prices);
        j["q"] = to_json(s.point.quantities);
        j["w"] = to_json(s.point.wages);
        j["X"] = to_json(s.point.allocation);
        j["lp_degenerate"] = s.lp_degenerate;
        if (last && tr.status == TatonStatus::Cycle) {
            j["cycle_first"] = tr.cycle_first;
            j["cycle_period"] = tr.cycle_period;
        }
        out += j.dump() + "\n";
    }
    return out;
}

std::string game_csv(const GameTable& t, const Economy& econ) {
    std::ostringstream os;
    for (const auto& n : t.names) os << n << ",";
    os << "label,multiplicity,solved";
    for (int i = 0; i < econ.m(); ++i) os << ",b_" << i + 1;
    os << "\n";
    for (size_t c = 0; c < t.cells(); ++c) {
        const auto idx = t.unravel(c);
        for (size_t k = 0; k < idx.size(); ++k) os << format_number(t.grids[k][idx[k]]) << ",";
        os << t.labels[c] << "," << t.multiplicity[c] << "," << (t.solved[c] ? 1 : 0);
        for (int i = 0; i < econ.m(); ++i) os << "," << (t.solved[c] ? format_number(t.payoffs[c](i)) : "");
        os << "\n";
    }
    return os.str();
}

std::string game_json(const GameTable& t, const Economy& econ) {
    json j;
    j["convention"] = to_string(t.convention);
    j["parameters"] = t.names;
    json players = json::array();
    for (int p : t.players) players.push_back(p + 1);
    j["players"] = players;
    j["grids"] = t.grids;
    json cells = json::array();
    for (size_t c = 0; c < t.cells(); ++c) {
        json cell;
        json idx = json::array();
        for (int k : t.unravel(c)) idx.push_back(k + 1);
        cell["index"] = idx;
        cell["label"] = t.labels[c];
        cell["solved"] = static_cast<bool>(t.solved[c]);
        cell["multiplicity"] = t.multiplicity[c];
        cell["payoffs"] = t.solved[c] ? to_json(t.payoffs[c]) : json(nullptr);
        cells.push_back(std::move(cell));
    }
    j["cells"] = cells;
    json names = json::array();
    for (const auto& n : econ.class_names) names.push_back(n);
    j["classes"] = names;
    return j.dump(2) + "\n";
}

std::string zone_csv(const ZoneMap& z) {
    std::ostringstream os;
    os << z.x_name << "," << z.y_name << ",label\n";
    for (size_t ix = 0; ix < z.xs.size(); ++ix)
        for (size_t iy = 0; iy < z.ys.size(); ++iy)
            os << format_number(z.xs[ix]) << "," << format_number(z.ys[iy]) << "," << z.at(ix, iy) << "\n";
    return os.str();
}

std::string zone_legend_json(const ZoneMap& z) {
    json j = json::object();
    for (const auto& [label, data] : z.legend) j[label] = data_json(data);
    return j.dump(2) + "\n";
}

}  // namespace closedecon
