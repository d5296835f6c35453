#include "closedecon/ccg.hpp"

#include "closedecon/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <set>

namespace closedecon {

const char* to_string(PayoffConvention c) {
    return c == PayoffConvention::Total ? "total" : "per-capita";
}

PayoffConvention parse_convention(const std::string& s) {
    if (s == "total") return PayoffConvention::Total;
    if (s == "per-capita" || s == "per_capita" || s == "percapita") return PayoffConvention::PerCapita;
    throw Error(ErrorCode::UsageError, "unknown payoff convention '" + s + "'");
}

static const Mat& true_u(const Economy& econ) {
    return econ.true_utility.size() ? econ.true_utility : econ.utility;
}

Vec payoff(const Economy& econ, const EquilibriumPoint& point, PayoffConvention conv) {
    Vec b = true_u(econ).cwiseProduct(point.allocation).rowwise().sum();
    if (conv == PayoffConvention::PerCapita) b = b.cwiseQuotient(econ.supply);
    return b;
}

Economy with_technology(const Economy& econ, const Mat& technology) {
    Economy e = econ;
    e.technology = technology;
    return validate_economy(std::move(e));
}

Economy with_supply(const Economy& econ, const Vec& supply) {
    Economy e = econ;
    e.supply = supply;
    return validate_economy(std::move(e));
}

// ---------------------------------------------------------------------------
// Structure enumeration and equilibrium search

namespace {

std::vector<int> bits(unsigned mask, int size) {
    std::vector<int> v;
    for (int t = 0; t < size; ++t)
        if (mask & (1u << t)) v.push_back(t);
    return v;
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
};

bool close_points(const EquilibriumPoint& a, const EquilibriumPoint& b, double tol) {
    auto near = [tol](const Vec& x, const Vec& y) { return (x - y).lpNorm<Eigen::Infinity>() <= tol * (1.0 + x.lpNorm<Eigen::Infinity>()); };
    return near(a.prices, b.prices) && near(a.quantities, b.quantities) && near(a.wages, b.wages);
}

}  // namespace

std::vector<CombinatorialData> enumerate_structures(const Economy& econ) {
    const int m = econ.m(), n = econ.n();
    std::vector<CombinatorialData> out;
    for (unsigned im = 1; im < (1u << m); ++im) {
        for (unsigned jm = 1; jm < (1u << n); ++jm) {
            const auto I = bits(im, m), J = bits(jm, n);
            std::vector<Edge> E;
            for (int i : I)
                for (int j : J)
                    if (econ.utility(i, j) > 0) E.emplace_back(i, j);
            const int verts = static_cast<int>(I.size() + J.size());
            const int min_k = std::max<int>(1, static_cast<int>(J.size()) - static_cast<int>(I.size()) + 1);
            const int max_edges = verts - min_k;
            std::vector<Edge> chosen;
            std::function<void(size_t, Dsu)> rec = [&](size_t at, Dsu dsu) {
                if (at == E.size()) {
                    std::vector<int> deg_c(m, 0), deg_g(n, 0);
                    for (auto [i, j] : chosen) ++deg_c[i], ++deg_g[j];
                    for (int i : I)
                        if (!deg_c[i]) return;
                    for (int j : J)
                        if (!deg_g[j]) return;
                    CombinatorialData d;
                    d.active_classes = I;
                    d.active_goods = J;
                    d.forest = chosen;
                    d.components = verts - static_cast<int>(chosen.size());
                    out.push_back(std::move(d));
                    return;
                }
                rec(at + 1, dsu);
                if (static_cast<int>(chosen.size()) >= max_edges) return;
                const auto [i, j] = E[at];
                const int a = dsu.find(i), b = dsu.find(m + j);
                if (a == b) return;
                dsu.parent[a] = b;
                chosen.push_back(E[at]);
                rec(at + 1, dsu);
                chosen.pop_back();
            };
            rec(0, Dsu(m + n));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CombinatorialData& a, const CombinatorialData& b) {
        const size_t sa = a.active_classes.size() + a.active_goods.size();
        const size_t sb = b.active_classes.size() + b.active_goods.size();
        if (sa != sb) return sa < sb;
        return std::tie(a.active_classes, a.active_goods, a.forest) < std::tie(b.active_classes, b.active_goods, b.forest);
    });
    return out;
}

SolveResult solve_equilibrium(const Economy& econ, const SolveOptions& opts) {
    SolveResult r;
    TatonnementOptions to;
    to.max_iters = opts.taton_iters;
    to.verify_tol = opts.verify_tol;
    TatonnementTrace tr;
    bool taton_failed = false;
    try {
        tr = run_tatonnement(econ, Vec::Ones(econ.n()), to);
    } catch (const Error&) {
        // a funded class with nothing it values on the market; only the forest search can help
        taton_failed = true;
    }
    const bool taton_ok = !taton_failed && tr.status == TatonStatus::Converged;
    const TatonState last = taton_failed ? TatonState{} : tr.states.back();
    r.taton_status = tr.status;
    r.taton_steps = last.step;

    if (taton_ok && !last.lp_degenerate) {
        r.found = true;
        r.point = last.point;
        r.method = "tatonnement";
        r.multiplicity = 1;
    } else {
        std::vector<EquilibriumPoint> found;
        ReconstructOptions ro;
        ro.normalization = Normalization{};
        ro.seed = opts.seed;
        for (const CombinatorialData& d : enumerate_structures(econ)) {
            ReconstructResult rr;
            try {
                rr = reconstruct_from_forest(econ, d, ro);
            } catch (const Error&) {
                continue;
            }
            if (rr.status != ReconstructStatus::Feasible) continue;
            if (!verify_sm(econ, rr.point, opts.verify_tol).ok()) continue;
            bool dup = false;
            for (const auto& f : found) dup = dup || close_points(f, rr.point, 1e-7);
            if (!dup) found.push_back(rr.point);
            if (!opts.count_multiplicity) break;
        }
        if (!found.empty()) {
            r.found = true;
            r.point = found.front();
            r.method = "forest";
            r.multiplicity = static_cast<int>(found.size());
        } else if (taton_ok) {
            r.found = true;
            r.point = last.point;
            r.method = "tatonnement";
            r.multiplicity = 1;
        }
    }
    if (!r.found) return r;
    normalize(econ, r.point, opts.normalization);
    refresh_bang_per_buck(econ, r.point);
    r.data = extract_combinatorics(econ, r.point);
    r.cycle = mbb_cycle(econ, r.point);
    r.generic = is_generic(econ, r.point).generic;
    return r;
}

std::string zone_label(const SolveResult& r) {
    if (!r.found) return "unsolved";
    if (r.cycle) return "cycle";
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : r.data.canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(h & 0xffffffffu));
    std::string label = (r.data.active_classes.size() == 1 ? "one-class-" : "Z-") + std::string(buf);
    if (!r.generic) label += "/boundary";
    return label;
}

// ---------------------------------------------------------------------------
// Games

size_t GameTable::cells() const {
    size_t c = 1;
    for (const auto& g : grids) c *= g.size();
    return c;
}

std::vector<int> GameTable::unravel(size_t flat) const {
    std::vector<int> idx(grids.size());
    for (size_t k = grids.size(); k-- > 0;) {
        idx[k] = static_cast<int>(flat % grids[k].size());
        flat /= grids[k].size();
    }
    return idx;
}

size_t GameTable::ravel(const std::vector<int>& idx) const {
    size_t flat = 0;
    for (size_t k = 0; k < grids.size(); ++k) flat = flat * grids[k].size() + static_cast<size_t>(idx[k]);
    return flat;
}

GameTable sweep(const ParametricFamily& family, const std::vector<std::vector<double>>& grids, PayoffConvention conv,
                const SolveOptions& opts) {
    GameTable t;
    t.convention = conv;
    for (size_t k = 0; k < family.params.size(); ++k) {
        const Parameter& p = family.params[k];
        t.names.push_back(p.name);
        t.players.push_back(p.row);
        t.grids.push_back(k < grids.size() && !grids[k].empty() ? grids[k] : p.grid);
        if (t.grids.back().empty()) throw Error(ErrorCode::UsageError, "no grid for parameter '" + p.name + "'");
    }
    const size_t cells = t.cells();
    t.payoffs.assign(cells, Vec::Zero(family.base.m()));
    t.solved.assign(cells, false);
    t.labels.assign(cells, "unsolved");
    t.multiplicity.assign(cells, 0);
    for (size_t c = 0; c < cells; ++c) {
        const auto idx = t.unravel(c);
        std::vector<double> values(idx.size());
        for (size_t k = 0; k < idx.size(); ++k) values[k] = t.grids[k][idx[k]];
        SolveResult r;
        try {
            r = solve_equilibrium(family.instantiate(values), opts);
        } catch (const Error&) {
            continue;
        }
        if (!r.found) continue;
        t.solved[c] = true;
        t.payoffs[c] = payoff(family.base, r.point, conv);
        t.labels[c] = zone_label(r);
        t.multiplicity[c] = r.multiplicity;
    }
    return t;
}

std::vector<std::vector<int>> pure_nash(const GameTable& t) {
    for (size_t c = 0; c < t.cells(); ++c)
        if (!t.solved[c]) {
            const auto idx = t.unravel(c);
            std::string where;
            for (size_t k = 0; k < idx.size(); ++k)
                where += (k ? ", " : "") + t.names[k] + "=" + std::to_string(t.grids[k][idx[k]]);
            throw Error(ErrorCode::IncompleteTable, "no equilibrium at (" + where + ")");
        }
    std::vector<std::vector<int>> out;
    for (size_t c = 0; c < t.cells(); ++c) {
        const auto idx = t.unravel(c);
        bool nash = true;
        for (size_t k = 0; k < idx.size() && nash; ++k) {
            const int player = t.players[k];
            const double mine = t.payoffs[c](player);
            auto alt = idx;
            for (int g = 0; g < static_cast<int>(t.grids[k].size()) && nash; ++g) {
                if (g == idx[k]) continue;
                alt[k] = g;
                if (t.payoffs[t.ravel(alt)](player) > mine + 1e-9 * (1.0 + std::abs(mine))) nash = false;
            }
        }
        if (nash) out.push_back(idx);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Zone maps

ZoneMap zone_map(const ParametricFamily& family, const std::vector<double>& xs, const std::vector<double>& ys,
                 const SolveOptions& opts) {
    if (family.params.size() != 2) throw Error(ErrorCode::UsageError, "zone maps need exactly two parameters");
    ZoneMap z;
    z.x_name = family.params[0].name;
    z.y_name = family.params[1].name;
    z.xs = xs;
    z.ys = ys;
    for (double x : xs)
        for (double y : ys) {
            SolveResult r;
            try {
                r = solve_equilibrium(family.instantiate({x, y}), opts);
            } catch (const Error&) {
            }
            const std::string label = zone_label(r);
            z.labels.push_back(label);
            z.payoffs.push_back(r.found ? payoff(family.base, r.point, PayoffConvention::Total) : Vec::Zero(family.base.m()));
            if (r.found && !z.legend.count(label)) z.legend.emplace(label, r.data);
        }
    return z;
}

static std::vector<double> axis(const Parameter& p, int res) {
    std::vector<double> v;
    for (int k = 0; k < res; ++k) {
        if (p.lo <= 0)
            v.push_back(p.hi * (k + 1) / res);
        else
            v.push_back(res == 1 ? p.lo : p.lo + (p.hi - p.lo) * k / (res - 1));
    }
    return v;
}

ZoneMap zone_map(const ParametricFamily& family, int resolution, const SolveOptions& opts) {
    if (family.params.size() != 2) throw Error(ErrorCode::UsageError, "zone maps need exactly two parameters");
    if (resolution < 1) throw Error(ErrorCode::UsageError, "resolution must be positive");
    return zone_map(family, axis(family.params[0], resolution), axis(family.params[1], resolution), opts);
}

// ---------------------------------------------------------------------------
// 2x2 closed forms

TwoByTwoConstants two_by_two_constants(const Economy& econ) {
    if (econ.m() != 2 || econ.n() != 2) throw Error(ErrorCode::DimensionMismatch, "2x2 economy required");
    const Mat& T = econ.technology;
    const Vec& Y = econ.supply;
    TwoByTwoConstants c;
    const double det = T.determinant();
    c.det_sign = det > 0 ? 1 : (det < 0 ? -1 : 0);
    if (det != 0) {
        const Mat Ti = T.inverse();
        if (Ti(0, 1) != 0 && Ti(0, 0) != 0) {
            c.c1 = Ti(1, 0) * Y(0) / (Ti(0, 1) * Y(1));
            c.c2 = Ti(1, 1) * Y(1) / (Ti(0, 0) * Y(0));
            c.c_defined = true;
        }
    }
    if (T(0, 1) != 0 && T(1, 1) != 0) {
        c.d1 = T(0, 0) / T(0, 1);
        c.d2 = T(1, 0) / T(1, 1);
        c.d_defined = true;
    }
    return c;
}

std::string two_by_two_name(const CombinatorialData& d) {
    const std::vector<int> both{0, 1};
    if (d.active_classes == both && d.active_goods == both) {
        auto f = d.forest;
        std::sort(f.begin(), f.end());
        static const std::vector<std::pair<std::vector<Edge>, const char*>> names{
            {{{0, 0}, {1, 0}, {1, 1}}, "Forest-1"}, {{{0, 0}, {0, 1}, {1, 0}}, "Forest-2"},
            {{{0, 1}, {1, 0}, {1, 1}}, "Forest-3"}, {{{0, 1}, {1, 0}}, "Forest-4"},
            {{{0, 0}, {0, 1}, {1, 1}}, "Forest-6"}, {{{0, 0}, {1, 1}}, "Forest-7"},
        };
        for (const auto& [edges, name] : names)
            if (edges == f) return name;
    }
    if (d.active_classes.size() == 1 && d.active_goods.size() == 1) {
        const int i = d.active_classes[0], j = d.active_goods[0];
        if (i == 1 && j == 1) return "Forest-5";
        return "One-class(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    }
    return d.canonical();
}

namespace {

struct Candidate {
    std::vector<Edge> forest;
    std::vector<int> classes, goods;
    double ratio = 0;
    Mat spend;  // money flows
    Vec budgets;
    Vec q;
    Vec p;
};

// Posted U row i is [a_i, 1]; check MBB of class i given its edges.
bool mbb_ok(const Candidate& c, int i, double a, double r) {
    bool g1 = false, g2 = false;
    for (auto [ci, j] : c.forest)
        if (ci == i) (j == 0 ? g1 : g2) = true;
    const double eps = 1e-12 * (1.0 + std::max(a, r));
    if (g1 && g2) return std::abs(a - r) <= eps;
    if (g1) return a >= r - eps;
    if (g2) return a <= r + eps;
    return true;
}

}  // namespace

TwoByTwoResult classify_2x2(const Economy& econ, double alpha, double beta, const SolveOptions& opts) {
    if (econ.m() != 2 || econ.n() != 2) throw Error(ErrorCode::DimensionMismatch, "2x2 economy required");
    if (!(alpha > 0) || !(beta > 0)) throw Error(ErrorCode::InvalidParameter, "alpha and beta must be positive");
    Economy e = econ;
    e.utility << alpha, 1.0, beta, 1.0;
    e = validate_economy(std::move(e));
    const Mat& T = e.technology;
    const Vec& Y = e.supply;
    const Mat& Ut = true_u(e);
    const double a[2] = {alpha, beta};

    std::optional<Candidate> pick;
    const double det = T.determinant();
    const bool closed = std::abs(det) > 1e-14 * T.cwiseAbs().maxCoeff() * T.cwiseAbs().maxCoeff();
    if (closed) {
        const Mat Ti = T.inverse();
        const Vec q = Ti * Y;
        std::vector<Candidate> cands;
        auto two_class = [&](std::vector<Edge> forest, double r, auto&& flows) {
            if (!(r > 0) || !std::isfinite(r) || q.minCoeff() <= 0) return;
            Candidate c;
            c.forest = std::move(forest);
            c.classes = {0, 1};
            c.goods = {0, 1};
            c.ratio = r;
            c.p = Vec(2);
            c.p << r, 1.0;
            const Vec w = Ti.transpose() * c.p;
            c.budgets = w.cwiseProduct(Y);
            c.q = q;
            c.spend = Mat::Zero(2, 2);
            flows(c);
            cands.push_back(std::move(c));
        };
        two_class({{0, 0}, {1, 0}, {1, 1}}, beta, [&](Candidate& c) {
            c.spend(1, 1) = c.p(1) * q(1);
            c.spend(1, 0) = c.budgets(1) - c.spend(1, 1);
            c.spend(0, 0) = c.budgets(0);
        });
        two_class({{0, 0}, {0, 1}, {1, 0}}, alpha, [&](Candidate& c) {
            c.spend(1, 0) = c.budgets(1);
            c.spend(0, 1) = c.p(1) * q(1);
            c.spend(0, 0) = c.budgets(0) - c.spend(0, 1);
        });
        two_class({{0, 1}, {1, 0}, {1, 1}}, beta, [&](Candidate& c) {
            c.spend(0, 1) = c.budgets(0);
            c.spend(1, 0) = c.p(0) * q(0);
            c.spend(1, 1) = c.budgets(1) - c.spend(1, 0);
        });
        if (Ti(0, 0) != 0)
            two_class({{0, 1}, {1, 0}}, (q(1) / Y(0) - Ti(1, 0)) / Ti(0, 0), [&](Candidate& c) {
                c.spend(0, 1) = c.budgets(0);
                c.spend(1, 0) = c.budgets(1);
            });
        two_class({{0, 0}, {0, 1}, {1, 1}}, alpha, [&](Candidate& c) {
            c.spend(1, 1) = c.budgets(1);
            c.spend(0, 0) = c.p(0) * q(0);
            c.spend(0, 1) = c.budgets(0) - c.spend(0, 0);
        });
        if (q(0) - Y(0) * Ti(0, 0) != 0)
            two_class({{0, 0}, {1, 1}}, Y(0) * Ti(1, 0) / (q(0) - Y(0) * Ti(0, 0)), [&](Candidate& c) {
                c.spend(0, 0) = c.budgets(0);
                c.spend(1, 1) = c.budgets(1);
            });
        for (auto [i, j] : std::vector<Edge>{{1, 1}, {0, 0}, {0, 1}, {1, 0}}) {
            if (!(T(i, j) > 0)) continue;
            const int io = 1 - i, jo = 1 - j;
            const double qj = Y(i) / T(i, j);
            if (T(io, j) * qj > Y(io) * (1 + 1e-12)) continue;
            const double u_ij = j == 0 ? a[i] : 1.0, u_io = jo == 0 ? a[i] : 1.0;
            if (u_io / u_ij > T(i, jo) / T(i, j) * (1 + 1e-12)) continue;
            Candidate c;
            c.forest = {{i, j}};
            c.classes = {i};
            c.goods = {j};
            c.p = Vec(2);
            c.p(j) = 1.0;
            c.p(jo) = u_io / u_ij;
            c.ratio = c.p(0) / c.p(1);
            c.q = Vec::Zero(2);
            c.q(j) = qj;
            c.budgets = Vec::Zero(2);
            c.budgets(i) = qj;
            c.spend = Mat::Zero(2, 2);
            c.spend(i, j) = qj;
            cands.push_back(std::move(c));
        }
        for (Candidate& c : cands) {
            const double scale = c.budgets.sum();
            bool ok = c.budgets.size() == 2 && scale > 0;
            for (int i : c.classes) ok = ok && c.budgets(i) > 1e-12 * scale;
            for (auto [i, j] : c.forest) ok = ok && c.spend(i, j) >= -1e-12 * scale;
            if (c.classes.size() == 2)
                for (int i = 0; i < 2; ++i) ok = ok && mbb_ok(c, i, a[i], c.ratio);
            if (ok) {
                pick = std::move(c);
                break;
            }
        }
    }

    TwoByTwoResult res;
    if (pick) {
        const Candidate& c = *pick;
        res.closed_form = true;
        res.price_ratio = c.ratio;
        res.money_shares = c.budgets / c.budgets.sum();
        Mat X = Mat::Zero(2, 2);
        for (auto [i, j] : c.forest) X(i, j) = std::max(0.0, c.spend(i, j)) / c.p(j);
        res.payoffs = Ut.cwiseProduct(X).rowwise().sum();
        res.data.active_classes = c.classes;
        res.data.active_goods = c.goods;
        res.data.forest = c.forest;
        std::sort(res.data.forest.begin(), res.data.forest.end());
        res.data.components = static_cast<int>(c.classes.size() + c.goods.size() - c.forest.size());
        res.forest = two_by_two_name(res.data);
        const bool tie = std::abs(alpha - beta) <= 1e-12 * std::max(alpha, beta);
        if (tie && c.classes.size() == 2 && std::abs(c.ratio - alpha) <= 1e-12 * std::max(alpha, c.ratio))
            res.forest = "Cycle";
        return res;
    }

    SolveOptions so = opts;
    so.normalization = Normalization{};
    const SolveResult r = solve_equilibrium(e, so);
    if (!r.found) throw Error(ErrorCode::FormulaUndefined, "no closed form applies and the numeric search found no equilibrium");
    res.price_ratio = r.point.prices(1) > 0 ? r.point.prices(0) / r.point.prices(1) : INFINITY;
    const Vec W = r.point.wages.cwiseProduct(e.supply);
    res.money_shares = W / W.sum();
    res.payoffs = payoff(e, r.point, PayoffConvention::Total);
    res.data = r.data;
    res.forest = r.cycle ? "Cycle" : two_by_two_name(r.data);
    return res;
}

// ---------------------------------------------------------------------------
// Boundary probes

const char* to_string(BoundaryVerdict v) {
    switch (v) {
        case BoundaryVerdict::Interval: return "interval";
        case BoundaryVerdict::Coincide: return "coincide";
        case BoundaryVerdict::Jump: return "jump";
    }
    return "?";
}

namespace {

// Min and max of each class payoff over allocations supported on the MBB graph of `pt`.
void mbb_payoff_range(const Economy& econ, const EquilibriumPoint& pt, PayoffConvention conv, Vec& lo, Vec& hi) {
    const int m = econ.m(), n = econ.n();
    const Vec W = pt.wages.cwiseProduct(econ.supply);
    std::vector<bool> goods(n);
    for (int j = 0; j < n; ++j) goods[j] = pt.quantities(j) > kActivity;
    const auto edges = mbb_edges(econ.utility, pt.prices, W, goods, 1e-6);
    const Vec b = payoff(econ, pt, conv);
    lo = b;
    hi = b;
    if (edges.empty()) return;
    const int ne = static_cast<int>(edges.size());
    std::vector<int> rows_g, rows_c;
    for (int j = 0; j < n; ++j)
        if (goods[j]) rows_g.push_back(j);
    for (int i = 0; i < m; ++i)
        if (W(i) > kActivity * W.sum()) rows_c.push_back(i);
    const int nr = 2 * static_cast<int>(rows_g.size() + rows_c.size());
    LpProblem lp;
    lp.constraint_matrix = Mat::Zero(nr, ne);
    lp.rhs = Vec::Zero(nr);
    int r = 0;
    for (int j : rows_g) {
        for (int e = 0; e < ne; ++e)
            if (edges[e].second == j) {
                lp.constraint_matrix(r, e) = 1;
                lp.constraint_matrix(r + 1, e) = -1;
            }
        lp.rhs(r) = pt.quantities(j) * (1 + 1e-9) + 1e-12;
        lp.rhs(r + 1) = -(pt.quantities(j) * (1 - 1e-9) - 1e-12);
        r += 2;
    }
    for (int i : rows_c) {
        for (int e = 0; e < ne; ++e)
            if (edges[e].first == i) {
                lp.constraint_matrix(r, e) = pt.prices(edges[e].second);
                lp.constraint_matrix(r + 1, e) = -pt.prices(edges[e].second);
            }
        lp.rhs(r) = W(i) * (1 + 1e-9) + 1e-12;
        lp.rhs(r + 1) = -(W(i) * (1 - 1e-9) - 1e-12);
        r += 2;
    }
    const Mat& Ut = true_u(econ);
    for (int i = 0; i < m; ++i) {
        const double div = conv == PayoffConvention::PerCapita ? econ.supply(i) : 1.0;
        lp.objective = Vec::Zero(ne);
        for (int e = 0; e < ne; ++e)
            if (edges[e].first == i) lp.objective(e) = Ut(i, edges[e].second) / div;
        for (int sgn : {1, -1}) {
            LpProblem p = lp;
            p.objective *= sgn;
            const LpSolution s = solve_lp(p);
            if (s.status != LpStatus::Optimal) continue;
            const double v = sgn * s.objective_value;
            lo(i) = std::min(lo(i), v);
            hi(i) = std::max(hi(i), v);
        }
    }
}

}  // namespace

BoundaryProbe boundary_probe(const ParametricFamily& family, const std::vector<double>& point,
                             const std::vector<double>& direction, const std::vector<double>& offsets,
                             PayoffConvention conv, const SolveOptions& opts) {
    const size_t k = family.params.size();
    if (point.size() != k || direction.size() != k)
        throw Error(ErrorCode::DimensionMismatch, "point and direction must have one entry per parameter");
    if (offsets.empty()) throw Error(ErrorCode::UsageError, "at least one offset is required");
    std::vector<double> offs = offsets;
    std::sort(offs.begin(), offs.end(), std::greater<>());

    auto at = [&](double t) {
        std::vector<double> v(k);
        for (size_t s = 0; s < k; ++s) v[s] = point[s] + t * direction[s];
        return solve_equilibrium(family.instantiate(v), opts);
    };

    BoundaryProbe out;
    for (int sgn : {-1, 1}) {
        BoundarySide& side = sgn < 0 ? out.minus : out.plus;
        SolveResult last;
        for (double d : offs) {
            last = at(sgn * d);
            if (!last.found) throw Error(ErrorCode::NonConvergence, "no equilibrium at offset " + std::to_string(sgn * d));
            side.offsets.push_back(d);
            side.payoffs.push_back(payoff(family.base, last.point, conv));
        }
        side.label = zone_label(last);
        const size_t n = side.payoffs.size();
        if (n == 1) {
            side.limit = side.payoffs[0];
        } else {
            const double d1 = side.offsets[n - 2], d2 = side.offsets[n - 1];
            const Vec& b1 = side.payoffs[n - 2];
            const Vec& b2 = side.payoffs[n - 1];
            side.limit = b2 - d2 * (b1 - b2) / (d1 - d2);
        }
    }

    const SolveResult mid = at(0.0);
    if (!mid.found) throw Error(ErrorCode::NonConvergence, "no equilibrium at the boundary point");
    out.at_boundary = payoff(family.base, mid.point, conv);
    out.boundary_cycle = mid.cycle;
    mbb_payoff_range(family.instantiate(point), mid.point, conv, out.range_lo, out.range_hi);

    const double scale = 1.0 + std::max(out.minus.limit.lpNorm<Eigen::Infinity>(), out.plus.limit.lpNorm<Eigen::Infinity>());
    const double tol = 1e-3 * scale;
    if ((out.minus.limit - out.plus.limit).lpNorm<Eigen::Infinity>() <= tol) {
        out.verdict = BoundaryVerdict::Coincide;
    } else {
        bool bracket = out.boundary_cycle;
        for (const Vec* L : {&out.minus.limit, &out.plus.limit})
            for (int i = 0; i < L->size(); ++i)
                bracket = bracket && (*L)(i) >= out.range_lo(i) - tol && (*L)(i) <= out.range_hi(i) + tol;
        out.verdict = bracket ? BoundaryVerdict::Interval : BoundaryVerdict::Jump;
    }
    return out;
}

// ---------------------------------------------------------------------------

ScenarioDelta scenario_delta(const Economy& before, const Economy& after, PayoffConvention conv, const SolveOptions& opts) {
    if (before.m() != after.m() || before.n() != after.n())
        throw Error(ErrorCode::DimensionMismatch, "scenarios must have the same classes and goods");
    ScenarioDelta d;
    const SolveResult a = solve_equilibrium(before, opts);
    const SolveResult b = solve_equilibrium(after, opts);
    if (!a.found || !b.found) return d;
    d.solved = true;
    d.q_before = a.point.quantities;
    d.q_after = b.point.quantities;
    d.payoff_before = payoff(before, a.point, conv);
    d.payoff_after = payoff(after, b.point, conv);
    auto flags = [](const Vec& x, const Vec& y) {
        std::vector<int> f(x.size());
        for (int t = 0; t < x.size(); ++t) {
            const double diff = y(t) - x(t);
            f[t] = std::abs(diff) <= 1e-6 * (1.0 + std::abs(x(t))) ? 0 : (diff > 0 ? 1 : -1);
        }
        return f;
    };
    d.q_flags = flags(d.q_before, d.q_after);
    d.payoff_flags = flags(d.payoff_before, d.payoff_after);
    return d;
}

}  // namespace closedecon
