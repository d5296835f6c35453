#include "closedecon/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

namespace closedecon {

namespace {

std::string edge_str(int i, int j) {
    std::ostringstream os;
    os << "(" << i + 1 << "," << j + 1 << ")";
    return os.str();
}

bool dims_ok(const Economy& econ, const EquilibriumPoint& pt) {
    return pt.prices.size() == econ.n() && pt.quantities.size() == econ.n() && pt.wages.size() == econ.m() &&
           pt.allocation.rows() == econ.m() && pt.allocation.cols() == econ.n();
}

// Copy with prices and wages scaled so revenue is one (or the largest price/wage when revenue vanishes).
EquilibriumPoint scaled(const EquilibriumPoint& pt, bool& trivial) {
    EquilibriumPoint e = pt;
    double s = pt.prices.dot(pt.quantities);
    trivial = !(s > 0);
    if (trivial) s = std::max(pt.prices.cwiseAbs().maxCoeff(), pt.wages.cwiseAbs().maxCoeff());
    if (s > 0) {
        e.prices /= s;
        e.wages /= s;
    }
    return e;
}

// Elementary conditions shared by the SM verifier and the AD checker.
struct Conditions {
    CheckReport nonneg, labor, firms, consumers, goods;
};

Conditions evaluate(const Economy& econ, const EquilibriumPoint& e, double tol) {
    Conditions c;
    const int m = econ.m(), n = econ.n();
    const Vec tq = econ.technology * e.quantities;
    const Vec wt = econ.technology.transpose() * e.wages;
    for (int j = 0; j < n; ++j) {
        if (e.prices(j) < -tol) c.nonneg.add("negative price for good " + std::to_string(j + 1));
        if (e.quantities(j) < -tol) c.nonneg.add("negative quantity for good " + std::to_string(j + 1));
    }
    for (int i = 0; i < m; ++i)
        if (e.wages(i) < -tol) c.nonneg.add("negative wage for class " + std::to_string(i + 1));
    if (e.allocation.minCoeff() < -tol) c.nonneg.add("negative allocation");

    for (int i = 0; i < m; ++i) {
        const double Y = econ.supply(i);
        if (tq(i) > Y + tol * std::max(1.0, Y)) {
            std::ostringstream os;
            os << "labor of class " << i + 1 << " over-used: " << tq(i) << " > " << Y;
            c.labor.add(os.str());
        }
        if (e.wages(i) * (Y - tq(i)) > tol * std::max(1.0, Y)) {
            std::ostringstream os;
            os << "class " << i + 1 << " is paid while its labor is slack";
            c.labor.add(os.str());
        }
    }
    for (int j = 0; j < n; ++j) {
        if (e.prices(j) > wt(j) + tol) {
            std::ostringstream os;
            os << "good " << j + 1 << " priced above cost: p=" << e.prices(j) << " > (wT)=" << wt(j);
            c.firms.add(os.str());
        }
        if (std::abs(e.quantities(j) * (wt(j) - e.prices(j))) > tol * std::max(1.0, e.quantities(j))) {
            std::ostringstream os;
            os << "good " << j + 1 << " produced at a loss: p=" << e.prices(j) << " < (wT)=" << wt(j);
            c.firms.add(os.str());
        }
    }

    FisherInstance inst{e.wages.cwiseProduct(econ.supply), e.quantities, econ.utility};
    for (const auto& v : check_fisher(inst, e.prices, e.allocation, tol).violations) {
        if (v.find("does not clear") != std::string::npos || v.find("unproduced good") != std::string::npos)
            c.goods.add(v);
        else if (v.find("negative") == std::string::npos)
            c.consumers.add(v);
    }
    return c;
}

void append(CheckReport& dst, const CheckReport& src) {
    for (const auto& v : src.violations) dst.add(v);
}

int count_components(const std::vector<int>& I, const std::vector<int>& J, const std::vector<Edge>& F, int m) {
    std::vector<int> verts;
    for (int i : I) verts.push_back(i);
    for (int j : J) verts.push_back(m + j);
    std::vector<int> parent(verts.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto pos = [&](int v) { return static_cast<int>(std::find(verts.begin(), verts.end(), v) - verts.begin()); };
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    int comps = static_cast<int>(verts.size());
    for (const auto& [i, j] : F) {
        const int a = pos(i), b = pos(m + j);
        if (a >= static_cast<int>(verts.size()) || b >= static_cast<int>(verts.size())) continue;
        const int ra = find(a), rb = find(b);
        if (ra != rb) {
            parent[rb] = ra;
            --comps;
        }
    }
    return comps;
}

}  // namespace

CheckReport verify_sm(const Economy& econ, const EquilibriumPoint& point, double tol) {
    CheckReport r;
    if (!dims_ok(econ, point)) {
        r.add("dimension mismatch");
        return r;
    }
    bool trivial = false;
    const EquilibriumPoint e = scaled(point, trivial);
    if (trivial) r.add("no good has p_j q_j > 0");
    const Conditions c = evaluate(econ, e, tol);
    append(r, c.nonneg);
    append(r, c.labor);
    append(r, c.firms);
    append(r, c.goods);
    append(r, c.consumers);
    return r;
}

AdReport check_ad_conditions(const Economy& econ, const EquilibriumPoint& point, double tol) {
    AdReport r;
    if (!dims_ok(econ, point)) {
        r.violations.push_back("dimension mismatch");
        return r;
    }
    bool trivial = false;
    const EquilibriumPoint e = scaled(point, trivial);
    const Conditions c = evaluate(econ, e, tol);
    const bool all_zero = e.prices.cwiseAbs().maxCoeff() <= tol && e.wages.cwiseAbs().maxCoeff() <= tol;

    // AD1: zero profit where producing, no good priced above its labor cost
    r.ad1 = c.firms.ok() && e.quantities.minCoeff() >= -tol;
    // AD2: budget spent on bang-per-buck goods only
    r.ad2 = c.consumers.ok() && e.allocation.minCoeff() >= -tol;
    // AD3
    r.ad3 = e.prices.minCoeff() >= -tol && e.wages.minCoeff() >= -tol && !all_zero && !trivial;
    // AD4: goods and labor markets
    r.ad4 = c.goods.ok() && c.labor.ok();

    for (const auto* rep : {&c.firms, &c.consumers, &c.goods, &c.labor, &c.nonneg})
        for (const auto& v : rep->violations) r.violations.push_back(v);
    if (all_zero || trivial) r.violations.push_back("prices and wages vanish");
    return r;
}

CombinatorialData extract_combinatorics(const EquilibriumPoint& point, double tol) {
    CombinatorialData d;
    const int m = static_cast<int>(point.wages.size()), n = static_cast<int>(point.quantities.size());
    const double rev = point.prices.dot(point.quantities);
    const double ws = rev > 0 ? 1.0 / rev : 1.0;
    for (int i = 0; i < m; ++i)
        if (point.wages(i) * ws > tol) d.active_classes.push_back(i);
    for (int j = 0; j < n; ++j)
        if (point.quantities(j) > tol) d.active_goods.push_back(j);
    auto in = [](const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
            if (point.allocation(i, j) > tol && in(d.active_classes, i) && in(d.active_goods, j))
                d.forest.emplace_back(i, j);
    d.components = count_components(d.active_classes, d.active_goods, d.forest, m);
    if (static_cast<int>(d.active_classes.size()) == m && static_cast<int>(d.active_goods.size()) == n)
        d.bound_violated = d.components < n - m + 1;
    return d;
}

CombinatorialData extract_combinatorics(const Economy& econ, const EquilibriumPoint& point, double tol) {
    CombinatorialData d = extract_combinatorics(point, tol);
    const Vec budgets = point.wages.cwiseProduct(econ.supply);
    const Vec bb = compute_bang_per_buck(econ.utility, point.prices, budgets);
    for (int i : d.active_classes)
        for (int j : d.active_goods) {
            if (std::find(d.forest.begin(), d.forest.end(), Edge{i, j}) != d.forest.end()) continue;
            if (point.prices(j) > 0 && econ.utility(i, j) > 0 &&
                econ.utility(i, j) / point.prices(j) >= bb(i) * (1.0 - 1e-6))
                d.tight_zero_edges.emplace_back(i, j);
        }
    return d;
}

bool mbb_cycle(const Economy& econ, const EquilibriumPoint& point, double rel_tol) {
    std::vector<bool> goods(econ.n());
    for (int j = 0; j < econ.n(); ++j) goods[j] = point.quantities(j) > kActivity;
    const auto edges = mbb_edges(econ.utility, point.prices, point.wages.cwiseProduct(econ.supply), goods, rel_tol);
    return has_cycle(edges, econ.m(), econ.n());
}

GenericityReport is_generic(const Economy& econ, const EquilibriumPoint& point, double tol) {
    GenericityReport g;
    bool trivial = false;
    const EquilibriumPoint e = scaled(point, trivial);
    const CombinatorialData d = extract_combinatorics(e);
    const Vec wt = econ.technology.transpose() * e.wages;
    auto in = [](const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); };
    for (int j = 0; j < econ.n(); ++j)
        if (!in(d.active_goods, j) && !(wt(j) > e.prices(j) + tol))
            g.tight.push_back("unproduced good " + std::to_string(j + 1) + " has (wT)_j = p_j");
    const Vec bb = compute_bang_per_buck(econ.utility, e.prices, e.wages.cwiseProduct(econ.supply));
    for (int i : d.active_classes)
        for (int j = 0; j < econ.n(); ++j) {
            if (std::find(d.forest.begin(), d.forest.end(), Edge{i, j}) != d.forest.end()) continue;
            if (!in(d.active_goods, j)) continue;  // virtual prices sit at the U-level by construction
            const double u = econ.utility(i, j);
            if (u <= 0) continue;
            if (!(e.prices(j) > 0) || !(u / e.prices(j) < bb(i) * (1.0 - tol)))
                g.tight.push_back("edge " + edge_str(i, j) + " outside the forest is a bang-per-buck tie");
        }
    const Vec used = econ.technology * e.quantities;
    for (int i = 0; i < econ.m(); ++i)
        if (!in(d.active_classes, i) && used(i) >= econ.supply(i) * (1.0 - tol))
            g.tight.push_back("unpaid class " + std::to_string(i + 1) + " has no idle labor");
    if (has_cycle(d.forest, econ.m(), econ.n())) g.tight.push_back("allocation graph contains a cycle");
    g.generic = g.tight.empty();
    return g;
}

const char* to_string(ReconstructStatus s) {
    switch (s) {
        case ReconstructStatus::Feasible: return "feasible";
        case ReconstructStatus::Infeasible: return "infeasible";
        case ReconstructStatus::NumericFailure: return "numeric-failure";
    }
    return "?";
}

namespace {

struct Layout {
    std::vector<int> I, J;
    std::vector<Edge> F;
    std::vector<int> class_comp, good_comp;  // indexed by position in I / J
    int k = 0;
    Vec rel;  // price of each J-good relative to its component root
};

struct Candidate {
    EquilibriumPoint point;
    std::string failure;
};

// Money-normalized point from solved (w_I, p_J, q_J), checked against every equilibrium condition.
Candidate assemble(const Economy& econ, const Layout& L, const Vec& wI, const Vec& pJ, const Vec& qJ, double tol) {
    Candidate c;
    const int m = econ.m(), n = econ.n();
    const Mat& U = econ.utility;
    Vec w = Vec::Zero(m), p = Vec::Zero(n), q = Vec::Zero(n);
    for (size_t a = 0; a < L.I.size(); ++a) w(L.I[a]) = wI(a);
    for (size_t b = 0; b < L.J.size(); ++b) {
        p(L.J[b]) = pJ(b);
        q(L.J[b]) = qJ(b);
    }
    c.point = make_point(p, q, w, Mat::Zero(m, n));
    for (size_t a = 0; a < L.I.size(); ++a)
        if (!(wI(a) > kActivity)) {
            c.failure = "wage of class " + std::to_string(L.I[a] + 1) + " is not positive";
            return c;
        }
    for (size_t b = 0; b < L.J.size(); ++b) {
        if (!(pJ(b) > kActivity)) {
            c.failure = "price of good " + std::to_string(L.J[b] + 1) + " is not positive";
            return c;
        }
        if (!(qJ(b) > kActivity)) {
            c.failure = "production of good " + std::to_string(L.J[b] + 1) + " is not positive";
            return c;
        }
    }
    Vec bb = Vec::Zero(m);
    for (const auto& [i, j] : L.F) bb(i) = U(i, j) / p(j);
    for (int j = 0; j < n; ++j) {
        if (q(j) > 0) continue;
        double v = 0.0;
        for (int i : L.I) v = std::max(v, U(i, j) / bb(i));
        p(j) = v;
    }
    c.point.prices = p;
    c.point.bang_per_buck = bb;

    // spending along forest edges by leaf peeling
    std::vector<double> rem(m + n, 0.0);
    for (int i : L.I) rem[i] = w(i) * econ.supply(i);
    for (int j : L.J) rem[m + j] = p(j) * q(j);
    std::vector<int> degree(m + n, 0);
    for (const auto& [i, j] : L.F) {
        ++degree[i];
        ++degree[m + j];
    }
    std::vector<bool> used(L.F.size(), false);
    Mat X = Mat::Zero(m, n);
    bool progress = true;
    while (progress) {
        progress = false;
        for (int v = 0; v < m + n; ++v) {
            if (degree[v] != 1) continue;
            int e = -1;
            for (size_t k = 0; k < L.F.size(); ++k)
                if (!used[k] && (L.F[k].first == v || m + L.F[k].second == v)) e = static_cast<int>(k);
            const auto [i, j] = L.F[e];
            const int other = v < m ? m + j : i;
            const double s = rem[v];
            X(i, j) = s / p(j);
            rem[other] -= s;
            rem[v] = 0.0;
            used[e] = true;
            --degree[v];
            --degree[other];
            progress = true;
        }
    }
    c.point.allocation = X;
    for (const auto& [i, j] : L.F)
        if (!(X(i, j) > kActivity)) {
            c.failure = "allocation on edge " + edge_str(i, j) + " is not positive";
            return c;
        }
    const Vec tq = econ.technology * q;
    const Vec wt = econ.technology.transpose() * w;
    for (int i = 0; i < m; ++i)
        if (std::find(L.I.begin(), L.I.end(), i) == L.I.end() && tq(i) > econ.supply(i) + tol * std::max(1.0, econ.supply(i))) {
            c.failure = "labor of inactive class " + std::to_string(i + 1) + " is over-used";
            return c;
        }
    for (int j = 0; j < n; ++j)
        if (q(j) == 0 && p(j) > wt(j) + tol) {
            c.failure = "unproduced good " + std::to_string(j + 1) + " would be profitable";
            return c;
        }
    for (int i : L.I)
        for (int j : L.J)
            if (U(i, j) / p(j) > bb(i) * (1.0 + tol)) {
                c.failure = "class " + std::to_string(i + 1) + " prefers good " + std::to_string(j + 1) + " off the forest";
                return c;
            }
    return c;
}

}  // namespace

ReconstructResult reconstruct_from_forest(const Economy& econ, const CombinatorialData& data,
                                          const ReconstructOptions& opts) {
    ReconstructResult res;
    const int m = econ.m(), n = econ.n();
    const Mat& U = econ.utility;
    Layout L;
    L.I = data.active_classes;
    L.J = data.active_goods;
    L.F = data.forest;
    std::sort(L.I.begin(), L.I.end());
    std::sort(L.J.begin(), L.J.end());
    auto infeasible = [&](std::string why) {
        res.status = ReconstructStatus::Infeasible;
        res.reason = std::move(why);
        return res;
    };
    if (L.I.empty() || L.J.empty()) return infeasible("no active classes or goods");
    if (L.I.size() > L.J.size()) return infeasible("more active classes than active goods");
    const int nI = static_cast<int>(L.I.size()), nJ = static_cast<int>(L.J.size());
    std::vector<int> ipos(m, -1), jpos(n, -1);
    for (int a = 0; a < nI; ++a) ipos[L.I[a]] = a;
    for (int b = 0; b < nJ; ++b) jpos[L.J[b]] = b;
    for (const auto& [i, j] : L.F) {
        if (i < 0 || i >= m || j < 0 || j >= n || ipos[i] < 0 || jpos[j] < 0)
            return infeasible("forest edge " + edge_str(i, j) + " leaves the active sets");
        if (!(U(i, j) > 0)) return infeasible("forest edge " + edge_str(i, j) + " has zero posted utility");
    }
    if (has_cycle(L.F, m, n)) return infeasible("edge set is not a forest");

    // components and relative prices along tree paths
    std::vector<std::vector<int>> adj(nI + nJ);
    for (const auto& [i, j] : L.F) {
        adj[ipos[i]].push_back(nI + jpos[j]);
        adj[nI + jpos[j]].push_back(ipos[i]);
    }
    L.class_comp.assign(nI, -1);
    L.good_comp.assign(nJ, -1);
    L.rel = Vec::Zero(nJ);
    Vec bbrel = Vec::Zero(nI);
    for (int b0 = 0; b0 < nJ; ++b0) {
        if (L.good_comp[b0] >= 0) continue;
        L.good_comp[b0] = L.k;
        L.rel(b0) = 1.0;
        std::vector<int> stack{nI + b0};
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int o : adj[v]) {
                if (v >= nI) {  // good -> class
                    if (L.class_comp[o] >= 0) continue;
                    L.class_comp[o] = L.k;
                    bbrel(o) = U(L.I[o], L.J[v - nI]) / L.rel(v - nI);
                } else {  // class -> good
                    if (L.good_comp[o - nI] >= 0) continue;
                    L.good_comp[o - nI] = L.k;
                    L.rel(o - nI) = U(L.I[v], L.J[o - nI]) / bbrel(v);
                }
                stack.push_back(o);
            }
        }
        ++L.k;
    }
    for (int a = 0; a < nI; ++a)
        if (L.class_comp[a] < 0) return infeasible("active class " + std::to_string(L.I[a] + 1) + " buys nothing");
    const int k = L.k;

    Mat TIJ(nI, nJ);
    Vec YI(nI);
    for (int a = 0; a < nI; ++a) {
        YI(a) = econ.supply(L.I[a]);
        for (int b = 0; b < nJ; ++b) TIJ(a, b) = econ.technology(L.I[a], L.J[b]);
    }
    Mat P = Mat::Zero(nJ, k);
    for (int b = 0; b < nJ; ++b) P(b, L.good_comp[b]) = L.rel(b);

    // zero profit on produced goods: w_I T_IJ = P s
    Mat M(nJ, nI + k);
    M << TIJ.transpose(), -P;
    Eigen::FullPivLU<Mat> lu(M);
    lu.setThreshold(1e-11);
    if (lu.dimensionOfKernel() == 0) return infeasible("zero-profit conditions admit only zero prices");
    const Mat N = lu.kernel();
    const Mat Nw = N.topRows(nI);
    const Mat Np = P * N.bottomRows(k);
    const int nv = static_cast<int>(N.cols());

    // full employment of active classes: T_IJ q_J = Y_I
    Vec q0;
    Mat Z(nJ, 0);
    Eigen::FullPivLU<Mat> tlu(TIJ);
    tlu.setThreshold(1e-11);
    if (nI == nJ && tlu.isInvertible()) {
        q0 = tlu.solve(YI);
    } else {
        q0 = TIJ.completeOrthogonalDecomposition().solve(YI);
        if (tlu.dimensionOfKernel() > 0) Z = tlu.kernel();
    }
    if ((TIJ * q0 - YI).norm() > 1e-9 * (1.0 + YI.norm()))
        return infeasible("labor constraints of active classes cannot all bind");
    const int nb = static_cast<int>(Z.cols());

    // residuals: money normalization, then money conservation for all but the last component
    const Vec yNw = (YI.asDiagonal() * Nw).colwise().sum().transpose();
    auto residual = [&](const Vec& v, const Vec& b) {
        Vec R(k);
        const Vec w = Nw * v, p = Np * v, q = q0 + Z * b;
        R(0) = yNw.dot(v) - 1.0;
        for (int c = 0; c + 1 < k; ++c) {
            double r = 0.0;
            for (int bj = 0; bj < nJ; ++bj)
                if (L.good_comp[bj] == c) r += p(bj) * q(bj);
            for (int a = 0; a < nI; ++a)
                if (L.class_comp[a] == c) r -= w(a) * YI(a);
            R(c + 1) = r;
        }
        return R;
    };
    auto jacobian = [&](const Vec& v, const Vec& b) {
        Mat Jm = Mat::Zero(k, nv + nb);
        const Vec p = Np * v, q = q0 + Z * b;
        Jm.block(0, 0, 1, nv) = yNw.transpose();
        for (int c = 0; c + 1 < k; ++c) {
            for (int bj = 0; bj < nJ; ++bj)
                if (L.good_comp[bj] == c) {
                    Jm.block(c + 1, 0, 1, nv) += q(bj) * Np.row(bj);
                    if (nb > 0) Jm.block(c + 1, nv, 1, nb) += p(bj) * Z.row(bj);
                }
            for (int a = 0; a < nI; ++a)
                if (L.class_comp[a] == c) Jm.block(c + 1, 0, 1, nv) -= YI(a) * Nw.row(a);
        }
        return Jm;
    };

    std::vector<Candidate> valid;
    std::string first_failure;
    bool any_root = false;
    auto consider = [&](const Vec& v, const Vec& b) {
        any_root = true;
        Candidate c = assemble(econ, L, Nw * v, Np * v, q0 + Z * b, opts.tol);
        if (!c.failure.empty()) {
            if (first_failure.empty()) first_failure = c.failure;
            return;
        }
        for (const auto& o : valid) {
            const double d = (o.point.prices - c.point.prices).cwiseAbs().maxCoeff() +
                             (o.point.quantities - c.point.quantities).cwiseAbs().maxCoeff() +
                             (o.point.wages - c.point.wages).cwiseAbs().maxCoeff();
            if (d < 1e-7) return;
        }
        valid.push_back(std::move(c));
    };

    if (nb == 0) {
        // everything is linear in v
        const Mat A = jacobian(Vec::Zero(nv), Vec::Zero(0));
        Vec rhs = Vec::Zero(k);
        rhs(0) = 1.0;
        const Vec v = A.completeOrthogonalDecomposition().solve(rhs);
        if ((A * v - rhs).norm() > 1e-9) return infeasible("money conservation fails on this forest");
        consider(v, Vec::Zero(0));
    } else {
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double qscale = std::max(1.0, q0.cwiseAbs().maxCoeff());
        for (int s = 0; s < opts.starts; ++s) {
            Vec v(nv), b(nb);
            for (int t = 0; t < nv; ++t) v(t) = gauss(rng);
            for (int t = 0; t < nb; ++t) b(t) = qscale * gauss(rng);
            const double d = yNw.dot(v);
            if (std::abs(d) > 1e-12) v /= d;
            Vec R = residual(v, b);
            double rn = R.norm();
            for (int step = 0; step < opts.max_steps && rn >= opts.residual_tol; ++step) {
                const Mat Jm = jacobian(v, b);
                const Vec delta = Jm.completeOrthogonalDecomposition().solve(-R);
                double t = 1.0;
                bool moved = false;
                while (t > 1e-12) {
                    const Vec v2 = v + t * delta.head(nv), b2 = b + t * delta.tail(nb);
                    const Vec R2 = residual(v2, b2);
                    if (R2.norm() < rn) {
                        v = v2;
                        b = b2;
                        R = R2;
                        rn = R2.norm();
                        moved = true;
                        break;
                    }
                    t *= opts.damping;
                }
                if (!moved) break;
            }
            if (rn < opts.residual_tol) consider(v, b);
        }
        if (!any_root) {
            res.status = ReconstructStatus::NumericFailure;
            res.reason = "Newton found no root from any start";
            return res;
        }
    }

    if (valid.empty()) return infeasible(first_failure);
    res.status = ReconstructStatus::Feasible;
    res.point = valid.front().point;
    res.solutions = static_cast<int>(valid.size());
    if (opts.normalization.kind != Normalization::Kind::Money) normalize(econ, res.point, opts.normalization);
    return res;
}

}  // namespace closedecon
