#include "closedecon/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace closedecon {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

struct Context {
    int m = 0, n = 0;
    std::vector<bool> funded, active, useful;
    double money = 0.0;
};

Context make_context(const FisherInstance& inst) {
    Context c;
    c.m = static_cast<int>(inst.utility.rows());
    c.n = static_cast<int>(inst.utility.cols());
    if (inst.budgets.size() != c.m || inst.quantities.size() != c.n)
        throw Error(ErrorCode::DimensionMismatch, "Fisher instance dimensions disagree");
    c.funded.assign(c.m, false);
    c.active.assign(c.n, false);
    c.useful.assign(c.n, false);
    for (int i = 0; i < c.m; ++i) {
        c.funded[i] = inst.budgets(i) > 0;
        if (c.funded[i]) c.money += inst.budgets(i);
    }
    for (int j = 0; j < c.n; ++j) c.active[j] = inst.quantities(j) > 0;
    for (int j = 0; j < c.n; ++j)
        for (int i = 0; i < c.m && c.active[j]; ++i)
            if (c.funded[i] && inst.utility(i, j) > 0) c.useful[j] = true;
    for (int i = 0; i < c.m; ++i) {
        if (!c.funded[i]) continue;
        bool any = false;
        for (int j = 0; j < c.n; ++j) any = any || (c.useful[j] && inst.utility(i, j) > 0);
        if (!any)
            throw Error(ErrorCode::NoUsefulGoods, "funded buyer " + std::to_string(i + 1) + " values no available good");
    }
    return c;
}

// Goods nobody with money wants go at price zero to an unfunded buyer.
void place_useless_goods(const FisherInstance& inst, const Context& c, Mat& X) {
    for (int j = 0; j < c.n; ++j) {
        if (!c.active[j] || c.useful[j]) continue;
        int pick = -1;
        for (int i = 0; i < c.m && pick < 0; ++i)
            if (!c.funded[i] && inst.utility(i, j) > 0) pick = i;
        for (int i = 0; i < c.m && pick < 0; ++i)
            if (!c.funded[i]) pick = i;
        if (pick >= 0) X(pick, j) = inst.quantities(j);
    }
}

enum class SnapOutcome { Ok, Cyclic, Failed };

// Tree solve on the MBB graph read off approximate unit prices.
SnapOutcome try_snap(const FisherInstance& inst, const Context& c, const Vec& approx, double mbb_tol, Vec& prices,
                     Mat& X) {
    const Mat& U = inst.utility;
    std::vector<Edge> edges = mbb_edges(U, approx, inst.budgets, c.useful, mbb_tol);
    if (has_cycle(edges, c.m, c.n)) return SnapOutcome::Cyclic;

    // adjacency, vertex ids: buyers 0..m-1, goods m..m+n-1
    const int V = c.m + c.n;
    std::vector<std::vector<int>> adj(V);  // edge indices
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
        adj[edges[e].first].push_back(e);
        adj[c.m + edges[e].second].push_back(e);
    }
    for (int j = 0; j < c.n; ++j)
        if (c.useful[j] && adj[c.m + j].empty()) return SnapOutcome::Failed;

    prices = Vec::Zero(c.n);
    Vec rel = Vec::Zero(c.n);
    Vec bbrel = Vec::Zero(c.m);
    std::vector<int> comp(V, -1);
    int ncomp = 0;
    for (int j0 = 0; j0 < c.n; ++j0) {
        if (!c.useful[j0] || comp[c.m + j0] >= 0) continue;
        std::vector<int> stack{c.m + j0};
        comp[c.m + j0] = ncomp;
        rel(j0) = 1.0;
        std::vector<int> members;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (int e : adj[v]) {
                const auto [i, j] = edges[e];
                const int other = v < c.m ? c.m + j : i;
                if (comp[other] >= 0) continue;
                comp[other] = ncomp;
                if (v >= c.m) bbrel(i) = U(i, j) / rel(j);
                else rel(j) = U(i, j) / bbrel(i);
                stack.push_back(other);
            }
        }
        double money = 0.0, value = 0.0;
        for (int v : members) {
            if (v < c.m) money += inst.budgets(v);
            else value += rel(v - c.m) * inst.quantities(v - c.m);
        }
        if (!(money > 0)) return SnapOutcome::Failed;
        const double scale = money / value;
        for (int v : members)
            if (v >= c.m) prices(v - c.m) = scale * rel(v - c.m);
        ++ncomp;
    }
    for (int i = 0; i < c.m; ++i)
        if (c.funded[i] && comp[i] < 0) return SnapOutcome::Failed;

    // leaf peeling for spending on each edge
    Vec remaining(V);
    for (int i = 0; i < c.m; ++i) remaining(i) = c.funded[i] ? inst.budgets(i) : 0.0;
    for (int j = 0; j < c.n; ++j) remaining(c.m + j) = c.useful[j] ? prices(j) * inst.quantities(j) : 0.0;
    std::vector<int> degree(V, 0);
    for (const auto& [i, j] : edges) {
        ++degree[i];
        ++degree[c.m + j];
    }
    std::vector<bool> used(edges.size(), false);
    std::vector<double> flow(edges.size(), 0.0);
    std::vector<int> leaves;
    for (int v = 0; v < V; ++v)
        if (degree[v] == 1) leaves.push_back(v);
    while (!leaves.empty()) {
        const int v = leaves.back();
        leaves.pop_back();
        if (degree[v] != 1) continue;
        int e = -1;
        for (int k : adj[v])
            if (!used[k]) e = k;
        used[e] = true;
        flow[e] = remaining(v);
        const auto [i, j] = edges[e];
        const int other = v < c.m ? c.m + j : i;
        remaining(other) -= flow[e];
        remaining(v) = 0.0;
        --degree[v];
        if (--degree[other] == 1) leaves.push_back(other);
    }
    const double eps = 1e-12 * std::max(1.0, c.money);
    X = Mat::Zero(c.m, c.n);
    for (size_t e = 0; e < edges.size(); ++e) {
        if (flow[e] < -eps) return SnapOutcome::Failed;
        const auto [i, j] = edges[e];
        X(i, j) = std::max(0.0, flow[e]) / prices(j);
    }
    // exact prices must keep every buyer on its MBB goods
    for (int i = 0; i < c.m; ++i) {
        if (!c.funded[i]) continue;
        double bb = 0.0;
        for (int j = 0; j < c.n; ++j)
            if (c.useful[j] && prices(j) > 0) bb = std::max(bb, U(i, j) / prices(j));
        for (const auto& [ei, ej] : edges)
            if (ei == i && U(i, ej) / prices(ej) < bb * (1.0 - 1e-9)) return SnapOutcome::Failed;
    }
    return SnapOutcome::Ok;
}

}  // namespace

std::vector<Edge> mbb_edges(const Mat& U, const Vec& prices, const Vec& budgets, const std::vector<bool>& goods,
                            double rel_tol) {
    std::vector<Edge> edges;
    for (int i = 0; i < U.rows(); ++i) {
        if (!(budgets(i) > 0)) continue;
        double bb = 0.0;
        for (int j = 0; j < U.cols(); ++j)
            if (goods[j] && prices(j) > 0) bb = std::max(bb, U(i, j) / prices(j));
        if (!(bb > 0)) continue;
        for (int j = 0; j < U.cols(); ++j)
            if (goods[j] && prices(j) > 0 && U(i, j) > 0 && U(i, j) / prices(j) >= bb * (1.0 - rel_tol))
                edges.emplace_back(i, j);
    }
    return edges;
}

bool has_cycle(const std::vector<Edge>& edges, int m, int n) {
    UnionFind uf(m + n);
    for (const auto& [i, j] : edges)
        if (!uf.unite(i, m + j)) return true;
    return false;
}

FisherSolution solve_fisher(const FisherInstance& inst, double tol) {
    FisherOptions o;
    o.mbb_tol = tol;
    return solve_fisher(inst, o);
}

FisherSolution solve_fisher(const FisherInstance& inst, const FisherOptions& opts) {
    const Context c = make_context(inst);
    const Mat& U = inst.utility;
    FisherSolution sol;
    sol.prices = Vec::Zero(c.n);
    sol.allocation = Mat::Zero(c.m, c.n);
    sol.bang_per_buck = Vec::Zero(c.m);

    auto finish = [&](FisherSolution& s) {
        place_useless_goods(inst, c, s.allocation);
        s.bang_per_buck = compute_bang_per_buck(U, s.prices, inst.budgets);
        s.mbb_graph = mbb_edges(U, s.prices, inst.budgets, c.useful, opts.mbb_tol);
        s.generic = !has_cycle(s.mbb_graph, c.m, c.n);
        return s;
    };

    if (!(c.money > 0)) return finish(sol);

    // utilities per unit of whole supply, bids start proportional to them
    Mat a = Mat::Zero(c.m, c.n);
    for (int i = 0; i < c.m; ++i)
        for (int j = 0; j < c.n; ++j)
            if (c.funded[i] && c.useful[j]) a(i, j) = U(i, j) * inst.quantities(j);
    Mat bids = Mat::Zero(c.m, c.n);
    for (int i = 0; i < c.m; ++i)
        if (c.funded[i]) bids.row(i) = inst.budgets(i) * a.row(i) / a.row(i).sum();

    auto unit_prices = [&](const Mat& b) {
        Vec p = Vec::Zero(c.n);
        for (int j = 0; j < c.n; ++j)
            if (c.useful[j]) p(j) = b.col(j).sum() / inst.quantities(j);
        return p;
    };

    bool converged = false;
    Mat next = Mat::Zero(c.m, c.n);
    for (long round = 0; round < opts.max_rounds; ++round) {
        sol.rounds = round;
        if (round % opts.snap_every == 0) {
            Vec p;
            Mat X;
            if (try_snap(inst, c, unit_prices(bids), opts.mbb_tol, p, X) == SnapOutcome::Ok) {
                sol.prices = p;
                sol.allocation = X;
                sol.snapped = true;
                return finish(sol);
            }
        }
        const Vec total = bids.colwise().sum().transpose();
        double delta = 0.0;
        for (int i = 0; i < c.m; ++i) {
            if (!c.funded[i]) continue;
            double util = 0.0;
            for (int j = 0; j < c.n; ++j)
                if (bids(i, j) > 0) util += a(i, j) * bids(i, j) / total(j);
            for (int j = 0; j < c.n; ++j) {
                next(i, j) = bids(i, j) > 0 ? inst.budgets(i) * a(i, j) * bids(i, j) / total(j) / util : 0.0;
                delta = std::max(delta, std::abs(next(i, j) - bids(i, j)) / inst.budgets(i));
            }
        }
        bids.swap(next);
        if (delta < opts.bid_tol) {
            converged = true;
            break;
        }
    }

    Vec p;
    Mat X;
    const Vec approx = unit_prices(bids);
    const SnapOutcome out = try_snap(inst, c, approx, opts.mbb_tol, p, X);
    if (out == SnapOutcome::Ok) {
        sol.prices = p;
        sol.allocation = X;
        sol.snapped = true;
        return finish(sol);
    }
    if (!converged) throw Error(ErrorCode::NonConvergence, "proportional response did not converge");

    // Numeric allocation: keep only MBB bids, rescaled so each budget is spent exactly.
    const auto edges = mbb_edges(U, approx, inst.budgets, c.useful, opts.mbb_tol);
    Mat kept = Mat::Zero(c.m, c.n);
    for (const auto& [i, j] : edges) kept(i, j) = bids(i, j);
    for (int i = 0; i < c.m; ++i) {
        const double s = kept.row(i).sum();
        if (c.funded[i] && s > 0) kept.row(i) *= inst.budgets(i) / s;
    }
    sol.prices = unit_prices(kept);
    for (int i = 0; i < c.m; ++i)
        for (int j = 0; j < c.n; ++j)
            if (kept(i, j) > 0) sol.allocation(i, j) = kept(i, j) / sol.prices(j);
    return finish(sol);
}

Vec price_unproduced(const FisherInstance& inst, const FisherSolution& sol) {
    Vec p = sol.prices;
    for (int j = 0; j < p.size(); ++j) {
        if (inst.quantities(j) > 0) continue;
        double best = 0.0;
        for (int i = 0; i < inst.utility.rows(); ++i)
            if (inst.budgets(i) > 0 && sol.bang_per_buck(i) > 0)
                best = std::max(best, inst.utility(i, j) / sol.bang_per_buck(i));
        p(j) = best;
    }
    return p;
}

CheckReport check_fisher(const FisherInstance& inst, const Vec& p, const Mat& X, double tol) {
    CheckReport r;
    const int m = static_cast<int>(inst.utility.rows()), n = static_cast<int>(inst.utility.cols());
    if (p.size() != n || X.rows() != m || X.cols() != n || inst.budgets.size() != m || inst.quantities.size() != n) {
        r.add("dimension mismatch");
        return r;
    }
    auto near = [tol](double a, double b) { return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)}); };
    for (int j = 0; j < n; ++j) {
        if (p(j) < -tol) r.add("negative price for good " + std::to_string(j + 1));
        const double sold = X.col(j).sum();
        const double q = inst.quantities(j);
        if (q > 0) {
            const bool free_good = p(j) <= tol;
            if (free_good ? sold > q + tol * std::max(1.0, q) : !near(sold, q)) {
                std::ostringstream os;
                os << "good " << j + 1 << " does not clear: sold " << sold << " of " << q;
                r.add(os.str());
            }
        } else if (sold > tol) {
            r.add("unproduced good " + std::to_string(j + 1) + " is allocated");
        }
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j)
            if (X(i, j) < -tol) r.add("negative allocation");
        const double spent = p.dot(X.row(i).transpose());
        if (!near(spent, inst.budgets(i))) {
            std::ostringstream os;
            os << "buyer " << i + 1 << " spends " << spent << " of budget " << inst.budgets(i);
            r.add(os.str());
        }
        if (!(inst.budgets(i) > tol)) continue;
        double bb = 0.0;
        for (int j = 0; j < n; ++j) {
            if (p(j) > tol) bb = std::max(bb, inst.utility(i, j) / p(j));
            else if (inst.utility(i, j) > 0) r.add("buyer " + std::to_string(i + 1) + " faces free good " + std::to_string(j + 1));
        }
        for (int j = 0; j < n; ++j)
            if (X(i, j) > tol && p(j) > tol && inst.utility(i, j) / p(j) < bb * (1.0 - tol)) {
                std::ostringstream os;
                os << "buyer " << i + 1 << " buys good " << j + 1 << " off its bang-per-buck set";
                r.add(os.str());
            }
    }
    return r;
}

BangPerBuck bang_per_buck(const Vec& u, const Vec& p, double rel_tol) {
    BangPerBuck out;
    bool defined = false;
    for (int j = 0; j < u.size(); ++j)
        if (p(j) > 0 && u(j) > 0) {
            out.value = std::max(out.value, u(j) / p(j));
            defined = true;
        }
    if (!defined) throw Error(ErrorCode::UndefinedBB, "no priced good with positive utility");
    for (int j = 0; j < u.size(); ++j)
        if (p(j) > 0 && u(j) > 0 && u(j) / p(j) >= out.value * (1.0 - rel_tol)) out.argmax.push_back(j);
    return out;
}

}  // namespace closedecon
