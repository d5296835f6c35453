#pragma once

#include "closedecon/ccg.hpp"
#include "closedecon/equilibrium.hpp"
#include "closedecon/io.hpp"
#include "closedecon/model.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

namespace support {

using closedecon::Mat;
using closedecon::Vec;

inline std::string fixture(const std::string& name) { return std::string(CLOSEDECON_FIXTURES) + "/" + name; }

inline closedecon::ParametricFamily family(const std::string& name) { return closedecon::load_scenario(fixture(name)); }
inline closedecon::Economy economy(const std::string& name) { return family(name).base; }

inline Vec vec(std::initializer_list<double> xs) {
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) v(k++) = x;
    return v;
}

inline Mat mat(std::initializer_list<std::initializer_list<double>> rows) {
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double x : row) m(r, c++) = x;
        ++r;
    }
    return m;
}

inline double maxdiff(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return INFINITY;
    return (a - b).cwiseAbs().maxCoeff();
}

inline double maxdiff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
    return (a - b).cwiseAbs().maxCoeff();
}

// Soap market allocations on its five-edge forest, written out by hand from the zero-profit
// and money-flow identities (p3 = 1, p2 = beta, p1 = alpha*beta/2).
struct SoapOracle {
    double x11, x21, x22, x32, x33;
    explicit SoapOracle(double a, double b)
        : x11(10 - 5 / a + 5 / (4 * a * b)), x21(5 / a - 5 / (4 * a * b)), x22(7.5 - 35 / (8 * b)), x32(35 / (8 * b)), x33(8.125) {}
    Vec per_capita() const {
        return vec({1.5 * x11 / 5, (1.5 * x21 + 2 * x22) / 20, (2 * x32 + x33) / 100});
    }
};

inline bool in_soap_zone(double a, double b) { return 8 * a * b - 4 * b + 1 > 0 && 4 * b - 1 > 0 && 60 * b - 35 > 0; }

// Closed forms for the 2x2 instance T=[[1/4,0],[1/4,1]], Y=[2,4], Ut = ones.
struct ZoneOracle {
    std::string forest;
    double ratio;
    Vec b;
    double w2;  // money share of class 2
};

inline ZoneOracle two_by_two_oracle(double a, double be) {
    if (be <= 0.25) return {"Forest-5", be, vec({0, 4}), 1.0};
    if (a <= 0.5 && be >= 0.5) return {"Forest-4", 0.5, vec({2, 8}), 2.0 / 3};
    if (a > be) return {"Forest-1", be, vec({8 - 2 / be, 2 + 2 / be}), 2 / (1 + 4 * be)};
    if (be < 0.5) return {"Forest-3", be, vec({8 * be - 2, 12 - 8 * be}), 2 / (1 + 4 * be)};
    return {"Forest-2", a, vec({10 - 4 / a, 4 / a}), 2 / (1 + 4 * a)};
}

}  // namespace support
