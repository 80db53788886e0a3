#pragma once

// Independent reference computations used only by tests. None of these call
// into the solver path they check.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// Root of x^k - x^(-k) = 1/k on [1, 2] by bisection.
inline double eta_bisection(int k, double tol = 1e-13) {
    auto g = [k](double x) { return std::pow(x, k) - std::pow(x, -k) - 1.0 / k; };
    double lo = 1.0, hi = 2.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Midpoint Riemann sum of fn over [a, b].
inline double riemann(const std::function<double(double)>& fn, std::size_t n = 1000000, double a = 0.0,
                      double b = 1.0) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += fn(a + (static_cast<double>(i) + 0.5) * h);
    return s * h;
}

/// int_0^1 exp(t u) du
inline double w_exp_tu(double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; }

/// int_0^1 exp(t u) u^2 du, by parts; the power series sum t^n / (n! (n+3))
/// below |t| = 0.5 where the closed form cancels.
inline double h2_exp_tu_u(double t) {
    if (std::abs(t) < 0.5) {
        double s = 0.0, term = 1.0;
        for (int n = 0; n < 40; ++n) {
            s += term / (n + 3);
            term *= t / (n + 1);
        }
        return s;
    }
    return std::exp(t) * (1.0 / t - 2.0 / (t * t) + 2.0 / (t * t * t)) - 2.0 / (t * t * t);
}

/// Tabulated 8-point Gauss-Legendre rule mapped to [a,b].
inline void gl8(double a, double b, std::vector<double>& x, std::vector<double>& w) {
    static const double xr[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static const double wr[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    x.clear();
    w.clear();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 3; i >= 0; --i) {
        x.push_back(c - h * xr[i]);
        w.push_back(h * wr[i]);
    }
    for (int i = 0; i < 4; ++i) {
        x.push_back(c + h * xr[i]);
        w.push_back(h * wr[i]);
    }
}

/// Composite 8-point rule with `panels` panels on [a,b].
inline void composite_gl8(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    std::vector<double> px, pw;
    for (int p = 0; p < panels; ++p) {
        gl8(a + (b - a) * p / panels, a + (b - a) * (p + 1) / panels, px, pw);
        x.insert(x.end(), px.begin(), px.end());
        w.insert(w.end(), pw.begin(), pw.end());
    }
}

/// Root-bin probabilities of the 3-vertex path (root with two leaf
/// neighbours) under density K(s0,s1) K(s0,s2) g(s1) g(s2), by a full
/// 3-dimensional tensor quadrature (no factorization).
inline std::vector<double> path_root_bins(const std::function<double(double, double)>& K,
                                          const std::function<double(double)>& g, int bins) {
    std::vector<double> ux, uw;
    composite_gl8(0.0, 1.0, 4, ux, uw);
    std::vector<double> gu(ux.size());
    for (std::size_t i = 0; i < ux.size(); ++i) gu[i] = g(ux[i]);

    std::vector<double> mass(bins, 0.0);
    double total = 0.0;
    std::vector<double> tx, tw;
    for (int b = 0; b < bins; ++b) {
        composite_gl8(static_cast<double>(b) / bins, static_cast<double>(b + 1) / bins, 1, tx, tw);
        for (std::size_t it = 0; it < tx.size(); ++it) {
            double inner = 0.0;
            for (std::size_t i = 0; i < ux.size(); ++i) {
                for (std::size_t j = 0; j < ux.size(); ++j) {
                    inner += uw[i] * uw[j] * K(tx[it], ux[i]) * K(tx[it], ux[j]) * gu[i] * gu[j];
                }
            }
            mass[b] += tw[it] * inner;
        }
        total += mass[b];
    }
    for (double& m : mass) m /= total;
    return mass;
}

}  // namespace oracle
