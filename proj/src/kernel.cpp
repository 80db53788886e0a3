#include "cayley/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace cayley {

namespace {

constexpr int kPositivityLattice = 201;

double ipow(double x, int p) {
    double r = 1.0;
    for (int i = 0; i < p; ++i) r *= x;
    return r;
}

double eval_polynomial(const std::vector<Monomial>& terms, double t, double u) {
    double s = 0.0;
    for (const auto& m : terms) s += m.coeff * ipow(t, m.t_power) * ipow(u, m.u_power);
    return s;
}

double eval_tabulated(const TabulatedKernel& tab, double t, double u) {
    const double x = t * static_cast<double>(tab.n_t - 1);
    const double y = u * static_cast<double>(tab.n_u - 1);
    const std::size_t i = std::min(static_cast<std::size_t>(x), tab.n_t - 2);
    const std::size_t j = std::min(static_cast<std::size_t>(y), tab.n_u - 2);
    const double fx = x - static_cast<double>(i);
    const double fy = y - static_cast<double>(j);
    auto v = [&](std::size_t a, std::size_t b) { return tab.values[a * tab.n_u + b]; };
    return (1 - fx) * (1 - fy) * v(i, j) + fx * (1 - fy) * v(i + 1, j) + (1 - fx) * fy * v(i, j + 1) +
           fx * fy * v(i + 1, j + 1);
}

void check_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string(what) + " = " + std::to_string(x) + " outside [0,1]");
    }
}

void check_powers(const std::vector<Monomial>& terms, int min_power) {
    for (const auto& m : terms) {
        if (m.t_power < min_power || m.u_power < min_power) {
            throw std::invalid_argument("monomial exponent below " + std::to_string(min_power));
        }
        if (!std::isfinite(m.coeff)) throw std::invalid_argument("non-finite monomial coefficient");
    }
}

}  // namespace

double PolynomialK1Kernel::coefficient_sum() const {
    double s = 0.0;
    for (const auto& m : terms) s += m.coeff;
    return s;
}

double ExponentialXiKernel::xi_at(double t, double u) const { return eval_polynomial(xi, t, u); }

KernelSpec::KernelSpec(Variant v) : variant_(std::move(v)) {
    const double step = 1.0 / (kPositivityLattice - 1);
    for (int i = 0; i < kPositivityLattice; ++i) {
        for (int j = 0; j < kPositivityLattice; ++j) {
            const double value = (*this)(i * step, j * step);
            if (!(value > 0.0) || !std::isfinite(value)) {
                throw std::invalid_argument(std::string(name()) + " kernel is not strictly positive and finite at (" +
                                            std::to_string(i * step) + ", " + std::to_string(j * step) + ")");
            }
        }
    }
}

KernelSpec KernelSpec::constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant kernel requires c > 0");
    return KernelSpec(ConstantKernel{c});
}

KernelSpec KernelSpec::polynomial_k1(std::vector<Monomial> terms, double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("polynomial kernel requires a > 0");
    check_powers(terms, 1);
    for (const auto& m : terms) {
        if (m.coeff < 0.0) throw std::invalid_argument("polynomial kernel requires c_ij >= 0");
    }
    return KernelSpec(PolynomialK1Kernel{std::move(terms), a});
}

KernelSpec KernelSpec::exponential_xi(double J, double beta, std::vector<Monomial> xi) {
    if (J == 0.0 || !std::isfinite(J)) throw std::invalid_argument("exponential kernel requires J != 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("exponential kernel requires beta > 0");
    check_powers(xi, 0);
    return KernelSpec(ExponentialXiKernel{J, beta, std::move(xi)});
}

KernelSpec KernelSpec::tabulated(std::size_t n_t, std::size_t n_u, std::vector<double> values) {
    if (n_t < 2 || n_u < 2) throw std::invalid_argument("tabulated kernel needs at least 2x2 values");
    if (values.size() != n_t * n_u) throw std::invalid_argument("tabulated kernel value count mismatch");
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("tabulated kernel values must be > 0");
    }
    return KernelSpec(TabulatedKernel{n_t, n_u, std::move(values)});
}

double KernelSpec::operator()(double t, double u) const {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, ConstantKernel>) {
                return k.c;
            } else if constexpr (std::is_same_v<T, PolynomialK1Kernel>) {
                return eval_polynomial(k.terms, t, u) + k.a;
            } else if constexpr (std::is_same_v<T, ExponentialXiKernel>) {
                return std::exp(k.J * k.beta * k.xi_at(t, u));
            } else {
                return eval_tabulated(k, t, u);
            }
        },
        variant_);
}

const char* KernelSpec::name() const {
    switch (variant_.index()) {
        case 0: return "constant";
        case 1: return "polynomial_k1";
        case 2: return "exponential_xi";
        default: return "tabulated";
    }
}

double eval_kernel(const KernelSpec& spec, double t, double u) {
    check_unit(t, "t");
    check_unit(u, "u");
    return spec(t, u);
}

double log_kernel(const KernelSpec& spec, double t, double u) {
    if (const auto* e = spec.as<ExponentialXiKernel>()) return e->J * e->beta * e->xi_at(t, u);
    return std::log(spec(t, u));
}

Bounds kernel_bounds(const KernelSpec& spec, int resolution) {
    if (resolution < 2) throw std::invalid_argument("kernel_bounds requires resolution >= 2");

    if (const auto* c = spec.as<ConstantKernel>()) {
        return Bounds{c->c, c->c, c->c, c->c, resolution, true};
    }
    if (const auto* p = spec.as<PolynomialK1Kernel>()) {
        // Monotone in t and u; the t = 0 row is the constant a.
        return Bounds{p->a, p->coefficient_sum() + p->a, p->a, p->a, resolution, true};
    }

    Bounds b{spec(0.0, 0.0), spec(0.0, 0.0), spec(0.0, 0.0), spec(0.0, 0.0), resolution, false};
    for (int i = 0; i < resolution; ++i) {
        // Exact quotients so that lattice 2r-1 contains lattice r.
        const double t = static_cast<double>(i) / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double u = static_cast<double>(j) / (resolution - 1);
            const double v = spec(t, u);
            b.m = std::min(b.m, v);
            b.M = std::max(b.M, v);
            if (i == 0) {
                b.m0 = std::min(b.m0, v);
                b.M0 = std::max(b.M0, v);
            }
        }
    }
    return b;
}

double eta_threshold(int k) {
    if (k < 2) throw std::invalid_argument("eta_threshold requires k >= 2");
    const double kd = static_cast<double>(k);
    return std::pow((1.0 + std::sqrt(4.0 * kd * kd + 1.0)) / (2.0 * kd), 1.0 / kd);
}

Certificate uniqueness_certificate(const Bounds& bounds, int k) {
    if (k < 2) throw std::invalid_argument("uniqueness certificate requires k >= 2");
    if (!(bounds.m > 0.0) || bounds.M < bounds.m) throw std::invalid_argument("invalid kernel bounds");
    Certificate c;
    c.k = k;
    c.ratio = bounds.M / bounds.m;
    c.gamma1 = std::pow(bounds.m / bounds.M, k);
    c.gamma2 = std::pow(c.ratio, k);
    c.lhs = c.gamma2 - c.gamma1;
    c.bound = 1.0 / k;
    c.eta_k = eta_threshold(k);
    c.pass = c.lhs < c.bound;
    return c;
}

bool k1_example_verdict(const KernelSpec& spec, int k) {
    const auto* p = spec.as<PolynomialK1Kernel>();
    if (p == nullptr) throw std::invalid_argument("k1_example_verdict requires a polynomial_k1 kernel");
    return p->coefficient_sum() / p->a <= eta_threshold(k) - 1.0;
}

}  // namespace cayley
