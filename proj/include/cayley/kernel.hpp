#pragma once

// Interaction kernels K(t,u) > 0 on [0,1]^2, their extrema and the
// uniqueness certificate for translation-invariant fixed points.

#include <cstddef>
#include <variant>
#include <vector>

namespace cayley {

/// One term coeff * t^t_power * u^u_power of a bivariate polynomial.
struct Monomial {
    int t_power = 0;
    int u_power = 0;
    double coeff = 0.0;
};

struct ConstantKernel {
    double c = 1.0;
};

/// K(t,u) = sum c_ij t^i u^j + a with i, j >= 1, c_ij >= 0, a > 0.
struct PolynomialK1Kernel {
    std::vector<Monomial> terms;
    double a = 1.0;

    double coefficient_sum() const;
};

/// K(t,u) = exp(J * beta * xi(t,u)) with xi a polynomial.
struct ExponentialXiKernel {
    double J = 1.0;
    double beta = 1.0;
    std::vector<Monomial> xi;

    double xi_at(double t, double u) const;
};

/// Values on a uniform (n_t x n_u) lattice of [0,1]^2, row-major in t,
/// bilinearly interpolated.
struct TabulatedKernel {
    std::size_t n_t = 0;
    std::size_t n_u = 0;
    std::vector<double> values;
};

class KernelSpec {
public:
    using Variant = std::variant<ConstantKernel, PolynomialK1Kernel, ExponentialXiKernel, TabulatedKernel>;

    // Factories validate the variant parameters and positivity on a
    // 201x201 sample lattice; they throw std::invalid_argument.
    static KernelSpec constant(double c);
    static KernelSpec polynomial_k1(std::vector<Monomial> terms, double a);
    static KernelSpec exponential_xi(double J, double beta, std::vector<Monomial> xi);
    static KernelSpec tabulated(std::size_t n_t, std::size_t n_u, std::vector<double> values);

    /// Unchecked evaluation; callers guarantee (t,u) in [0,1]^2.
    double operator()(double t, double u) const;

    const Variant& variant() const { return variant_; }
    const char* name() const;

    template <class T>
    const T* as() const { return std::get_if<T>(&variant_); }

private:
    explicit KernelSpec(Variant v);

    Variant variant_;
};

/// K(t,u); throws std::domain_error when t or u is outside [0,1].
double eval_kernel(const KernelSpec& spec, double t, double u);

/// Natural logarithm of K, used for energies.
double log_kernel(const KernelSpec& spec, double t, double u);

struct Bounds {
    double m = 0.0;   // min over [0,1]^2
    double M = 0.0;   // max over [0,1]^2
    double m0 = 0.0;  // min of u -> K(0,u)
    double M0 = 0.0;  // max of u -> K(0,u)
    int resolution = 0;
    bool exact = false;
};

inline constexpr int kDefaultBoundsResolution = 1001;

/// Analytic extrema for Constant and PolynomialK1, otherwise extrema over a
/// resolution x resolution uniform lattice (exact == false).
Bounds kernel_bounds(const KernelSpec& spec, int resolution = kDefaultBoundsResolution);

struct Certificate {
    int k = 2;
    double gamma1 = 0.0;  // (m/M)^k
    double gamma2 = 0.0;  // (M/m)^k
    double lhs = 0.0;     // gamma2 - gamma1
    double bound = 0.0;   // 1/k
    double ratio = 0.0;   // M/m
    double eta_k = 0.0;
    bool pass = false;    // lhs < bound, strictly
};

Certificate uniqueness_certificate(const Bounds& bounds, int k);

/// eta_k = ((1 + sqrt(4k^2 + 1)) / (2k))^(1/k), the M/m threshold of the
/// certificate. Requires k >= 2.
double eta_threshold(int k);

/// Closed-form verdict for the polynomial family: sum(c_ij)/a <= eta_k - 1.
/// Throws std::invalid_argument for other variants.
bool k1_example_verdict(const KernelSpec& spec, int k);

}  // namespace cayley
