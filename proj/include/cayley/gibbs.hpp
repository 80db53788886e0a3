#pragma once

// The translation-invariant splitting Gibbs measure on a finite ball of the
// Cayley tree, built from a fixed point f of A_k.
//
// With boundary weight f on the outer sphere, integrating out a vertex's k
// children multiplies it by (omega(f) f(t)^(1/k))^k, so every subtree rooted
// at a non-root vertex carries weight f. Consequently
//
//   root marginal      nu(t)    ~ f(t)^((k+1)/k)      (root has k+1 children)
//   child transition   p(u | t) ~ K(t,u) f(u)
//
// These closed forms are checked against a brute-force importance-sampling
// estimate of the finite-volume distribution.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cayley/grid.hpp"
#include "cayley/kernel.hpp"
#include "cayley/operators.hpp"

namespace cayley {

/// Ball V_n of radius `depth` in the Cayley tree of order k.
struct TreeShape {
    int k = 2;
    int depth = 1;

    std::size_t vertex_count() const;
    void validate() const;
};

/// Vertices in breadth-first order; vertex 0 is the root.
class Tree {
public:
    explicit Tree(TreeShape shape);

    const TreeShape& shape() const { return shape_; }
    std::size_t size() const { return parent_.size(); }
    /// -1 for the root
    int parent(std::size_t v) const { return parent_[v]; }
    int level(std::size_t v) const { return level_[v]; }
    /// Dotted child-index path from the root, e.g. "0.2.1".
    const std::string& path(std::size_t v) const { return path_[v]; }
    /// Vertices on the outer sphere W_n.
    const std::vector<std::size_t>& boundary() const { return boundary_; }

private:
    TreeShape shape_;
    std::vector<int> parent_;
    std::vector<int> level_;
    std::vector<std::string> path_;
    std::vector<std::size_t> boundary_;
};

struct TreeAssignment {
    TreeShape shape;
    std::vector<double> spins;  // indexed like Tree
};

/// Energy of a single bond: -J xi(s,t) for exponential kernels, otherwise
/// -(1/beta) ln K(s,t).
double bond_energy(const KernelSpec& spec, double s, double t, double beta = 1.0);

/// Sum of bond energies over the edges of the ball.
double energy(const TreeAssignment& assignment, const KernelSpec& spec, double beta = 1.0);

struct DensityOnGrid {
    GridPtr grid;
    std::vector<double> values;  // at the nodes
    double value_at_zero = 0.0;
    double normalization = 1.0;  // divisor applied to the unnormalized density

    double integral() const { return integrate(*grid, values); }
};

/// sup |A_k f - f|
double ti_residual(const GridFunction& f, const DiscretizedKernel& dk, int k);

/// Root marginal nu ~ f^exponent with exponent (k+1)/k unless overridden.
/// Throws std::invalid_argument when f is not a fixed point (residual > 1e-6).
DensityOnGrid root_marginal(const GridFunction& f, const DiscretizedKernel& dk, int k,
                            std::optional<double> exponent = std::nullopt);

/// p(u | t) ~ K(t,u) f(u); throws std::domain_error for t outside [0,1].
DensityOnGrid child_transition(const GridFunction& f, const DiscretizedKernel& dk, double parent_spin);

/// Probabilities of `bins` equal-width bins under nu ~ f_ext^exponent, where
/// f_ext is the Nystrom extension of f. Exponent defaults to (k+1)/k.
std::vector<double> root_marginal_bins(const GridFunction& f, const DiscretizedKernel& dk, int k, int bins,
                                       std::optional<double> exponent = std::nullopt);

/// Inverse-CDF sampling from a piecewise-linear CDF whose knots are 0, the
/// grid nodes and 1 (density held constant after the last node).
class InverseCdf {
public:
    explicit InverseCdf(const DensityOnGrid& density);
    /// uniform in [0,1) -> sample in [0,1]
    double operator()(double uniform) const;

private:
    std::vector<double> knots_;
    std::vector<double> cdf_;
};

/// Exact ancestral sampling: root from nu, children from p(. | parent).
/// Deterministic per seed; batches of samples use derived seeds and may be
/// generated concurrently.
std::vector<TreeAssignment> sample_tree(const GridFunction& f, const DiscretizedKernel& dk, const TreeShape& shape,
                                        std::size_t n_samples, std::uint64_t seed);

struct Histogram {
    std::vector<double> edges;          // bins + 1 edges over [0,1]
    std::vector<std::uint64_t> counts;  // raw (unweighted) counts
    std::vector<double> probabilities;
    std::vector<double> std_errors;
    std::size_t n = 0;
    double ess = 0.0;  // effective sample size (equals n when unweighted)
    bool low_ess = false;
};

inline constexpr double kMinEffectiveSampleSize = 100.0;

/// Empirical histogram of root spins with binomial standard errors.
Histogram root_histogram(const std::vector<TreeAssignment>& samples, int bins = 20);

/// Self-normalized importance-sampling estimate of the root marginal of the
/// finite-volume distribution on V_n with weight
///   prod_edges K(s_x, s_y) * prod_{x in W_n} f(s_x)
/// under a uniform proposal on [0,1]^{V_n}. Requires depth <= 2, k <= 3.
Histogram mc_finite_volume_marginal(const GridFunction& f, const DiscretizedKernel& dk, const TreeShape& shape,
                                    std::size_t n_mc, std::uint64_t seed, int bins = 20);

struct MarginalComparison {
    std::vector<double> expected;
    std::vector<double> observed;
    std::vector<double> z_scores;
    double sup_abs_z = 0.0;
};

/// Per-bin z = (observed - expected) / std_error.
MarginalComparison compare_marginal(const Histogram& observed, const std::vector<double>& expected);

/// Per-bin z between two independent histograms.
MarginalComparison compare_histograms(const Histogram& a, const Histogram& b);

}  // namespace cayley
