#pragma once

// Fixed points of A_k, the Hammerstein eigenproblem H_k h = lambda h and the
// multi-start uniqueness probe.

#include <cstdint>
#include <variant>
#include <vector>

#include "cayley/grid.hpp"
#include "cayley/kernel.hpp"
#include "cayley/operators.hpp"

namespace cayley {

struct InitFlat {};
struct InitRandom {
    std::uint64_t seed = 0;
};
struct InitGiven {
    GridFunction f;
};
using InitialGuess = std::variant<InitFlat, InitRandom, InitGiven>;

struct SolveOptions {
    double tol = 1e-12;
    int max_iter = 10000;
    double damping = 1.0;
    InitialGuess init = InitFlat{};

    void validate() const;
};

struct SolveReport {
    GridFunction solution;
    double residual = 0.0;  // sup |T f - f| for the operator T being solved
    int iterations = 0;
    bool converged = false;
    double omega_value = 0.0;  // omega(solution)
    double final_damping = 1.0;
};

struct Eigenpair {
    double lambda = 0.0;
    GridFunction h;
};

inline constexpr double kClusterTolerance = 1e-8;

struct ProbeReport {
    Certificate certificate;
    int n_starts = 0;
    double max_pairwise_distance = 0.0;  // over converged starts
    std::vector<SolveReport> per_start;
    bool all_converged = false;
    double cluster_tol = kClusterTolerance;
    bool unique_within_tol = false;  // max_pairwise_distance <= cluster_tol
};

/// Draws node values log-uniformly inside the A_k range bounds and pins the
/// value at zero to 1. Deterministic for a given seed.
GridFunction random_start(const DiscretizedKernel& dk, int k, std::uint64_t seed);

/// Damped Picard iteration f <- (1 - a) f + a A_k f. The damping factor is
/// halved (not below 1/16) whenever the residual has
/// grown on three consecutive steps. Non-convergence is reported, not thrown.
SolveReport solve_Ak(const DiscretizedKernel& dk, int k, const SolveOptions& opts = {});

/// k = 1: power iteration f <- W f / (W f)(0); omega_value is the leading
/// eigenvalue of W.
SolveReport solve_k1(const DiscretizedKernel& dk, const SolveOptions& opts = {});

/// (omega(f), f^(1/k)) for a fixed point f of A_k.
Eigenpair convert_Ak_to_Hk(const GridFunction& f, const DiscretizedKernel& dk, int k);
/// h^k
GridFunction convert_Hk_to_Ak(const Eigenpair& pair, int k);

/// (target, (target/lambda)^(1/(k-1)) h). The result is not renormalized to
/// h(0) = 1.
Eigenpair rescale_eigenpair(const Eigenpair& pair, double target_lambda, int k);

/// sup |H_k h - lambda h|
double eigen_residual(const DiscretizedKernel& dk, const Eigenpair& pair, int k);

/// Solves H_k f = f through A_k, the eigenpair conversion and a rescale to
/// lambda = 1. `residual` in the report is sup |H_k f - f|.
SolveReport solve_Hk_fixed_point(const DiscretizedKernel& dk, int k, const SolveOptions& opts = {});

/// Runs solve_Ak from n_starts random starts (start i seeded from (seed, i))
/// concurrently and clusters the converged solutions.
ProbeReport uniqueness_probe(const DiscretizedKernel& dk, int k, int n_starts, std::uint64_t seed,
                             const SolveOptions& opts = {}, double cluster_tol = kClusterTolerance);

}  // namespace cayley
