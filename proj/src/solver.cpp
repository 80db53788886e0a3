#include "cayley/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <stdexcept>

#include "cayley/random.hpp"

namespace cayley {

namespace {

constexpr double kMinDamping = 1.0 / 16.0;
constexpr int kIncreasesBeforeHalving = 3;

GridFunction initial_guess(const DiscretizedKernel& dk, int k, const InitialGuess& init) {
    if (std::holds_alternative<InitFlat>(init)) return constant_function(dk.grid(), 1.0);
    if (const auto* r = std::get_if<InitRandom>(&init)) return random_start(dk, k, r->seed);
    const auto& given = std::get<InitGiven>(init).f;
    if (!given.grid) throw std::invalid_argument("initial guess without grid");
    require_same_grid(*dk.grid(), *given.grid);
    if (!given.strictly_positive()) throw std::invalid_argument("initial guess must be strictly positive");
    return given;
}

void blend(GridFunction& f, const GridFunction& g, double a) {
    for (std::size_t i = 0; i < f.size(); ++i) f.values[i] = (1.0 - a) * f.values[i] + a * g.values[i];
    f.value_at_zero = (1.0 - a) * f.value_at_zero + a * g.value_at_zero;
}

}  // namespace

void SolveOptions::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("solver tol must be > 0");
    if (max_iter < 1) throw std::invalid_argument("solver max_iter must be >= 1");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("solver damping must be in (0,1]");
}

GridFunction random_start(const DiscretizedKernel& dk, int k, std::uint64_t seed) {
    const RangeBounds r = ak_range_bounds(kernel_bounds(dk.spec()), k);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(std::log(r.lower), std::log(r.upper));
    std::vector<double> v(dk.size());
    for (double& x : v) x = std::exp(unit(rng));
    return GridFunction(dk.grid(), std::move(v), 1.0);
}

SolveReport solve_Ak(const DiscretizedKernel& dk, int k, const SolveOptions& opts) {
    if (k < 1) throw std::invalid_argument("solve_Ak requires k >= 1");
    opts.validate();

    SolveReport rep;
    GridFunction f = initial_guess(dk, k, opts.init);
    double alpha = opts.damping;
    const double floor = std::min(kMinDamping, opts.damping);
    double previous = INFINITY;
    int increases = 0;

    for (int it = 1; it <= opts.max_iter; ++it) {
        const GridFunction g = apply_Ak(dk, f, k);
        const double r = sup_distance(g, f);
        rep.iterations = it;
        rep.residual = r;
        if (r <= opts.tol) {
            rep.converged = true;
            break;
        }
        increases = (r > previous) ? increases + 1 : 0;
        if (increases >= kIncreasesBeforeHalving) {
            alpha = std::max(alpha / 2.0, floor);
            increases = 0;
        }
        previous = r;
        blend(f, g, alpha);
    }
    if (!rep.converged) rep.residual = sup_distance(apply_Ak(dk, f, k), f);
    rep.omega_value = omega(dk, f);
    rep.final_damping = alpha;
    rep.solution = std::move(f);
    return rep;
}

SolveReport solve_k1(const DiscretizedKernel& dk, const SolveOptions& opts) {
    opts.validate();
    SolveReport rep;
    GridFunction f = initial_guess(dk, 1, opts.init);
    for (int it = 1; it <= opts.max_iter; ++it) {
        GridFunction g = apply_W(dk, f);
        const double lambda = g.value_at_zero;
        if (!(lambda > 0.0)) throw std::invalid_argument("solve_k1: (Wf)(0) is not positive");
        for (double& v : g.values) v /= lambda;
        g.value_at_zero = 1.0;
        rep.iterations = it;
        rep.residual = sup_distance(g, f);
        f = std::move(g);
        if (rep.residual <= opts.tol) {
            rep.converged = true;
            break;
        }
    }
    rep.omega_value = omega(dk, f);
    rep.residual = sup_distance(apply_Ak(dk, f, 1), f);
    rep.converged = rep.converged || rep.residual <= opts.tol;
    rep.solution = std::move(f);
    return rep;
}

Eigenpair convert_Ak_to_Hk(const GridFunction& f, const DiscretizedKernel& dk, int k) {
    if (k < 2) throw std::invalid_argument("convert_Ak_to_Hk requires k >= 2");
    if (!f.strictly_positive()) throw std::invalid_argument("convert_Ak_to_Hk requires a strictly positive f");
    Eigenpair pair{omega(dk, f), f};
    const double inv_k = 1.0 / k;
    for (double& v : pair.h.values) v = std::pow(v, inv_k);
    pair.h.value_at_zero = std::pow(pair.h.value_at_zero, inv_k);
    return pair;
}

GridFunction convert_Hk_to_Ak(const Eigenpair& pair, int k) {
    if (k < 1) throw std::invalid_argument("convert_Hk_to_Ak requires k >= 1");
    GridFunction f = pair.h;
    for (double& v : f.values) v = std::pow(v, k);
    f.value_at_zero = std::pow(f.value_at_zero, k);
    return f;
}

Eigenpair rescale_eigenpair(const Eigenpair& pair, double target_lambda, int k) {
    if (k < 2) throw std::invalid_argument("rescale_eigenpair requires k >= 2");
    if (!(target_lambda > 0.0)) throw std::invalid_argument("rescale_eigenpair requires target_lambda > 0");
    if (!(pair.lambda > 0.0)) throw std::invalid_argument("rescale_eigenpair requires a positive eigenvalue");
    const double s = std::pow(target_lambda / pair.lambda, 1.0 / (k - 1));
    Eigenpair out{target_lambda, pair.h};
    for (double& v : out.h.values) v *= s;
    out.h.value_at_zero *= s;
    return out;
}

double eigen_residual(const DiscretizedKernel& dk, const Eigenpair& pair, int k) {
    const GridFunction hk = apply_Hk(dk, pair.h, k);
    double r = std::abs(hk.value_at_zero - pair.lambda * pair.h.value_at_zero);
    for (std::size_t i = 0; i < hk.size(); ++i) r = std::max(r, std::abs(hk.values[i] - pair.lambda * pair.h.values[i]));
    return r;
}

SolveReport solve_Hk_fixed_point(const DiscretizedKernel& dk, int k, const SolveOptions& opts) {
    if (k < 2) throw std::invalid_argument("solve_Hk_fixed_point requires k >= 2");
    SolveReport rep = solve_Ak(dk, k, opts);
    const Eigenpair unit = rescale_eigenpair(convert_Ak_to_Hk(rep.solution, dk, k), 1.0, k);
    rep.residual = eigen_residual(dk, unit, k);
    rep.solution = unit.h;
    rep.omega_value = omega(dk, rep.solution);
    return rep;
}

ProbeReport uniqueness_probe(const DiscretizedKernel& dk, int k, int n_starts, std::uint64_t seed,
                             const SolveOptions& opts, double cluster_tol) {
    if (n_starts < 2) throw std::invalid_argument("uniqueness_probe requires n_starts >= 2");
    ProbeReport rep;
    rep.certificate = uniqueness_certificate(kernel_bounds(dk.spec()), k);
    rep.n_starts = n_starts;
    rep.cluster_tol = cluster_tol;

    std::vector<std::future<SolveReport>> jobs;
    jobs.reserve(n_starts);
    for (int i = 0; i < n_starts; ++i) {
        SolveOptions o = opts;
        o.init = InitRandom{derive_seed(seed, static_cast<std::uint64_t>(i))};
        jobs.push_back(std::async(std::launch::async, [&dk, k, o] { return solve_Ak(dk, k, o); }));
    }
    for (auto& j : jobs) rep.per_start.push_back(j.get());

    rep.all_converged = std::all_of(rep.per_start.begin(), rep.per_start.end(),
                                    [](const SolveReport& s) { return s.converged; });
    for (std::size_t a = 0; a < rep.per_start.size(); ++a) {
        if (!rep.per_start[a].converged) continue;
        for (std::size_t b = a + 1; b < rep.per_start.size(); ++b) {
            if (!rep.per_start[b].converged) continue;
            rep.max_pairwise_distance = std::max(
                rep.max_pairwise_distance, sup_distance(rep.per_start[a].solution, rep.per_start[b].solution));
        }
    }
    rep.unique_within_tol = rep.max_pairwise_distance <= cluster_tol;
    return rep;
}

}  // namespace cayley
