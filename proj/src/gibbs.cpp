#include "cayley/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "cayley/random.hpp"

namespace cayley {

namespace {

constexpr double kFixedPointGate = 1e-6;
constexpr std::size_t kBatchSize = 4096;
constexpr int kBinQuadraturePoints = 16;

std::size_t worker_count(std::size_t batches) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(hw, batches));
}

// Runs body(batch) for every batch, batches striped across workers.
template <class Body>
void for_each_batch(std::size_t batches, Body body) {
    const std::size_t workers = worker_count(batches);
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [=, &body] {
            for (std::size_t b = w; b < batches; b += workers) body(b);
        }));
    }
    for (auto& j : jobs) j.get();
}

int bin_of(double x, int bins) { return std::min(static_cast<int>(x * bins), bins - 1); }

std::vector<double> bin_edges(int bins) {
    std::vector<double> e(bins + 1);
    for (int i = 0; i <= bins; ++i) e[i] = static_cast<double>(i) / bins;
    return e;
}

void check_bins(int bins) {
    if (bins < 1) throw std::invalid_argument("histogram needs at least one bin");
}

}  // namespace

std::size_t TreeShape::vertex_count() const {
    std::size_t total = 1, sphere = 1;
    for (int level = 1; level <= depth; ++level) {
        sphere *= (level == 1) ? static_cast<std::size_t>(k + 1) : static_cast<std::size_t>(k);
        total += sphere;
    }
    return total;
}

void TreeShape::validate() const {
    if (k < 1) throw std::invalid_argument("tree order k must be >= 1");
    if (depth < 0) throw std::invalid_argument("tree depth must be >= 0");
}

Tree::Tree(TreeShape shape) : shape_(shape) {
    shape_.validate();
    const std::size_t n = shape_.vertex_count();
    parent_.reserve(n);
    level_.reserve(n);
    path_.reserve(n);
    parent_.push_back(-1);
    level_.push_back(0);
    path_.emplace_back("0");
    for (std::size_t v = 0; v < parent_.size(); ++v) {
        if (level_[v] == shape_.depth) continue;
        const int children = (v == 0) ? shape_.k + 1 : shape_.k;
        for (int c = 0; c < children; ++c) {
            parent_.push_back(static_cast<int>(v));
            level_.push_back(level_[v] + 1);
            path_.push_back(path_[v] + "." + std::to_string(c));
        }
    }
    for (std::size_t v = 0; v < parent_.size(); ++v) {
        if (level_[v] == shape_.depth) boundary_.push_back(v);
    }
}

double bond_energy(const KernelSpec& spec, double s, double t, double beta) {
    if (const auto* e = spec.as<ExponentialXiKernel>()) return -e->J * e->xi_at(s, t);
    return -log_kernel(spec, s, t) / beta;
}

double energy(const TreeAssignment& assignment, const KernelSpec& spec, double beta) {
    const Tree tree(assignment.shape);
    if (assignment.spins.size() != tree.size()) throw std::invalid_argument("assignment size does not match tree");
    double h = 0.0;
    for (std::size_t v = 1; v < tree.size(); ++v) {
        h += bond_energy(spec, assignment.spins[tree.parent(v)], assignment.spins[v], beta);
    }
    return h;
}

double ti_residual(const GridFunction& f, const DiscretizedKernel& dk, int k) {
    return sup_distance(apply_Ak(dk, f, k), f);
}

DensityOnGrid root_marginal(const GridFunction& f, const DiscretizedKernel& dk, int k, std::optional<double> exponent) {
    const double r = ti_residual(f, dk, k);
    if (!(r <= kFixedPointGate)) {
        throw std::invalid_argument("root_marginal: f is not a fixed point (residual " + std::to_string(r) + ")");
    }
    const double p = exponent.value_or((k + 1.0) / k);
    DensityOnGrid d{f.grid, f.values, std::pow(f.value_at_zero, p), 1.0};
    for (double& v : d.values) v = std::pow(v, p);
    d.normalization = d.integral();
    for (double& v : d.values) v /= d.normalization;
    d.value_at_zero /= d.normalization;
    return d;
}

DensityOnGrid child_transition(const GridFunction& f, const DiscretizedKernel& dk, double parent_spin) {
    require_same_grid(*dk.grid(), *f.grid);
    const auto& x = dk.grid()->nodes();
    DensityOnGrid d{f.grid, std::vector<double>(x.size()), 0.0, 1.0};
    for (std::size_t j = 0; j < x.size(); ++j) d.values[j] = eval_kernel(dk.spec(), parent_spin, x[j]) * f.values[j];
    d.value_at_zero = eval_kernel(dk.spec(), parent_spin, 0.0) * f.value_at_zero;
    d.normalization = d.integral();
    for (double& v : d.values) v /= d.normalization;
    d.value_at_zero /= d.normalization;
    return d;
}

std::vector<double> root_marginal_bins(const GridFunction& f, const DiscretizedKernel& dk, int k, int bins,
                                       std::optional<double> exponent) {
    check_bins(bins);
    // nu ~ (A_k f)^p evaluated off-grid through the kernel.
    const double p = exponent.value_or((k + 1.0) / k);
    std::vector<double> gx, gw;
    gauss_legendre(kBinQuadraturePoints, gx, gw);
    std::vector<double> mass(bins, 0.0);
    double total = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double lo = static_cast<double>(b) / bins;
        const double h = 1.0 / bins;
        for (int i = 0; i < kBinQuadraturePoints; ++i) {
            const double t = lo + 0.5 * h * (gx[i] + 1.0);
            mass[b] += 0.5 * h * gw[i] * std::pow(nystrom_extend(dk, f, k, t), p);
        }
        total += mass[b];
    }
    for (double& m : mass) m /= total;
    return mass;
}

InverseCdf::InverseCdf(const DensityOnGrid& density) {
    const auto& x = density.grid->nodes();
    knots_.reserve(x.size() + 2);
    knots_.push_back(0.0);
    knots_.insert(knots_.end(), x.begin(), x.end());
    knots_.push_back(1.0);

    std::vector<double> dens;
    dens.reserve(knots_.size());
    dens.push_back(density.value_at_zero);
    dens.insert(dens.end(), density.values.begin(), density.values.end());
    dens.push_back(density.values.back());

    cdf_.assign(knots_.size(), 0.0);
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        cdf_[i] = cdf_[i - 1] + 0.5 * (dens[i - 1] + dens[i]) * (knots_[i] - knots_[i - 1]);
    }
    const double total = cdf_.back();
    if (!(total > 0.0)) throw std::invalid_argument("InverseCdf: density has no mass");
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
}

double InverseCdf::operator()(double uniform) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), uniform);
    if (it == cdf_.end()) return 1.0;
    const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
    if (i == 0) return 0.0;
    const double span = cdf_[i] - cdf_[i - 1];
    const double s = span > 0.0 ? (uniform - cdf_[i - 1]) / span : 0.0;
    return knots_[i - 1] + s * (knots_[i] - knots_[i - 1]);
}

std::vector<TreeAssignment> sample_tree(const GridFunction& f, const DiscretizedKernel& dk, const TreeShape& shape,
                                        std::size_t n_samples, std::uint64_t seed) {
    const Tree tree(shape);
    const InverseCdf root_cdf(root_marginal(f, dk, shape.k));
    std::vector<TreeAssignment> out(n_samples, TreeAssignment{shape, {}});

    const std::size_t batches = (n_samples + kBatchSize - 1) / kBatchSize;
    for_each_batch(batches, [&](std::size_t b) {
        std::mt19937_64 rng(derive_seed(seed, b));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const std::size_t end = std::min(n_samples, (b + 1) * kBatchSize);
        for (std::size_t s = b * kBatchSize; s < end; ++s) {
            auto& spins = out[s].spins;
            spins.resize(tree.size());
            spins[0] = root_cdf(unit(rng));
            for (std::size_t v = 1; v < tree.size(); ++v) {
                const InverseCdf child(child_transition(f, dk, spins[tree.parent(v)]));
                spins[v] = child(unit(rng));
            }
        }
    });
    return out;
}

Histogram root_histogram(const std::vector<TreeAssignment>& samples, int bins) {
    check_bins(bins);
    Histogram h;
    h.edges = bin_edges(bins);
    h.counts.assign(bins, 0);
    for (const auto& s : samples) ++h.counts[bin_of(s.spins.at(0), bins)];
    h.n = samples.size();
    h.ess = static_cast<double>(h.n);
    h.low_ess = h.ess < kMinEffectiveSampleSize;
    for (int b = 0; b < bins; ++b) {
        const double p = h.n ? static_cast<double>(h.counts[b]) / h.n : 0.0;
        h.probabilities.push_back(p);
        h.std_errors.push_back(h.n ? std::sqrt(p * (1.0 - p) / h.n) : 0.0);
    }
    return h;
}

Histogram mc_finite_volume_marginal(const GridFunction& f, const DiscretizedKernel& dk, const TreeShape& shape,
                                    std::size_t n_mc, std::uint64_t seed, int bins) {
    check_bins(bins);
    if (shape.depth > 2 || shape.k > 3) throw std::invalid_argument("mc_finite_volume_marginal requires depth <= 2, k <= 3");
    if (n_mc == 0) throw std::invalid_argument("mc_finite_volume_marginal requires n_mc > 0");
    require_same_grid(*dk.grid(), *f.grid);
    const Tree tree(shape);
    const int k = shape.k;

    // Log-weights are shifted by an upper bound so that every weight is <= 1.
    const Bounds kb = kernel_bounds(dk.spec());
    const RangeBounds fr = ak_range_bounds(kb, k);
    const double log_ref = static_cast<double>(tree.size() - 1) * std::log(kb.M) +
                           static_cast<double>(tree.boundary().size()) * std::log(fr.upper);

    struct Partial {
        double sw = 0.0, sw2 = 0.0;
        std::vector<double> bw, bw2;
        std::vector<std::uint64_t> counts;
    };
    const std::size_t batches = (n_mc + kBatchSize - 1) / kBatchSize;
    std::vector<Partial> partial(batches);

    for_each_batch(batches, [&](std::size_t b) {
        Partial& acc = partial[b];
        acc.bw.assign(bins, 0.0);
        acc.bw2.assign(bins, 0.0);
        acc.counts.assign(bins, 0);
        std::mt19937_64 rng(derive_seed(seed, b));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> spins(tree.size());
        const std::size_t end = std::min(n_mc, (b + 1) * kBatchSize);
        for (std::size_t s = b * kBatchSize; s < end; ++s) {
            for (double& x : spins) x = unit(rng);
            double logw = -log_ref;
            for (std::size_t v = 1; v < tree.size(); ++v) logw += log_kernel(dk.spec(), spins[tree.parent(v)], spins[v]);
            for (std::size_t v : tree.boundary()) logw += std::log(nystrom_extend(dk, f, k, spins[v]));
            const double w = std::exp(logw);
            const int bin = bin_of(spins[0], bins);
            acc.sw += w;
            acc.sw2 += w * w;
            acc.bw[bin] += w;
            acc.bw2[bin] += w * w;
            ++acc.counts[bin];
        }
    });

    Histogram h;
    h.edges = bin_edges(bins);
    h.counts.assign(bins, 0);
    std::vector<double> bw(bins, 0.0), bw2(bins, 0.0);
    double sw = 0.0, sw2 = 0.0;
    for (const auto& p : partial) {
        sw += p.sw;
        sw2 += p.sw2;
        for (int i = 0; i < bins; ++i) {
            bw[i] += p.bw[i];
            bw2[i] += p.bw2[i];
            h.counts[i] += p.counts[i];
        }
    }
    h.n = n_mc;
    h.ess = sw * sw / sw2;
    h.low_ess = h.ess < kMinEffectiveSampleSize;
    for (int i = 0; i < bins; ++i) {
        const double p = bw[i] / sw;
        // Delta-method variance of a ratio estimator: sum w^2 (1_b - p)^2 / (sum w)^2.
        const double var = ((1.0 - 2.0 * p) * bw2[i] + p * p * sw2) / (sw * sw);
        h.probabilities.push_back(p);
        h.std_errors.push_back(std::sqrt(std::max(var, 0.0)));
    }
    return h;
}

MarginalComparison compare_marginal(const Histogram& observed, const std::vector<double>& expected) {
    if (observed.probabilities.size() != expected.size()) throw std::invalid_argument("bin count mismatch");
    MarginalComparison c;
    c.expected = expected;
    c.observed = observed.probabilities;
    for (std::size_t b = 0; b < expected.size(); ++b) {
        const double diff = observed.probabilities[b] - expected[b];
        const double se = observed.std_errors[b];
        const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
        c.z_scores.push_back(z);
        c.sup_abs_z = std::max(c.sup_abs_z, std::abs(z));
    }
    return c;
}

MarginalComparison compare_histograms(const Histogram& a, const Histogram& b) {
    if (a.probabilities.size() != b.probabilities.size()) throw std::invalid_argument("bin count mismatch");
    MarginalComparison c;
    c.expected = b.probabilities;
    c.observed = a.probabilities;
    for (std::size_t i = 0; i < a.probabilities.size(); ++i) {
        const double diff = a.probabilities[i] - b.probabilities[i];
        const double se = std::hypot(a.std_errors[i], b.std_errors[i]);
        const double z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
        c.z_scores.push_back(z);
        c.sup_abs_z = std::max(c.sup_abs_z, std::abs(z));
    }
    return c;
}

}  // namespace cayley
