#include "cayley/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace cayley {

namespace {

void check_grid(const DiscretizedKernel& dk, const GridFunction& f) {
    if (!f.grid) throw std::invalid_argument("grid function without grid");
    require_same_grid(*dk.grid(), *f.grid);
}

void check_k(int k) {
    if (k < 1) throw std::invalid_argument("operator order k must be >= 1");
}

}  // namespace

DiscretizedKernel::DiscretizedKernel(KernelSpec spec, GridPtr grid)
    : spec_(std::move(spec)), grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("discretize: null grid");
    const auto& x = grid_->nodes();
    const std::size_t n = x.size();
    matrix_.resize(n * n);
    row_at_zero_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) matrix_[i * n + j] = spec_(x[i], x[j]);
    }
    for (std::size_t j = 0; j < n; ++j) row_at_zero_[j] = spec_(0.0, x[j]);
}

DiscretizedKernel discretize(const KernelSpec& spec, GridPtr grid) { return DiscretizedKernel(spec, std::move(grid)); }

GridFunction apply_W(const DiscretizedKernel& dk, const GridFunction& f) {
    check_grid(dk, f);
    const std::size_t n = dk.size();
    const auto& w = dk.grid()->weights();
    std::vector<double> wf(n);
    for (std::size_t j = 0; j < n; ++j) wf[j] = w[j] * f.values[j];

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += dk.at(i, j) * wf[j];
        out[i] = s;
    }
    double zero = 0.0;
    for (std::size_t j = 0; j < n; ++j) zero += dk.at_zero(j) * wf[j];
    return GridFunction(dk.grid(), std::move(out), zero);
}

double omega(const DiscretizedKernel& dk, const GridFunction& f) {
    check_grid(dk, f);
    const auto& w = dk.grid()->weights();
    double s = 0.0;
    for (std::size_t j = 0; j < dk.size(); ++j) s += dk.at_zero(j) * w[j] * f.values[j];
    if (!(s > 0.0)) throw std::invalid_argument("omega(f) is not positive; f is not admissible");
    return s;
}

GridFunction apply_B(const DiscretizedKernel& dk, const GridFunction& f) {
    GridFunction wf = apply_W(dk, f);
    const double norm = wf.value_at_zero;
    if (!(norm > 0.0)) throw std::invalid_argument("omega(f) is not positive; f is not admissible");
    for (double& v : wf.values) v /= norm;
    wf.value_at_zero = 1.0;
    return wf;
}

GridFunction apply_Ak(const DiscretizedKernel& dk, const GridFunction& f, int k) {
    check_k(k);
    GridFunction bf = apply_B(dk, f);
    if (k > 1) {
        for (double& v : bf.values) v = std::pow(v, k);
    }
    return bf;
}

GridFunction apply_Hk(const DiscretizedKernel& dk, const GridFunction& f, int k) {
    check_k(k);
    check_grid(dk, f);
    GridFunction fk = f;
    if (k > 1) {
        for (double& v : fk.values) v = std::pow(v, k);
        fk.value_at_zero = std::pow(fk.value_at_zero, k);
    }
    return apply_W(dk, fk);
}

double nystrom_extend(const DiscretizedKernel& dk, const GridFunction& f, int k, double t) {
    check_k(k);
    check_grid(dk, f);
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("nystrom_extend: t outside [0,1]");
    const auto& x = dk.grid()->nodes();
    const auto& w = dk.grid()->weights();
    double s = 0.0;
    for (std::size_t j = 0; j < dk.size(); ++j) s += dk.spec()(t, x[j]) * w[j] * f.values[j];
    return std::pow(s / omega(dk, f), k);
}

RangeBounds ak_range_bounds(const Bounds& b, int k) {
    return {std::pow(b.m / b.M0, k), std::pow(b.M / b.m0, k)};
}

RangeBounds hk_fixed_point_bounds(const Bounds& b, int k) {
    if (k < 2) throw std::invalid_argument("hk_fixed_point_bounds requires k >= 2");
    const double e = 1.0 / (k - 1);
    return {(b.m / b.M) * std::pow(1.0 / b.M, e), (b.M / b.m) * std::pow(1.0 / b.m, e)};
}

}  // namespace cayley
