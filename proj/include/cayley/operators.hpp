#pragma once

// Nystrom realizations of the integral operators acting on grid functions:
//
//   (W f)(t)   = int_0^1 K(t,u) f(u) du
//   omega(f)   = (W f)(0)
//   (B f)(t)   = (W f)(t) / omega(f)
//   (A_k f)(t) = (B f)(t)^k
//   (H_k f)(t) = int_0^1 K(t,u) f(u)^k du
//
// Values at t = 0 are always computed from the kernel row K(0, .), never
// interpolated, since omega normalizes every fixed point.

#include <vector>

#include "cayley/grid.hpp"
#include "cayley/kernel.hpp"

namespace cayley {

class DiscretizedKernel {
public:
    DiscretizedKernel(KernelSpec spec, GridPtr grid);

    const KernelSpec& spec() const { return spec_; }
    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return grid_->size(); }

    /// K(t_i, u_j)
    double at(std::size_t i, std::size_t j) const { return matrix_[i * size() + j]; }
    /// K(0, u_j)
    double at_zero(std::size_t j) const { return row_at_zero_[j]; }
    const std::vector<double>& row_at_zero() const { return row_at_zero_; }

private:
    KernelSpec spec_;
    GridPtr grid_;
    std::vector<double> matrix_;
    std::vector<double> row_at_zero_;
};

DiscretizedKernel discretize(const KernelSpec& spec, GridPtr grid);

GridFunction apply_W(const DiscretizedKernel& dk, const GridFunction& f);

/// (W f)(0). Throws std::invalid_argument when the result is not positive,
/// which signals an inadmissible f.
double omega(const DiscretizedKernel& dk, const GridFunction& f);

/// W f / omega(f); the value at zero is exactly 1.
GridFunction apply_B(const DiscretizedKernel& dk, const GridFunction& f);
GridFunction apply_Ak(const DiscretizedKernel& dk, const GridFunction& f, int k);
GridFunction apply_Hk(const DiscretizedKernel& dk, const GridFunction& f, int k);

/// (A_k f)(t) at an arbitrary t in [0,1], using the kernel directly. For a
/// fixed point of A_k this is the natural Nystrom interpolant of f.
double nystrom_extend(const DiscretizedKernel& dk, const GridFunction& f, int k, double t);

/// Bounds on fixed points and on the range of A_k:
/// (m/M0)^k <= A_k f <= (M/m0)^k.
struct RangeBounds {
    double lower = 0.0;
    double upper = 0.0;
};
RangeBounds ak_range_bounds(const Bounds& b, int k);

/// Interval confining fixed points of H_k (k >= 2):
/// (m/M) (1/M)^(1/(k-1)) <= f <= (M/m) (1/m)^(1/(k-1)).
RangeBounds hk_fixed_point_bounds(const Bounds& b, int k);

}  // namespace cayley
