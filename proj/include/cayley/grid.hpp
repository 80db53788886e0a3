#pragma once

// Composite Gauss-Legendre grids on [0,1] and functions sampled on them.

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace cayley {

struct QuadratureRule {
    int points_per_panel = 12;
    int panels = 8;

    int size() const { return points_per_panel * panels; }
};

/// Nodes strictly increasing in (0,1); weights positive and summing to 1.
class Grid {
public:
    Grid(QuadratureRule rule, std::vector<double> nodes, std::vector<double> weights);

    const QuadratureRule& rule() const { return rule_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return nodes_.size(); }

    bool same_as(const Grid& other) const;

private:
    QuadratureRule rule_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Gauss-Legendre nodes and weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// n_points-point Gauss-Legendre rule on each of `panels` equal panels.
GridPtr make_grid(int n_points, int panels);
inline GridPtr make_grid(const QuadratureRule& rule) { return make_grid(rule.points_per_panel, rule.panels); }

/// sum_i w_i values_i; throws std::invalid_argument on length mismatch.
double integrate(const Grid& grid, std::span<const double> values);

/// Function values at the grid nodes plus the value at t = 0, which the
/// Gauss nodes never include.
struct GridFunction {
    GridPtr grid;
    std::vector<double> values;
    double value_at_zero = 0.0;

    GridFunction() = default;
    GridFunction(GridPtr g, std::vector<double> v, double at_zero);

    std::size_t size() const { return values.size(); }
    double integral() const { return integrate(*grid, values); }
    /// min over nodes and t = 0
    double min_value() const;
    double max_value() const;
    bool strictly_positive() const { return min_value() > 0.0; }
};

GridFunction constant_function(GridPtr grid, double value);
GridFunction sample_function(GridPtr grid, const std::function<double(double)>& fn);

/// Throws std::invalid_argument unless both live on the same grid.
void require_same_grid(const GridFunction& a, const GridFunction& b);
void require_same_grid(const Grid& a, const Grid& b);

double sup_norm(const GridFunction& f);
/// sup over nodes and t = 0 of |f - g|.
double sup_distance(const GridFunction& f, const GridFunction& g);

/// Piecewise linear through (0, f(0)), (t_i, f_i); constant past the last node.
double interpolate(const GridFunction& f, double t);

/// sup |f - a| over the stored samples. Requires f to change sign among its
/// samples (throws std::invalid_argument otherwise). For every shift a the
/// result is at least sup_norm(f) / 2.
double lemma2_gap(const GridFunction& f, double a);

/// CSV: header "t,f" then (0, f(0)) and one row per node, 17 significant digits.
void write_csv(std::ostream& out, const GridFunction& f, const char* column = "f");
/// Reads a CSV in the write_csv layout; node abscissae must match `grid`.
GridFunction read_csv(std::istream& in, GridPtr grid);

}  // namespace cayley
