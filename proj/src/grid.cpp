#include "cayley/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cayley {

Grid::Grid(QuadratureRule rule, std::vector<double> nodes, std::vector<double> weights)
    : rule_(rule), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.empty() || nodes_.size() != weights_.size()) throw std::invalid_argument("grid size mismatch");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > 0.0 && nodes_[i] < 1.0)) throw std::invalid_argument("grid node outside (0,1)");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("grid nodes not increasing");
        if (!(weights_[i] > 0.0)) throw std::invalid_argument("grid weight not positive");
    }
}

bool Grid::same_as(const Grid& other) const {
    return this == &other || (nodes_ == other.nodes_ && weights_ == other.weights_);
}

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence; |x| < 1.
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double dp = legendre(n, x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

GridPtr make_grid(int n_points, int panels) {
    if (n_points < 1 || panels < 1) throw std::invalid_argument("make_grid requires n_points >= 1 and panels >= 1");
    std::vector<double> ref_nodes, ref_weights;
    gauss_legendre(n_points, ref_nodes, ref_weights);

    std::vector<double> nodes, weights;
    nodes.reserve(static_cast<std::size_t>(n_points) * panels);
    weights.reserve(nodes.capacity());
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p) {
        const double left = p * h;
        for (int i = 0; i < n_points; ++i) {
            nodes.push_back(left + 0.5 * h * (ref_nodes[i] + 1.0));
            weights.push_back(0.5 * h * ref_weights[i]);
        }
    }
    return std::make_shared<const Grid>(QuadratureRule{n_points, panels}, std::move(nodes), std::move(weights));
}

double integrate(const Grid& grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw std::invalid_argument("integrate: length mismatch");
    double s = 0.0;
    const auto& w = grid.weights();
    for (std::size_t i = 0; i < values.size(); ++i) s += w[i] * values[i];
    return s;
}

GridFunction::GridFunction(GridPtr g, std::vector<double> v, double at_zero)
    : grid(std::move(g)), values(std::move(v)), value_at_zero(at_zero) {
    if (!grid) throw std::invalid_argument("grid function without grid");
    if (values.size() != grid->size()) throw std::invalid_argument("grid function length mismatch");
}

double GridFunction::min_value() const {
    return std::min(value_at_zero, *std::min_element(values.begin(), values.end()));
}

double GridFunction::max_value() const {
    return std::max(value_at_zero, *std::max_element(values.begin(), values.end()));
}

GridFunction constant_function(GridPtr grid, double value) {
    const std::size_t n = grid->size();
    return GridFunction(std::move(grid), std::vector<double>(n, value), value);
}

GridFunction sample_function(GridPtr grid, const std::function<double(double)>& fn) {
    std::vector<double> v;
    v.reserve(grid->size());
    for (double t : grid->nodes()) v.push_back(fn(t));
    const double zero = fn(0.0);
    return GridFunction(std::move(grid), std::move(v), zero);
}

void require_same_grid(const Grid& a, const Grid& b) {
    if (!a.same_as(b)) throw std::invalid_argument("grid mismatch");
}

void require_same_grid(const GridFunction& a, const GridFunction& b) { require_same_grid(*a.grid, *b.grid); }

double sup_norm(const GridFunction& f) {
    double s = std::abs(f.value_at_zero);
    for (double v : f.values) s = std::max(s, std::abs(v));
    return s;
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    double s = std::abs(f.value_at_zero - g.value_at_zero);
    for (std::size_t i = 0; i < f.size(); ++i) s = std::max(s, std::abs(f.values[i] - g.values[i]));
    return s;
}

double interpolate(const GridFunction& f, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("interpolate: t outside [0,1]");
    const auto& x = f.grid->nodes();
    if (t <= x.front()) {
        const double s = t / x.front();
        return (1.0 - s) * f.value_at_zero + s * f.values.front();
    }
    if (t >= x.back()) return f.values.back();
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double s = (t - x[i - 1]) / (x[i] - x[i - 1]);
    return (1.0 - s) * f.values[i - 1] + s * f.values[i];
}

double lemma2_gap(const GridFunction& f, double a) {
    if (!(f.min_value() < 0.0 && f.max_value() > 0.0)) {
        throw std::invalid_argument("lemma2_gap: function does not change sign");
    }
    double s = std::abs(f.value_at_zero - a);
    for (double v : f.values) s = std::max(s, std::abs(v - a));
    return s;
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_csv(std::ostream& out, const GridFunction& f, const char* column) {
    out << "t," << column << '\n';
    out << fmt17(0.0) << ',' << fmt17(f.value_at_zero) << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) out << fmt17(f.grid->nodes()[i]) << ',' << fmt17(f.values[i]) << '\n';
}

GridFunction read_csv(std::istream& in, GridPtr grid) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty input");
    std::vector<double> ts, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double t = 0.0, v = 0.0;
        char comma = 0;
        if (!(row >> t >> comma >> v) || comma != ',') throw std::invalid_argument("read_csv: malformed row: " + line);
        ts.push_back(t);
        vs.push_back(v);
    }
    if (ts.size() != grid->size() + 1 || ts.front() != 0.0) {
        throw std::invalid_argument("read_csv: row count does not match grid");
    }
    for (std::size_t i = 0; i < grid->size(); ++i) {
        if (std::abs(ts[i + 1] - grid->nodes()[i]) > 1e-14) throw std::invalid_argument("read_csv: node mismatch");
    }
    const double zero = vs.front();
    vs.erase(vs.begin());
    return GridFunction(std::move(grid), std::move(vs), zero);
}

}  // namespace cayley
