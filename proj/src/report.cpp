#include "cayley/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace cayley {

using nlohmann::json;

namespace {

void emit(std::string& out, const json& j, int indent, int level) {
    const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                break;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            break;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ',';
                    out += nl;
                }
                first = false;
                out += pad;
                out += json(it.key()).dump();
                out += indent > 0 ? ": " : ":";
                emit(out, it.value(), indent, level + 1);
            }
            out += nl;
            out += close_pad;
            out += '}';
            break;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            // Numeric arrays stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) out += flat ? ", " : ",";
                if (!flat) {
                    out += nl;
                    out += pad;
                }
                emit(out, j[i], indent, level + 1);
            }
            if (!flat) {
                out += nl;
                out += close_pad;
            }
            out += ']';
            break;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    emit(out, j, indent, 0);
    out += '\n';
    return out;
}

json to_json(const Bounds& b) {
    return {{"m", b.m}, {"M", b.M}, {"m0", b.m0}, {"M0", b.M0}, {"resolution", b.resolution}, {"exact", b.exact}};
}

json to_json(const Certificate& c) {
    return {{"k", c.k},         {"gamma1", c.gamma1}, {"gamma2", c.gamma2}, {"lhs", c.lhs},
            {"bound", c.bound}, {"ratio", c.ratio},   {"eta_k", c.eta_k},   {"pass", c.pass}};
}

json to_json(const GridFunction& f) {
    return {{"value_at_zero", f.value_at_zero}, {"nodes", f.grid->nodes()}, {"values", f.values}};
}

json to_json(const SolveReport& r, bool with_solution) {
    json j = {{"residual", r.residual},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"omega_value", r.omega_value},
              {"final_damping", r.final_damping}};
    if (with_solution && r.solution.grid) j["solution"] = to_json(r.solution);
    return j;
}

json to_json(const Eigenpair& p) { return {{"lambda", p.lambda}, {"h", to_json(p.h)}}; }

json to_json(const ProbeReport& r) {
    json starts = json::array();
    for (const auto& s : r.per_start) starts.push_back(to_json(s, false));
    return {{"certificate", to_json(r.certificate)},
            {"n_starts", r.n_starts},
            {"max_pairwise_distance", r.max_pairwise_distance},
            {"cluster_tol", r.cluster_tol},
            {"all_converged", r.all_converged},
            {"unique_within_tol", r.unique_within_tol},
            {"per_start", starts}};
}

json to_json(const Histogram& h) {
    return {{"edges", h.edges},
            {"counts", h.counts},
            {"probabilities", h.probabilities},
            {"std_errors", h.std_errors},
            {"n", h.n},
            {"ess", h.ess},
            {"low_ess", h.low_ess}};
}

json to_json(const MarginalComparison& c) {
    return {{"expected", c.expected}, {"observed", c.observed}, {"z_scores", c.z_scores}, {"sup_abs_z", c.sup_abs_z}};
}

}  // namespace cayley
