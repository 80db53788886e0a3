#include "cayley/config.hpp"

#include <fstream>

namespace cayley {

using nlohmann::json;

namespace {

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T require(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
    return get_or<T>(j, key, T{});
}

std::vector<Monomial> parse_terms(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected a list of [i, j, c] triples");
    std::vector<Monomial> terms;
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer() ||
            !t[2].is_number()) {
            throw ConfigError(where + ": malformed term " + t.dump());
        }
        terms.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<double>()});
    }
    return terms;
}

const json& block(const json& j, const char* key) {
    static const json empty = json::object();
    if (!j.contains(key)) return empty;
    if (!j.at(key).is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
    return j.at(key);
}

}  // namespace

KernelSpec parse_kernel(const json& j) {
    if (!j.is_object()) throw ConfigError("kernel must be an object");
    const auto type = require<std::string>(j, "type", "kernel");
    try {
        if (type == "constant") return KernelSpec::constant(require<double>(j, "c", "kernel"));
        if (type == "polynomial_k1") {
            return KernelSpec::polynomial_k1(parse_terms(j.value("terms", json::array()), "kernel.terms"),
                                             require<double>(j, "a", "kernel"));
        }
        if (type == "exponential_xi") {
            if (!j.contains("xi")) throw ConfigError("kernel: missing field 'xi'");
            return KernelSpec::exponential_xi(require<double>(j, "J", "kernel"), require<double>(j, "beta", "kernel"),
                                              parse_terms(j.at("xi"), "kernel.xi"));
        }
        if (type == "tabulated") {
            const auto rows = require<std::vector<std::vector<double>>>(j, "values", "kernel");
            if (rows.empty()) throw ConfigError("kernel.values is empty");
            std::vector<double> flat;
            for (const auto& r : rows) {
                if (r.size() != rows.front().size()) throw ConfigError("kernel.values rows differ in length");
                flat.insert(flat.end(), r.begin(), r.end());
            }
            return KernelSpec::tabulated(rows.size(), rows.front().size(), std::move(flat));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("kernel: ") + e.what());
    }
    throw ConfigError("unknown kernel type '" + type + "'");
}

RunConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("kernel")) throw ConfigError("missing 'kernel' block");

    RunConfig cfg(parse_kernel(j.at("kernel")));
    cfg.k = get_or<int>(j, "k", 2);
    if (cfg.k < 1) throw ConfigError("k must be >= 1");

    const json& g = block(j, "grid");
    cfg.grid.points_per_panel = get_or<int>(g, "points_per_panel", 12);
    cfg.grid.panels = get_or<int>(g, "panels", 8);
    if (cfg.grid.points_per_panel < 1 || cfg.grid.panels < 1) throw ConfigError("grid sizes must be >= 1");

    const json& s = block(j, "solver");
    cfg.solver.tol = get_or<double>(s, "tol", 1e-12);
    cfg.solver.max_iter = get_or<int>(s, "max_iter", 10000);
    cfg.solver.damping = get_or<double>(s, "damping", 1.0);
    if (s.contains("init")) {
        const json& init = s.at("init");
        if (init.is_string() && init.get<std::string>() == "flat") {
            cfg.solver.init = InitFlat{};
        } else if (init.is_object() && init.contains("random")) {
            cfg.solver.init = InitRandom{get_or<std::uint64_t>(init, "random", 0)};
        } else if (init.is_object() && init.contains("given") && init.at("given").is_string()) {
            cfg.init_csv = base_dir / init.at("given").get<std::string>();
        } else {
            throw ConfigError("solver.init must be \"flat\", {\"random\": seed} or {\"given\": path}");
        }
    }
    try {
        cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    cfg.bounds_resolution = get_or<int>(block(j, "bounds"), "resolution", kDefaultBoundsResolution);
    if (cfg.bounds_resolution < 2) throw ConfigError("bounds.resolution must be >= 2");

    const json& p = block(j, "probe");
    cfg.probe.n_starts = get_or<int>(p, "n_starts", 20);
    cfg.probe.seed = get_or<std::uint64_t>(p, "seed", 0);

    const json& sm = block(j, "sample");
    cfg.sample.depth = get_or<int>(sm, "depth", 2);
    cfg.sample.n_samples = get_or<std::size_t>(sm, "n_samples", 1000);
    cfg.sample.seed = get_or<std::uint64_t>(sm, "seed", 0);
    cfg.sample.bins = get_or<int>(sm, "bins", 20);
    if (cfg.sample.depth < 0 || cfg.sample.bins < 1) throw ConfigError("sample.depth must be >= 0 and bins >= 1");

    const json& c = block(j, "compare");
    cfg.compare.depth = get_or<int>(c, "depth", 1);
    cfg.compare.n_mc = get_or<std::size_t>(c, "n_mc", 100000);
    cfg.compare.bins = get_or<int>(c, "bins", 20);
    cfg.compare.seed = get_or<std::uint64_t>(c, "seed", 0);
    cfg.compare.z_threshold = get_or<double>(c, "z_threshold", 4.0);
    if (c.contains("exponent_override") && !c.at("exponent_override").is_null()) {
        cfg.compare.exponent_override = get_or<double>(c, "exponent_override", 0.0);
    }
    if (cfg.compare.depth < 0 || cfg.compare.depth > 2) throw ConfigError("compare.depth must be in [0,2]");
    if (cfg.compare.bins < 1 || cfg.compare.n_mc < 1) throw ConfigError("compare.bins and compare.n_mc must be >= 1");

    const json& e = block(j, "eigen");
    if (e.contains("target_lambda")) {
        cfg.eigen.target_lambda = get_or<double>(e, "target_lambda", 1.0);
        if (!(*cfg.eigen.target_lambda > 0.0)) throw ConfigError("eigen.target_lambda must be > 0");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(j, path.parent_path());
}

void override_seeds(RunConfig& cfg, std::uint64_t seed) {
    cfg.probe.seed = seed;
    cfg.sample.seed = seed;
    cfg.compare.seed = seed;
}

}  // namespace cayley
