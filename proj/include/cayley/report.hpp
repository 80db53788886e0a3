#pragma once

// JSON encodings of results. dump_json prints every floating-point number
// with 17 significant digits, so identical runs produce identical bytes.

#include <string>

#include <json.hpp>

#include "cayley/gibbs.hpp"
#include "cayley/kernel.hpp"
#include "cayley/solver.hpp"

namespace cayley {

std::string dump_json(const nlohmann::json& j, int indent = 2);

nlohmann::json to_json(const Bounds& b);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const GridFunction& f);
/// With `with_solution` the node values are included.
nlohmann::json to_json(const SolveReport& r, bool with_solution = true);
nlohmann::json to_json(const Eigenpair& p);
nlohmann::json to_json(const ProbeReport& r);
nlohmann::json to_json(const Histogram& h);
nlohmann::json to_json(const MarginalComparison& c);

}  // namespace cayley
