#pragma once

// Canonical JSON forms for sets, step functions, verdicts and solver results.

#include <nlohmann/json.hpp>

#include "lfw/construct.hpp"
#include "lfw/framesim.hpp"
#include "lfw/stepfn.hpp"
#include "lfw/verify.hpp"

namespace lfw {

using Json = nlohmann::ordered_json;

Json to_json(const Ball& b);
/// List of {center, scale} in canonical ball order.
Json to_json(const ClopenSet& s);
Json to_json(const StepFunction& f);
Json to_json(const Witness& w);
Json to_json(const Verdict& v);
Json to_json(const BoundReport& b);
Json to_json(const SolveResult& r);
Json to_json(const SimulationReport& r);
Json to_json(const ResidualReport& r);

Ball ball_from_json(const FieldConfigPtr& field, const Json& j);
ClopenSet set_from_json(const FieldConfigPtr& field, const Json& j);

}  // namespace lfw
