#include "lfw/json.hpp"

namespace lfw {

Json to_json(const Ball& b) {
  Json j;
  j["center"] = to_string(b.center());
  j["scale"] = b.scale();
  return j;
}

Json to_json(const ClopenSet& s) {
  Json j = Json::array();
  for (const auto& b : s.balls()) j.push_back(to_json(b));
  return j;
}

Json to_json(const StepFunction& f) {
  Json j = Json::array();
  for (const auto& [b, v] : f.cells()) {
    Json cell = to_json(b);
    cell["value"] = to_string(v);
    j.push_back(std::move(cell));
  }
  return j;
}

Json to_json(const Witness& w) {
  Json j;
  j["kind"] = to_string(w.kind);
  if (w.ball) j["ball"] = to_json(*w.ball);
  if (w.set) j["set"] = to_json(*w.set);
  if (w.point) j["point"] = to_string(*w.point);
  if (w.measure) j["measure"] = to_fraction_string(*w.measure);
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["passed"] = v.passed();
  Json checks = Json::array();
  for (const auto& c : v.checks()) {
    Json cj;
    cj["name"] = c.name;
    cj["status"] = c.passed ? "pass" : "fail";
    cj["witness"] = to_json(c.witness);
    if (!c.detail.empty()) cj["detail"] = c.detail;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  Json bounds = Json::object();
  const auto& b = v.bounds();
  if (b.s_max) bounds["s_max"] = *b.s_max;
  if (b.j_max) bounds["j_max"] = *b.j_max;
  if (b.k_max) bounds["k_max"] = *b.k_max;
  j["bounds"] = std::move(bounds);
  if (!v.facts().empty()) {
    Json facts = Json::object();
    for (const auto& [k, val] : v.facts()) facts[k] = val;
    j["facts"] = std::move(facts);
  }
  return j;
}

Json to_json(const BoundReport& b) {
  Json j;
  j["infinite"] = b.infinite;
  if (b.infinite) {
    j["value"] = "inf";
  } else {
    j["value"] = to_string(b.value);
  }
  if (b.max_m) {
    j["max_m"] = *b.max_m;
  } else {
    j["max_m"] = nullptr;
  }
  return j;
}

Json to_json(const SolveResult& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["target"] = to_json(r.target);
  j["pool_size"] = r.pool_size;
  j["dilation_cells"] = r.dilation_cells;
  j["fold_cells"] = r.fold_cells;
  j["nodes"] = r.nodes;
  if (!r.certificate.empty()) j["certificate"] = r.certificate;
  if (r.set) j["set"] = to_json(*r.set);
  if (r.verification) j["verification"] = to_json(*r.verification);
  return j;
}

Json to_json(const SimulationReport& r) {
  Json j;
  j["passed"] = r.passed();
  j["mesh_functions"] = r.mesh_functions;
  j["random_functions"] = r.random_functions;
  j["nonzero_residuals"] = r.nonzero_residuals;
  j["first_failure"] = r.first_failure ? Json(*r.first_failure) : Json(nullptr);
  j["k_digits"] = r.k_digits;
  j["coefficients"] = r.coefficients;
  j["spot_checks"] = r.spot_checks;
  return j;
}

Json to_json(const ResidualReport& r) {
  Json j;
  j["residual"] = to_string(r.residual);
  j["norm_sq"] = to_string(r.norm_sq);
  j["energy"] = to_string(r.energy);
  j["j_lo"] = r.j_lo;
  j["j_hi"] = r.j_hi;
  j["tail_from"] = r.tail_from ? Json(*r.tail_from) : Json(nullptr);
  j["k_digits"] = r.k_digits;
  j["coefficients"] = r.coefficients;
  j["spot_checks"] = r.spot_checks;
  return j;
}

Ball ball_from_json(const FieldConfigPtr& field, const Json& j) {
  if (!j.is_object() || !j.contains("center") || !j.contains("scale")) {
    throw std::invalid_argument("ball JSON needs center and scale");
  }
  return Ball(parse_element(field, j.at("center").get<std::string>()), j.at("scale").get<int>());
}

ClopenSet set_from_json(const FieldConfigPtr& field, const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("set JSON must be a list of balls");
  std::vector<Ball> balls;
  for (const auto& b : j) balls.push_back(ball_from_json(field, b));
  return ClopenSet(field, std::move(balls));
}

}  // namespace lfw
