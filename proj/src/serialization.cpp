#include "l2f/serialization.hpp"

#include "l2f/errors.hpp"

namespace l2f {

namespace {

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json to_json(const SMZMeasure& mu) {
  nlohmann::json doc;
  doc["kind"] = to_string(mu.kind);
  doc["m"] = mu.order;
  doc["nodes"] = to_std(mu.nodes);
  doc["weights"] = to_std(mu.weights);
  if (mu.window) doc["window"] = {mu.window->first, mu.window->second};
  return doc;
}

SMZMeasure measure_from_json(const nlohmann::json& doc) {
  SMZMeasure mu;
  mu.kind = measure_kind_from_string(doc.at("kind").get<std::string>());
  mu.order = doc.at("m").get<int>();
  mu.nodes = from_std(doc.at("nodes").get<std::vector<double>>());
  mu.weights = from_std(doc.at("weights").get<std::vector<double>>());
  if (mu.nodes.size() != mu.weights.size())
    throw shape_error("measure_from_json: nodes/weights length mismatch");
  if (doc.contains("window"))
    mu.window = std::make_pair(doc["window"][0].get<double>(), doc["window"][1].get<double>());
  return mu;
}

nlohmann::json to_json(const HermiteExpansion& e) {
  nlohmann::json doc;
  doc["n"] = e.degree;
  doc["m"] = e.quad_order;
  doc["measure_kind"] = to_string(e.measure_kind);
  doc["coeffs"] = to_std(e.coeffs);
  if (e.window) doc["window"] = {e.window->first, e.window->second};
  return doc;
}

HermiteExpansion expansion_from_json(const nlohmann::json& doc) {
  HermiteExpansion e;
  e.degree = doc.at("n").get<int>();
  e.quad_order = doc.at("m").get<int>();
  e.measure_kind = measure_kind_from_string(doc.at("measure_kind").get<std::string>());
  e.coeffs = from_std(doc.at("coeffs").get<std::vector<double>>());
  if (e.coeffs.size() != e.degree) throw shape_error("expansion_from_json: wrong coefficient count");
  if (doc.contains("window"))
    e.window = std::make_pair(doc["window"][0].get<double>(), doc["window"][1].get<double>());
  return e;
}

nlohmann::json to_json(const EstimationResult& r) {
  nlohmann::json doc;
  doc["a1"] = r.a1;
  doc["a2"] = r.a2;
  doc["t21_ms"] = r.t21_ms;
  doc["t22_ms"] = r.t22_ms;
  doc["solver_converged"] = r.solver_converged;
  doc["solver_iterations"] = r.solver_iterations;
  doc["residual_norm"] = r.residual_norm;
  doc["shift_used"] = r.shift_used;
  doc["seed"] = r.seed;
  doc["realization_index"] = r.realization_index;
  doc["failed"] = r.failed;
  if (r.failed) doc["failure_reason"] = r.failure_reason;
  return doc;
}

nlohmann::json to_json(const L2FTrace& trace) {
  nlohmann::json doc;
  doc["chosen_index"] = trace.chosen_index;
  doc["shifts"] = nlohmann::json::array();
  for (const ShiftRecord& rec : trace.shifts) {
    nlohmann::json row;
    row["shift"] = rec.shift;
    row["lambda_hat"] = rec.lambda_hat;
    row["t22_hat_ms"] = rec.t22_hat_ms;
    row["peak_height"] = rec.peak_height;
    row["second_peak_height"] = rec.second_peak_height;
    row["valid"] = rec.valid;
    if (!rec.note.empty()) row["note"] = rec.note;
    doc["shifts"].push_back(std::move(row));
  }
  doc["final"] = to_json(trace.final_result);
  return doc;
}

nlohmann::json to_json(const BatchStats& stats) {
  nlohmann::json doc;
  for (const auto& [name, ps] : stats.per_param) {
    doc["params"][name] = {{"mean", ps.mean}, {"stdev", ps.stdev}, {"rmse", ps.rmse}};
  }
  doc["failure_count"] = stats.failure_count;
  doc["used_count"] = stats.used_count;
  return doc;
}

}  // namespace l2f
