#include "coflow/io.hpp"

#include <fstream>
#include <sstream>

#include "coflow/errors.hpp"

namespace coflow {

namespace {

Json matrix_to_json(const SquareMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(rational_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(rational_to_json(q));
  return out;
}

Json table_to_json(const std::vector<std::vector<Rational>>& table) {
  Json out = Json::array();
  for (const auto& v : table) out.push_back(vector_to_json(v));
  return out;
}

template <typename E>
SquareMatrix matrix_from_json(const Json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw E("matrix must have " + std::to_string(n) + " rows");
  SquareMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) throw E("matrix row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) m(r, c) = rational_from_json(j[r][c]);
  }
  return m;
}

NodeId node_from_json(const Json& j) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw StructuralError("node ids must be nonnegative integers");
  return static_cast<NodeId>(j.get<std::int64_t>());
}

}  // namespace

Json rational_to_json(const Rational& q) { return q.str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  throw Error("expected a rational string \"p/q\" or an integer, got " + j.dump());
}

Json instance_to_json(const Instance& instance) {
  return Json{{"n", instance.n()}, {"demands", matrix_to_json(instance.demands())}};
}

Instance instance_from_json(const Json& j) {
  using Kind = ValidationError::Kind;
  if (!j.is_object() || !j.contains("n") || !j.contains("demands")) {
    throw ValidationError(Kind::kDimensionMismatch, "instance needs \"n\" and \"demands\"");
  }
  if (!j["n"].is_number_integer() || j["n"].get<std::int64_t>() < 0) {
    throw ValidationError(Kind::kInvalidParameter, "\"n\" must be a nonnegative integer");
  }
  const auto n = j["n"].get<std::size_t>();
  const Json& rows = j["demands"];
  if (!rows.is_array()) throw ValidationError(Kind::kDimensionMismatch, "\"demands\" must be an array of rows");
  std::vector<std::vector<Rational>> demands;
  for (const auto& row : rows) {
    if (!row.is_array()) throw ValidationError(Kind::kDimensionMismatch, "each demand row must be an array");
    std::vector<Rational> parsed;
    try {
      for (const auto& cell : row) parsed.push_back(rational_from_json(cell));
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      throw ValidationError(Kind::kInvalidParameter, e.what());
    }
    demands.push_back(std::move(parsed));
  }
  return Instance::create(n, demands);
}

Json schedule_to_json(const Schedule& schedule) {
  Json steps = Json::array();
  for (const auto& step : schedule.steps) {
    Json transfers = Json::array();
    for (const auto& t : step.transfers) {
      transfers.push_back({{"from", t.from},
                           {"to", t.to},
                           {"commodity", {t.commodity.origin, t.commodity.destination}},
                           {"amount", rational_to_json(t.amount)}});
    }
    steps.push_back({{"transfers", std::move(transfers)}});
  }
  return Json{{"horizon", schedule.horizon()}, {"steps", std::move(steps)}};
}

Schedule schedule_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array()) {
    throw StructuralError("schedule needs a \"steps\" array");
  }
  Schedule schedule;
  try {
    for (const auto& step_json : j["steps"]) {
      Step step;
      if (!step_json.contains("transfers") || !step_json["transfers"].is_array()) {
        throw StructuralError("each step needs a \"transfers\" array");
      }
      for (const auto& t : step_json["transfers"]) {
        const Json& commodity = t.at("commodity");
        if (!commodity.is_array() || commodity.size() != 2) throw StructuralError("commodity must be [origin, destination]");
        step.transfers.push_back({node_from_json(t.at("from")), node_from_json(t.at("to")),
                                  {node_from_json(commodity[0]), node_from_json(commodity[1])},
                                  rational_from_json(t.at("amount"))});
      }
      schedule.steps.push_back(std::move(step));
    }
  } catch (const StructuralError&) {
    throw;
  } catch (const std::exception& e) {
    throw StructuralError(std::string("malformed schedule: ") + e.what());
  }
  if (j.contains("horizon")) {
    if (!j["horizon"].is_number_integer() || j["horizon"].get<std::int64_t>() < static_cast<std::int64_t>(schedule.steps.size())) {
      throw StructuralError("\"horizon\" must cover every listed step");
    }
    schedule.steps.resize(j["horizon"].get<std::size_t>());
  }
  return schedule;
}

Json trace_to_json(const GreedyTrace& trace) {
  Json residuals = Json::array();
  for (const auto& r : trace.residuals) residuals.push_back(matrix_to_json(r));
  Json matchings = Json::array();
  for (const auto& m : trace.matchings) {
    Json entries = Json::array();
    for (const auto& e : m.triples) {
      entries.push_back({{"source", e.source}, {"receiver", e.receiver}, {"rate", rational_to_json(e.rate)}});
    }
    matchings.push_back(std::move(entries));
  }
  return Json{{"horizon", trace.horizon()}, {"residuals", std::move(residuals)}, {"matchings", std::move(matchings)}};
}

GreedyTrace trace_from_json(const Json& j) {
  GreedyTrace trace;
  try {
    const Json& residuals = j.at("residuals");
    const Json& matchings = j.at("matchings");
    if (!residuals.is_array() || residuals.empty()) throw TraceError("trace needs at least one residual matrix");
    const std::size_t n = residuals[0].size();
    for (const auto& r : residuals) trace.residuals.push_back(matrix_from_json<TraceError>(r, n));
    for (const auto& m : matchings) {
      FractionalMatching matching;
      for (const auto& e : m) {
        matching.triples.push_back({node_from_json(e.at("source")), node_from_json(e.at("receiver")),
                                    rational_from_json(e.at("rate"))});
      }
      trace.matchings.push_back(std::move(matching));
    }
    if (j.contains("horizon") && j["horizon"].get<std::size_t>() != trace.matchings.size()) {
      throw TraceError("trace horizon differs from its matching count");
    }
  } catch (const TraceError&) {
    throw;
  } catch (const std::exception& e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  }
  trace.refresh_sums();
  return trace;
}

Json report_to_json(const VerificationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    Json entry{{"kind", to_string(v.kind)}, {"step", v.step}, {"node", v.node}, {"detail", v.detail}};
    if (v.peer) entry["peer"] = *v.peer;
    violations.push_back(std::move(entry));
  }
  return Json{{"feasible", report.feasible},
              {"violations", std::move(violations)},
              {"max_edge_load", rational_to_json(report.max_edge_load)},
              {"unmet_demand", matrix_to_json(report.unmet_demand)},
              {"is_integral", report.is_integral},
              {"is_direct", report.is_direct},
              {"max_hops", report.max_hops}};
}

Json metrics_to_json(const Metrics& metrics) {
  return Json{{"makespan", metrics.makespan},
              {"total_completion", rational_to_json(metrics.total_completion)},
              {"average_completion", rational_to_json(metrics.average_completion)},
              {"average_completion_decimal", to_decimal(metrics.average_completion)}};
}

Json certificate_to_json(const DualCertificate& c) {
  return Json{{"horizon", c.horizon},
              {"alpha_S", matrix_to_json(c.alpha_S)},
              {"beta_S", table_to_json(c.beta_S)},
              {"alpha_R", matrix_to_json(c.alpha_R)},
              {"beta_R", table_to_json(c.beta_R)},
              {"obj_DS", rational_to_json(c.obj_DS)},
              {"obj_DR", rational_to_json(c.obj_DR)}};
}

Json certificate_check_to_json(const CertificateCheck& c) {
  Json out{{"passed", c.passed},
           {"trace_consistent", c.trace_consistent},
           {"feasible_DS", c.feasible_DS},
           {"feasible_DR", c.feasible_DR},
           {"objective_bound", c.objective_bound},
           {"residual_identity", c.residual_identity},
           {"alg_total_completion", rational_to_json(c.alg_total_completion)},
           {"dual_sum", rational_to_json(c.dual_sum)}};
  if (!c.first_violation.empty()) out["first_violation"] = c.first_violation;
  return out;
}

Json bounds_to_json(const BoundsReport& b) {
  Json out{{"n", b.n},
           {"B", rational_to_json(b.B)},
           {"regime", to_string(b.regime)},
           {"ceil_B", b.ceil_B},
           {"log_lb", rational_to_json(b.log_lb)},
           {"mid_lb", b.mid_lb ? rational_to_json(*b.mid_lb) : Json(nullptr)},
           {"max_lb", rational_to_json(b.max_lb)},
           {"max_lb_decimal", to_decimal(b.max_lb)},
           {"upper_formula", rational_to_json(b.upper_formula)},
           {"upper_formula_decimal", to_decimal(b.upper_formula)},
           {"upper_scale", rational_to_json(b.upper_scale)},
           {"rounded", b.rounded}};
  return out;
}

Json gap_to_json(const GapReport& g) {
  return Json{{"makespan", g.makespan},
              {"total_completion", rational_to_json(g.total_completion)},
              {"average_completion", rational_to_json(g.average_completion)},
              {"max_lb", rational_to_json(g.max_lb)},
              {"ratio_makespan", rational_to_json(g.ratio_makespan)},
              {"ratio_makespan_decimal", g.ratio_makespan_decimal},
              {"ratio_avg", rational_to_json(g.ratio_avg)},
              {"ratio_avg_decimal", g.ratio_avg_decimal},
              {"informational", g.informational}};
}

Json lp_solution_to_json(const LPSolution& s) {
  Json x = Json::array();
  for (const auto& [key, value] : s.x) {
    const auto [i, j, t] = key;
    x.push_back({{"i", i}, {"j", j}, {"t", t}, {"value", rational_to_json(value)}});
  }
  return Json{{"status", to_string(s.status)},
              {"horizon", s.horizon},
              {"objective", rational_to_json(s.objective)},
              {"x", std::move(x)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error("cannot parse " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("write to " + path + " failed");
}

}  // namespace coflow
