#include "coflow/algorithms.hpp"

#include "coflow/errors.hpp"

namespace coflow {

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {"greedy", "edge-coloring", "smeared", "round-robin", "hypercube",
                                                 "elementary-basis", "grid", "vlb", "auto"};
  return names;
}

PairOrder parse_order(const std::string& name) {
  if (name == "lex" || name == "lexicographic") return PairOrder::kLexicographic;
  if (name == "residual") return PairOrder::kResidualDescending;
  if (name == "load") return PairOrder::kLoadDescending;
  if (name == "random") return PairOrder::kRandom;
  throw ValidationError(ValidationError::Kind::kInvalidParameter, "unknown pair order '" + name + "'");
}

std::string to_string(PairOrder order) {
  switch (order) {
    case PairOrder::kLexicographic:
      return "lex";
    case PairOrder::kResidualDescending:
      return "residual";
    case PairOrder::kLoadDescending:
      return "load";
    case PairOrder::kRandom:
      return "random";
  }
  return "unknown";
}

namespace {

Scheme vlb_scheme(const Instance& instance, const AlgorithmOptions& options) {
  if (options.scheme) return *options.scheme;
  return plan_auto(instance).scheme;
}

}  // namespace

std::optional<Scheme> size_constrained_scheme(const std::string& name, const Instance& instance,
                                              const AlgorithmOptions& options) {
  if (name == "hypercube") return Scheme::kHypercube;
  if (name == "elementary-basis") return Scheme::kElementaryBasis;
  if (name == "grid") return Scheme::kGrid;
  if (name == "vlb") return vlb_scheme(instance, options);
  if (name == "auto") {
    const AutoPlan plan = plan_auto(instance);
    if (plan.lifted) return plan.scheme;
  }
  return std::nullopt;
}

AlgorithmRun run_algorithm(const std::string& name, const Instance& instance, const AlgorithmOptions& options) {
  AlgorithmRun run;
  run.description = name;
  if (name == "greedy") {
    GreedyResult result = greedy_schedule(instance, {options.order, options.seed});
    run.schedule = std::move(result.schedule);
    run.trace = std::move(result.trace);
    run.description += " (" + to_string(options.order) + " order)";
  } else if (name == "edge-coloring") {
    run.schedule = edge_coloring_schedule(instance);
  } else if (name == "smeared") {
    run.schedule = smeared_fractional_schedule(instance);
  } else if (name == "round-robin") {
    run.schedule = round_robin_schedule(instance);
  } else if (name == "hypercube") {
    run.schedule = hypercube_schedule(instance);
  } else if (name == "elementary-basis") {
    run.schedule = elementary_basis_schedule(instance, options.dimension);
  } else if (name == "grid") {
    run.schedule = grid_schedule(instance);
  } else if (name == "vlb") {
    const Scheme scheme = vlb_scheme(instance, options);
    std::optional<std::size_t> dimension = options.dimension;
    if (!dimension && !options.scheme) dimension = plan_auto(instance).dimension;
    run.schedule = vlb_lift(instance, scheme, dimension);
    run.description = "vlb over " + to_string(scheme);
  } else if (name == "auto") {
    run.schedule = auto_schedule(instance);
    run.description = "auto: " + plan_auto(instance).description;
  } else {
    throw ValidationError(ValidationError::Kind::kInvalidParameter, "unknown algorithm '" + name + "'");
  }
  return run;
}

}  // namespace coflow
