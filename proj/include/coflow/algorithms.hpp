#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coflow/direct.hpp"
#include "coflow/indirect.hpp"
#include "coflow/model.hpp"

namespace coflow {

struct AlgorithmOptions {
  PairOrder order = PairOrder::kLexicographic;
  std::uint64_t seed = 0;
  std::optional<std::size_t> dimension;
  /// Base scheme for vlb; defaults to the one auto would lift over.
  std::optional<Scheme> scheme;
};

struct AlgorithmRun {
  Schedule schedule;
  /// Present for greedy only.
  std::optional<GreedyTrace> trace;
  std::string description;
};

/// greedy, edge-coloring, smeared, round-robin, hypercube, elementary-basis,
/// grid, vlb, auto
const std::vector<std::string>& algorithm_names();

/// Throws ValidationError for an unknown name, UnsupportedSizeError and
/// CapacityError from the schemes.
AlgorithmRun run_algorithm(const std::string& name, const Instance& instance, const AlgorithmOptions& options = {});

/// Scheme the algorithm needs a supported node count for, if any.
std::optional<Scheme> size_constrained_scheme(const std::string& name, const Instance& instance,
                                              const AlgorithmOptions& options = {});

/// "lex", "residual", "load", "random"
PairOrder parse_order(const std::string& name);
std::string to_string(PairOrder order);

}  // namespace coflow
