#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coflow/model.hpp"

namespace coflow {

enum class Family { kUniform, kRandomSparse, kAdversarialSingleRow };
std::string to_string(Family family);
/// "uniform", "random-sparse", "adversarial-single-row"
Family parse_family(const std::string& name);

/// uniform: off-diagonal entries B/n. random-sparse: about a quarter of the
/// pairs get ratios of small random integers, rescaled so the largest row or
/// column sum is exactly B. adversarial-single-row: row 0 holds B/(n-1) in
/// every other column. Throws ValidationError on n < 2 or B <= 0.
Instance generate(Family family, std::size_t n, const Rational& B, std::uint64_t seed);

struct ExperimentConfig {
  Family family = Family::kUniform;
  std::vector<std::size_t> n_values;
  std::vector<Rational> B_values;
  std::vector<std::string> algorithms;
  std::uint64_t seed = 0;
  std::size_t repetitions = 1;
  std::string output;
  /// Adds opt_direct_fractional and the greedy ratio against it when the
  /// instance is within the oracle limits.
  bool oracle = false;
  std::size_t workers = 1;
};

/// YAML keys: family, n, B, algorithms, seed, repetitions, output, oracle,
/// workers. Throws ValidationError on bad values.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& yaml_text);

struct ResultRow {
  std::string family;
  std::size_t n = 0;
  Rational B;
  std::uint64_t seed = 0;
  std::string algorithm;
  bool feasible = false;
  std::int64_t makespan = 0;
  Rational total_completion;
  Rational average_completion;
  Rational max_edge_load;
  Rational lower_bound_max;
  Rational ratio_makespan;
  Rational ratio_avg;
  std::optional<Rational> opt_direct;
  std::optional<Rational> ratio_opt;
  double wall_time_ms = 0;
  std::string note;
};

/// Cells in (n, B, repetition, algorithm) order, whatever the worker count.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// First line "# coflow-results schema=<version>", then the header row.
inline constexpr int kResultSchemaVersion = 1;
void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out);
/// Throws Error on an unknown schema or malformed row.
std::vector<ResultRow> read_results_csv(std::istream& in);

/// Measured worst ratios per (matching, routing, objective) quadrant next to
/// the known guarantees. format is "text" or "csv".
std::string emit_table1(const std::vector<ResultRow>& rows, const std::string& format = "text");

}  // namespace coflow
