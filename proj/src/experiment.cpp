#include "coflow/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <yaml-cpp/yaml.h>

#include "coflow/algorithms.hpp"
#include "coflow/bounds.hpp"
#include "coflow/errors.hpp"
#include "coflow/lp.hpp"
#include "coflow/verifier.hpp"

namespace coflow {

std::string to_string(Family family) {
  switch (family) {
    case Family::kUniform:
      return "uniform";
    case Family::kRandomSparse:
      return "random-sparse";
    case Family::kAdversarialSingleRow:
      return "adversarial-single-row";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "uniform") return Family::kUniform;
  if (name == "random-sparse") return Family::kRandomSparse;
  if (name == "adversarial-single-row") return Family::kAdversarialSingleRow;
  throw ValidationError(ValidationError::Kind::kInvalidParameter, "unknown instance family '" + name + "'");
}

Instance generate(Family family, std::size_t n, const Rational& B, std::uint64_t seed) {
  using Kind = ValidationError::Kind;
  if (n < 2) throw ValidationError(Kind::kTooFewNodes, "generator needs n >= 2");
  if (B.sign() <= 0) throw ValidationError(Kind::kInvalidParameter, "generator needs B > 0");
  switch (family) {
    case Family::kUniform:
      return uniform_instance(n, B);
    case Family::kAdversarialSingleRow: {
      SquareMatrix d(n);
      const Rational share = B / Rational(static_cast<std::int64_t>(n - 1));
      for (std::size_t j = 1; j < n; ++j) d(0, j) = share;
      return Instance::create(std::move(d));
    }
    case Family::kRandomSparse: {
      std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + n);
      SquareMatrix d(n);
      bool any = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j || rng() % 4 != 0) continue;
          const auto num = static_cast<std::int64_t>(1 + rng() % 9);
          const auto den = static_cast<std::int64_t>(1 + rng() % 9);
          d(i, j) = Rational(num, den);
          any = true;
        }
      }
      if (!any) d(0, 1) = Rational(1);
      Rational load;
      for (std::size_t v = 0; v < n; ++v) load = max(load, max(d.row_sum(v), d.col_sum(v)));
      const Rational scale = B / load;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!d(i, j).is_zero()) d(i, j) *= scale;
        }
      }
      return Instance::create(std::move(d));
    }
  }
  throw ValidationError(Kind::kInvalidParameter, "unknown instance family");
}

namespace {

template <typename T>
std::vector<T> scalar_or_list(const YAML::Node& node) {
  std::vector<T> out;
  if (!node) return out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(item.as<T>());
  } else {
    out.push_back(node.as<T>());
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml_text) {
  using Kind = ValidationError::Kind;
  ExperimentConfig config;
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    if (!root.IsMap()) throw ValidationError(Kind::kInvalidParameter, "experiment config must be a mapping");
    if (root["family"]) config.family = parse_family(root["family"].as<std::string>());
    config.n_values = scalar_or_list<std::size_t>(root["n"]);
    for (const auto& text : scalar_or_list<std::string>(root["B"])) config.B_values.push_back(Rational::parse(text));
    config.algorithms = scalar_or_list<std::string>(root["algorithms"]);
    if (root["seed"]) config.seed = root["seed"].as<std::uint64_t>();
    if (root["repetitions"]) config.repetitions = root["repetitions"].as<std::size_t>();
    if (root["output"]) config.output = root["output"].as<std::string>();
    if (root["oracle"]) config.oracle = root["oracle"].as<bool>();
    if (root["workers"]) config.workers = root["workers"].as<std::size_t>();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    throw ValidationError(Kind::kInvalidParameter, std::string("bad experiment config: ") + e.what());
  }
  if (config.n_values.empty() || config.B_values.empty() || config.algorithms.empty()) {
    throw ValidationError(Kind::kInvalidParameter, "experiment config needs n, B and algorithms");
  }
  for (auto n : config.n_values) {
    if (n < 2) throw ValidationError(Kind::kTooFewNodes, "experiment n values must be >= 2");
  }
  for (const auto& b : config.B_values) {
    if (b.sign() <= 0) throw ValidationError(Kind::kInvalidParameter, "experiment B values must be positive");
  }
  const auto& known = algorithm_names();
  for (const auto& a : config.algorithms) {
    if (std::find(known.begin(), known.end(), a) == known.end()) {
      throw ValidationError(Kind::kInvalidParameter, "unknown algorithm '" + a + "' in experiment config");
    }
  }
  if (config.repetitions == 0) throw ValidationError(Kind::kInvalidParameter, "repetitions must be >= 1");
  if (config.workers == 0) config.workers = 1;
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

namespace {

struct Cell {
  std::size_t n;
  Rational B;
  std::uint64_t seed;
  std::string algorithm;
};

bool within_oracle_limits(const Instance& instance) {
  const OracleLimits limits;
  const auto horizon = static_cast<std::size_t>(instance.total_demand().ceil_int()) + instance.n();
  return instance.n() <= limits.max_nodes && horizon <= limits.max_horizon;
}

ResultRow run_cell(const ExperimentConfig& config, const Cell& cell) {
  ResultRow row;
  row.family = to_string(config.family);
  row.n = cell.n;
  row.B = cell.B;
  row.seed = cell.seed;
  row.algorithm = cell.algorithm;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Instance instance = generate(config.family, cell.n, cell.B, cell.seed);
    AlgorithmOptions options;
    options.seed = cell.seed;
    const AlgorithmRun run = run_algorithm(cell.algorithm, instance, options);
    const VerificationReport report = verify(instance, run.schedule);
    row.feasible = report.feasible;
    row.max_edge_load = report.max_edge_load;
    if (!report.feasible) {
      row.note = "infeasible: " + to_string(report.violations.front().kind);
    } else {
      const BoundsReport bounds = lower_bounds(instance);
      const GapReport gap = compare(instance, run.schedule, bounds);
      row.makespan = gap.makespan;
      row.total_completion = gap.total_completion;
      row.average_completion = gap.average_completion;
      row.lower_bound_max = gap.max_lb;
      row.ratio_makespan = gap.ratio_makespan;
      row.ratio_avg = gap.ratio_avg;
      if (config.oracle && within_oracle_limits(instance)) {
        row.opt_direct = opt_direct_fractional(instance);
        if (row.opt_direct->sign() > 0) row.ratio_opt = row.total_completion / *row.opt_direct;
      }
    }
  } catch (const std::exception& e) {
    row.feasible = false;
    row.note = e.what();
  }
  row.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (auto n : config.n_values) {
    for (const auto& b : config.B_values) {
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        for (const auto& algorithm : config.algorithms) cells.push_back({n, b, config.seed + rep, algorithm});
      }
    }
  }
  std::vector<ResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < cells.size(); k = next++) rows[k] = run_cell(config, cells[k]);
  };
  const std::size_t count = std::max<std::size_t>(1, std::min(config.workers, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < count; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

namespace {

const std::vector<std::string>& columns() {
  static const std::vector<std::string> names = {
      "family",         "n",           "B",
      "seed",           "algorithm",   "feasible",
      "makespan",       "total_completion", "average_completion",
      "max_edge_load",  "lower_bound_max",  "ratio_makespan",
      "ratio_makespan_decimal", "ratio_avg", "ratio_avg_decimal",
      "opt_direct",     "ratio_opt",   "ratio_opt_decimal",
      "wall_time_ms",   "note"};
  return names;
}

std::string quote(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        out.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

void write_results_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "# coflow-results schema=" << kResultSchemaVersion << "\n";
  const auto& names = columns();
  for (std::size_t k = 0; k < names.size(); ++k) out << (k ? "," : "") << names[k];
  out << "\n";
  for (const auto& r : rows) {
    const bool measured = r.feasible;
    out << r.family << ',' << r.n << ',' << r.B << ',' << r.seed << ',' << r.algorithm << ','
        << (r.feasible ? "true" : "false") << ',';
    if (measured) {
      out << r.makespan << ',' << r.total_completion << ',' << r.average_completion << ',' << r.max_edge_load << ','
          << r.lower_bound_max << ',' << r.ratio_makespan << ',' << to_decimal(r.ratio_makespan) << ','
          << r.ratio_avg << ',' << to_decimal(r.ratio_avg) << ',';
    } else {
      out << ",,,,,,,,,";
    }
    if (r.opt_direct) out << *r.opt_direct;
    out << ',';
    if (r.ratio_opt) out << *r.ratio_opt << ',' << to_decimal(*r.ratio_opt);
    else out << ',';
    out << ',' << std::fixed << std::setprecision(3) << r.wall_time_ms << std::defaultfloat << ',' << quote(r.note)
        << "\n";
  }
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "# coflow-results schema=" + std::to_string(kResultSchemaVersion)) {
    throw Error("results file lacks the schema " + std::to_string(kResultSchemaVersion) + " marker line");
  }
  if (!std::getline(in, line)) throw Error("results file has no header row");
  const std::vector<std::string> header = split(line);
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < header.size(); ++k) index[header[k]] = k;
  for (const auto& name : columns()) {
    if (!index.count(name)) throw Error("results header lacks column '" + name + "'");
  }
  std::vector<ResultRow> rows;
  std::size_t line_number = 2;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::vector<std::string> f = split(line);
    if (f.size() < header.size()) f.resize(header.size());
    auto get = [&](const char* name) -> const std::string& { return f[index.at(name)]; };
    try {
      ResultRow r;
      r.family = get("family");
      r.n = std::stoul(get("n"));
      r.B = Rational::parse(get("B"));
      r.seed = std::stoull(get("seed"));
      r.algorithm = get("algorithm");
      r.feasible = get("feasible") == "true";
      if (r.feasible) {
        r.makespan = std::stoll(get("makespan"));
        r.total_completion = Rational::parse(get("total_completion"));
        r.average_completion = Rational::parse(get("average_completion"));
        r.max_edge_load = Rational::parse(get("max_edge_load"));
        r.lower_bound_max = Rational::parse(get("lower_bound_max"));
        r.ratio_makespan = Rational::parse(get("ratio_makespan"));
        r.ratio_avg = Rational::parse(get("ratio_avg"));
      }
      if (!get("opt_direct").empty()) r.opt_direct = Rational::parse(get("opt_direct"));
      if (!get("ratio_opt").empty()) r.ratio_opt = Rational::parse(get("ratio_opt"));
      if (!get("wall_time_ms").empty()) r.wall_time_ms = std::stod(get("wall_time_ms"));
      r.note = get("note");
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error("results line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return rows;
}

namespace {

struct Quadrant {
  const char* matching;
  const char* routing;
  const char* objective;
  const char* known;
  std::vector<std::string> algorithms;
  enum class Measure { kMakespanOverLoad, kMakespanOverBound, kAvgOverBound, kAvgOverOpt, kNone } measure;
};

const std::vector<Quadrant>& quadrants() {
  using M = Quadrant::Measure;
  static const std::vector<Quadrant> table = {
      {"fractional", "direct", "makespan", "1", {"smeared"}, M::kMakespanOverLoad},
      {"fractional", "indirect", "makespan", "1", {"smeared"}, M::kMakespanOverLoad},
      {"integral", "direct", "makespan", "1", {"edge-coloring"}, M::kMakespanOverLoad},
      {"integral", "indirect", "makespan", "O(log n)",
       {"round-robin", "hypercube", "elementary-basis", "grid", "vlb", "auto"}, M::kMakespanOverBound},
      {"fractional", "direct", "avg-completion", "1 (LP)", {"greedy"}, M::kAvgOverOpt},
      {"fractional", "indirect", "avg-completion", "O(log n); greedy 16", {"greedy"}, M::kAvgOverOpt},
      {"integral", "direct", "avg-completion", "sqrt(2)", {}, M::kNone},
      {"integral", "indirect", "avg-completion", "O(log n)",
       {"round-robin", "hypercube", "elementary-basis", "grid", "vlb", "auto"}, M::kAvgOverBound},
  };
  return table;
}

// ceil of the diagonal-free load bound, recovered from the instance family.
Rational fractional_floor(const ResultRow& r) {
  Rational load = r.B;
  if (r.family == "uniform") load = r.B * Rational(static_cast<std::int64_t>(r.n - 1)) / Rational(static_cast<std::int64_t>(r.n));
  return Rational(load.ceil_int());
}

}  // namespace

std::string emit_table1(const std::vector<ResultRow>& rows, const std::string& format) {
  struct Line {
    std::string matching, routing, objective, known, algorithms, measured, cells;
  };
  std::vector<Line> lines;
  for (const auto& q : quadrants()) {
    Line line{q.matching, q.routing, q.objective, q.known, "", "", ""};
    for (std::size_t k = 0; k < q.algorithms.size(); ++k) line.algorithms += (k ? " " : "") + q.algorithms[k];
    if (q.measure == Quadrant::Measure::kNone) {
      line.algorithms = "-";
      line.measured = "out-of-scope";
      line.cells = "0";
      lines.push_back(std::move(line));
      continue;
    }
    std::optional<Rational> worst;
    std::size_t count = 0;
    for (const auto& r : rows) {
      if (!r.feasible) continue;
      if (std::find(q.algorithms.begin(), q.algorithms.end(), r.algorithm) == q.algorithms.end()) continue;
      std::optional<Rational> value;
      switch (q.measure) {
        case Quadrant::Measure::kMakespanOverLoad: {
          const Rational floor = fractional_floor(r);
          if (floor.sign() > 0) value = Rational(r.makespan) / floor;
          break;
        }
        case Quadrant::Measure::kMakespanOverBound:
          value = r.ratio_makespan;
          break;
        case Quadrant::Measure::kAvgOverBound:
          value = r.ratio_avg;
          break;
        case Quadrant::Measure::kAvgOverOpt:
          value = r.ratio_opt;
          break;
        case Quadrant::Measure::kNone:
          break;
      }
      if (!value) continue;
      ++count;
      if (!worst || *worst < *value) worst = *value;
    }
    line.measured = worst ? to_decimal(*worst) : "no data";
    line.cells = std::to_string(count);
    lines.push_back(std::move(line));
  }

  std::ostringstream out;
  if (format == "csv") {
    out << "matching,routing,objective,known_guarantee,algorithms,measured_worst_ratio,cells\n";
    for (const auto& l : lines) {
      out << l.matching << ',' << l.routing << ',' << l.objective << ',' << l.known << ',' << l.algorithms << ','
          << l.measured << ',' << l.cells << "\n";
    }
    return out.str();
  }
  out << std::left << std::setw(11) << "matching" << std::setw(10) << "routing" << std::setw(16) << "objective"
      << std::setw(22) << "known" << std::setw(14) << "measured" << std::setw(7) << "cells"
      << "algorithms\n";
  for (const auto& l : lines) {
    out << std::left << std::setw(11) << l.matching << std::setw(10) << l.routing << std::setw(16) << l.objective
        << std::setw(22) << l.known << std::setw(14) << l.measured << std::setw(7) << l.cells << l.algorithms
        << "\n";
  }
  out << "makespan ratios divide by the lower bound (ceil of the load for fractional rows); "
         "greedy average completion divides by the direct fractional LP optimum\n";
  return out.str();
}

}  // namespace coflow
