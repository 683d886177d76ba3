#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coflow/algorithms.hpp"
#include "coflow/bounds.hpp"
#include "coflow/certificate.hpp"
#include "coflow/errors.hpp"
#include "coflow/experiment.hpp"
#include "coflow/io.hpp"
#include "coflow/lp.hpp"
#include "coflow/verifier.hpp"

using namespace coflow;

namespace {

struct Globals {
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool seed_set = false;
};

// Scalar fields only; nested values are left to the JSON format.
std::string json_to_csv(const Json& j) {
  std::ostringstream header;
  std::ostringstream values;
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (value.is_structured()) continue;
    header << (first ? "" : ",") << key;
    values << (first ? "" : ",") << (value.is_string() ? value.get<std::string>() : value.dump());
    first = false;
  }
  return header.str() + "\n" + values.str() + "\n";
}

void emit(const Json& j, const Globals& g, const std::string& out_path = "") {
  const std::string text = g.format == "csv" ? json_to_csv(j) : j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

Instance load_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

std::optional<Rational> parse_cap(const std::string& text) {
  if (text == "none" || text == "inf") return std::nullopt;
  return Rational::parse(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coflow scheduling over reconfigurable networks: schedulers, verifier, bounds and LP oracle"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "Random seed")->each([&g](const std::string&) { g.seed_set = true; });
  app.add_option("--workers", g.workers, "Worker threads for experiments")->check(CLI::PositiveNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "Generate an instance");
  std::string gen_family = "uniform";
  std::size_t gen_n = 0;
  std::string gen_B;
  std::string gen_out;
  gen->add_option("--family", gen_family, "uniform | random-sparse | adversarial-single-row");
  gen->add_option("--n", gen_n, "Node count")->required();
  gen->add_option("--B", gen_B, "Load bound p/q")->required();
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // schedule
  auto* sched = app.add_subcommand("schedule", "Compute a schedule");
  std::string algorithm;
  std::string sched_instance;
  std::string sched_out;
  std::string order = "lex";
  std::optional<std::size_t> dimension;
  std::string scheme_name;
  bool pad = false;
  std::string padded_out;
  std::string trace_out;
  sched->add_option("--algorithm", algorithm, "Scheduling algorithm")->required()->check(CLI::IsMember(algorithm_names()));
  sched->add_option("--instance", sched_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  sched->add_option("--out", sched_out, "Schedule JSON output (default stdout)");
  sched->add_option("--order", order, "Greedy pair order")->check(CLI::IsMember({"lex", "residual", "load", "random"}));
  sched->add_option("--dimension", dimension, "Elementary-basis dimension");
  sched->add_option("--scheme", scheme_name, "Base scheme for vlb")
      ->check(CLI::IsMember({"round-robin", "hypercube", "elementary-basis", "grid"}));
  sched->add_flag("--pad", pad, "Embed the instance into the next node count the scheme supports");
  sched->add_option("--padded-instance", padded_out, "Where --pad writes the embedded instance");
  sched->add_option("--trace", trace_out, "Greedy trace JSON output");

  // verify
  auto* ver = app.add_subcommand("verify", "Check a schedule against an instance (exit 1 if infeasible)");
  std::string ver_instance;
  std::string ver_schedule;
  ver->add_option("--instance", ver_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  ver->add_option("--schedule", ver_schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);

  // metrics
  auto* met = app.add_subcommand("metrics", "Makespan and completion times of a schedule");
  std::string met_instance;
  std::string met_schedule;
  bool met_bounds = false;
  met->add_option("--instance", met_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  met->add_option("--schedule", met_schedule, "Schedule JSON")->required()->check(CLI::ExistingFile);
  met->add_flag("--bounds", met_bounds, "Also compare against the instance's lower bounds");

  // certify
  auto* cert = app.add_subcommand("certify", "Build and check the dual certificate of a greedy trace");
  std::string cert_instance;
  std::string cert_trace;
  cert->add_option("--instance", cert_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  cert->add_option("--trace", cert_trace, "Greedy trace JSON")->required()->check(CLI::ExistingFile);

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Makespan bounds for uniform load B on n nodes");
  std::size_t bnd_n = 0;
  std::string bnd_B;
  bnd->add_option("--n", bnd_n, "Node count")->required();
  bnd->add_option("--B", bnd_B, "Load bound p/q")->required();

  // oracle
  auto* orc = app.add_subcommand("oracle", "Exact completion-time LP on a tiny instance");
  std::string orc_instance;
  std::string sender_cap = "1";
  std::string receiver_cap = "1";
  std::optional<std::size_t> horizon;
  OracleLimits limits;
  orc->add_option("--instance", orc_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  orc->add_option("--sender-cap", sender_cap, "Per-slot sender cap p/q or none");
  orc->add_option("--receiver-cap", receiver_cap, "Per-slot receiver cap p/q or none");
  orc->add_option("--horizon", horizon, "Number of slots (default ceil(sum D) + n)");
  orc->add_option("--max-nodes", limits.max_nodes, "Size guard on n");
  orc->add_option("--max-horizon", limits.max_horizon, "Size guard on the horizon");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a parameter sweep from a YAML config");
  std::string exp_config;
  std::string exp_out;
  exp->add_option("--config", exp_config, "Experiment YAML")->required()->check(CLI::ExistingFile);
  exp->add_option("--out", exp_out, "CSV output (overrides the config)");

  // table1
  auto* tab = app.add_subcommand("table1", "Summarize experiment results per routing quadrant");
  std::string tab_results;
  tab->add_option("--results", tab_results, "Results CSV")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      const Instance instance = generate(parse_family(gen_family), gen_n, Rational::parse(gen_B), g.seed);
      emit(instance_to_json(instance), Globals{}, gen_out);
      return 0;
    }

    if (sched->parsed()) {
      Instance instance = load_instance(sched_instance);
      AlgorithmOptions options;
      options.order = parse_order(order);
      options.seed = g.seed;
      options.dimension = dimension;
      if (!scheme_name.empty()) options.scheme = parse_scheme(scheme_name);
      if (pad) {
        if (const auto scheme = size_constrained_scheme(algorithm, instance, options)) {
          const std::size_t target = supported_size(*scheme, instance.n(), dimension);
          if (target != instance.n()) {
            instance = pad_instance(instance, target);
            const std::string path = padded_out.empty() ? (sched_out.empty() ? std::string("padded_instance.json")
                                                                               : sched_out + ".instance.json")
                                                        : padded_out;
            write_text_file(path, instance_to_json(instance).dump(2) + "\n");
            std::cerr << "padded to n = " << target << "; instance written to " << path << "\n";
          }
        }
      }
      const AlgorithmRun run = run_algorithm(algorithm, instance, options);
      emit(schedule_to_json(run.schedule), Globals{}, sched_out);
      if (!trace_out.empty()) {
        if (!run.trace) throw Error("--trace is only available for the greedy algorithm");
        write_text_file(trace_out, trace_to_json(*run.trace).dump(2) + "\n");
      }
      std::cerr << run.description << ": " << run.schedule.horizon() << " steps\n";
      return 0;
    }

    if (ver->parsed()) {
      const Instance instance = load_instance(ver_instance);
      const Schedule schedule = schedule_from_json(read_json_file(ver_schedule));
      const VerificationReport report = verify(instance, schedule);
      emit(report_to_json(report), g);
      return report.feasible ? 0 : 1;
    }

    if (met->parsed()) {
      const Instance instance = load_instance(met_instance);
      const Schedule schedule = schedule_from_json(read_json_file(met_schedule));
      Json out = metrics_to_json(compute_metrics(instance, schedule));
      if (met_bounds) {
        const Json gap = gap_to_json(compare(instance, schedule, lower_bounds(instance)));
        for (const auto& [key, value] : gap.items()) out[key] = value;
      }
      emit(out, g);
      return 0;
    }

    if (cert->parsed()) {
      const Instance instance = load_instance(cert_instance);
      const GreedyTrace trace = trace_from_json(read_json_file(cert_trace));
      const DualCertificate certificate = build_certificate(trace);
      const CertificateCheck check = check_certificate(instance, trace, certificate);
      if (g.format == "csv") {
        emit(certificate_check_to_json(check), g);
      } else {
        emit(Json{{"certificate", certificate_to_json(certificate)}, {"check", certificate_check_to_json(check)}}, g);
      }
      return check.passed ? 0 : 1;
    }

    if (bnd->parsed()) {
      emit(bounds_to_json(lower_bounds(bnd_n, Rational::parse(bnd_B))), g);
      return 0;
    }

    if (orc->parsed()) {
      const Instance instance = load_instance(orc_instance);
      const std::size_t T =
          horizon.value_or(static_cast<std::size_t>(instance.total_demand().ceil_int()) + instance.n());
      const LPSolution solution =
          solve_completion_lp(instance, parse_cap(sender_cap), parse_cap(receiver_cap), T, limits);
      emit(lp_solution_to_json(solution), g);
      return solution.status == LPStatus::kOptimal ? 0 : 1;
    }

    if (exp->parsed()) {
      ExperimentConfig config = load_config(exp_config);
      if (app.get_option("--workers")->count() > 0) config.workers = g.workers;
      if (g.seed_set) config.seed = g.seed;
      if (!exp_out.empty()) config.output = exp_out;
      const auto rows = run_experiment(config);
      if (config.output.empty() || config.output == "-") {
        write_results_csv(rows, std::cout);
      } else {
        std::ofstream out(config.output);
        if (!out) throw Error("cannot write " + config.output);
        write_results_csv(rows, out);
        std::cerr << rows.size() << " rows written to " << config.output << "\n";
      }
      return 0;
    }

    if (tab->parsed()) {
      std::ifstream in(tab_results);
      if (!in) throw Error("cannot open " + tab_results);
      std::cout << emit_table1(read_results_csv(in), g.format == "csv" ? "csv" : "text");
      return 0;
    }
  } catch (const OracleSizeError& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
