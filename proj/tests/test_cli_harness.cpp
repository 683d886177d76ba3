#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coflow/algorithms.hpp"
#include "coflow/errors.hpp"
#include "coflow/experiment.hpp"
#include "coflow/io.hpp"
#include "support.hpp"

using namespace coflow;
using testing::make;
using testing::q;

namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "coflow_cli_harness";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(COFLOW_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool same_row(const ResultRow& a, const ResultRow& b) {
  return a.family == b.family && a.n == b.n && a.B == b.B && a.seed == b.seed && a.algorithm == b.algorithm &&
         a.feasible == b.feasible && a.makespan == b.makespan && a.total_completion == b.total_completion &&
         a.average_completion == b.average_completion && a.max_edge_load == b.max_edge_load &&
         a.lower_bound_max == b.lower_bound_max && a.ratio_makespan == b.ratio_makespan &&
         a.ratio_avg == b.ratio_avg && a.opt_direct == b.opt_direct && a.ratio_opt == b.ratio_opt &&
         a.note == b.note;
}

}  // namespace

TEST_CASE("instances, schedules and traces survive a JSON round trip") {
  const Instance inst = make({{"0", "1/3", "7/2"}, {"1", "0", "0"}, {"0", "5/4", "0"}});
  const Json j = instance_to_json(inst);
  CHECK(j["demands"][0][1] == "1/3");
  CHECK(instance_from_json(Json::parse(j.dump())).demands() == inst.demands());

  const auto run = run_algorithm("greedy", inst);
  const Schedule s = schedule_from_json(Json::parse(schedule_to_json(run.schedule).dump()));
  CHECK(s.horizon() == run.schedule.horizon());
  CHECK(compute_metrics(inst, s).total_completion == compute_metrics(inst, run.schedule).total_completion);

  const GreedyTrace t = trace_from_json(Json::parse(trace_to_json(*run.trace).dump()));
  CHECK(t.horizon() == run.trace->horizon());
  CHECK(t.residuals == run.trace->residuals);
  CHECK(t.sender_residual == run.trace->sender_residual);

  CHECK(rational_from_json(Json(3)) == Rational(3));
  CHECK(rational_from_json(Json("-6/4")) == Rational(-3, 2));
}

TEST_CASE("malformed documents raise the matching error kind") {
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"n": 2, "demands": [["0", "1"]]})")), ValidationError);
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"n": 2, "demands": [["1", "1"], ["0", "0"]]})")),
                  ValidationError);
  CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"n": 2, "demands": [["0", "-1"], ["0", "0"]]})")),
                  ValidationError);
  CHECK_THROWS_AS(schedule_from_json(Json::parse(R"({"steps": [{"transfers": [{"from": 0}]}]})")), StructuralError);
  CHECK_THROWS_AS(trace_from_json(Json::parse(R"({"horizon": 1, "residuals": []})")), TraceError);
  const Schedule padded = schedule_from_json(Json::parse(R"({"horizon": 3, "steps": []})"));
  CHECK(padded.steps.size() == 3);
}

TEST_CASE("generator examples") {
  Instance u = generate(Family::kUniform, 9, Rational(1, 6), 0);
  CHECK(u.demand(0, 8) == Rational(1, 54));
  CHECK(u.demand(4, 4) == Rational(0));
  CHECK(u.is_uniform());

  const Instance a = generate(Family::kAdversarialSingleRow, 4, Rational(2), 0);
  CHECK(a.demand(0, 0) == Rational(0));
  for (NodeId j = 1; j < 4; ++j) CHECK(a.demand(0, j) == Rational(2, 3));
  CHECK(a.demand(1, 2) == Rational(0));
  CHECK(a.load_bound() == Rational(2));

  const Instance r1 = generate(Family::kRandomSparse, 4, Rational(1), 42);
  const Instance r2 = generate(Family::kRandomSparse, 4, Rational(1), 42);
  CHECK(r1.demands() == r2.demands());
  CHECK(q(r1.load_bound()) == testing::load_of(r1));
  CHECK(r1.load_bound() == Rational(1));
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance r = generate(Family::kRandomSparse, 8, Rational(3, 2), seed);
    CHECK(testing::load_of(r) == mpq_class(3, 2));
  }
  CHECK_THROWS_AS(generate(Family::kUniform, 1, Rational(1), 0), ValidationError);
  CHECK_THROWS_AS(parse_family("dense"), ValidationError);
}

TEST_CASE("experiment configs parse and reject bad values") {
  const ExperimentConfig c = parse_config(
      "family: uniform\nn: [4, 8]\nB: [\"1/2\", 2]\nalgorithms: [greedy, hypercube]\nseed: 7\n"
      "repetitions: 2\noracle: true\nworkers: 3\noutput: out.csv\n");
  CHECK(c.family == Family::kUniform);
  CHECK(c.n_values == std::vector<std::size_t>{4, 8});
  CHECK(c.B_values == std::vector<Rational>{Rational(1, 2), Rational(2)});
  CHECK(c.algorithms.size() == 2);
  CHECK(c.seed == 7);
  CHECK(c.repetitions == 2);
  CHECK(c.oracle);
  CHECK(c.workers == 3);
  CHECK(c.output == "out.csv");

  const ExperimentConfig scalar = parse_config("n: 16\nB: 1\nalgorithms: auto\n");
  CHECK(scalar.n_values.size() == 1);
  CHECK(scalar.workers == 1);

  CHECK_THROWS_AS(parse_config("n: [1]\nB: [1]\nalgorithms: [greedy]\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("n: [4]\nB: [0]\nalgorithms: [greedy]\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("n: [4]\nB: [1]\nalgorithms: [fastest]\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("n: [4]\nalgorithms: [greedy]\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("- just\n- a list\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("n: [4]\nB: [1]\nalgorithms: [greedy]\nrepetitions: many\n"), ValidationError);
}

TEST_CASE("experiment results do not depend on the worker count") {
  ExperimentConfig c =
      parse_config("family: random-sparse\nn: [4, 8]\nB: [1, 3]\nalgorithms: [greedy, smeared, vlb, hypercube]\n"
                   "seed: 11\nrepetitions: 2\noracle: true\n");
  const auto serial = run_experiment(c);
  c.workers = 4;
  const auto parallel = run_experiment(c);
  REQUIRE(serial.size() == 2 * 2 * 2 * 4);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t k = 0; k < serial.size(); ++k) CHECK(same_row(serial[k], parallel[k]));
  CHECK(serial[0].algorithm == "greedy");
  CHECK(serial[1].algorithm == "smeared");
  CHECK(serial[4].seed == 12);
  for (const auto& row : serial) {
    // Native hypercube routing is only sized for uniform demand.
    if (row.algorithm != "hypercube") CHECK(row.feasible);
    if (!row.feasible) CHECK(row.note.find("overloads") != std::string::npos);
    if (row.n == 4 && row.algorithm == "greedy" && row.opt_direct) CHECK(*row.ratio_opt >= Rational(1));
  }
}

TEST_CASE("hypercube rows on uniform load 2 reach log2 n") {
  const auto rows = run_experiment(parse_config("n: [2, 8, 64]\nB: [2]\nalgorithms: [hypercube, greedy]\n"));
  for (const auto& row : rows) {
    REQUIRE(row.feasible);
    if (row.algorithm != "hypercube") continue;
    long log = 0;
    while ((1L << log) < static_cast<long>(row.n)) ++log;
    CHECK(row.makespan == log);
    CHECK(row.ratio_makespan <= Rational(1));
  }
  const auto odd = run_experiment(parse_config("n: [6]\nB: [2]\nalgorithms: [hypercube]\n"));
  REQUIRE(odd.size() == 1);
  CHECK_FALSE(odd[0].feasible);
  CHECK_FALSE(odd[0].note.empty());
}

TEST_CASE("results CSV round trip") {
  const auto rows =
      run_experiment(parse_config("n: [4, 6]\nB: [\"3/2\"]\nalgorithms: [greedy, grid, edge-coloring]\noracle: true\n"));
  std::stringstream buffer;
  write_results_csv(rows, buffer);
  const std::string text = buffer.str();
  CHECK(text.rfind("# coflow-results schema=1\n", 0) == 0);
  CHECK(text.find("ratio_makespan_decimal") != std::string::npos);
  const auto back = read_results_csv(buffer);
  REQUIRE(back.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) CHECK(same_row(rows[k], back[k]));

  std::stringstream unmarked("family,n\nuniform,4\n");
  CHECK_THROWS_AS(read_results_csv(unmarked), Error);
}

TEST_CASE("table rendering covers every quadrant") {
  const auto rows = run_experiment(
      parse_config("n: [4, 8]\nB: [2]\nalgorithms: [greedy, smeared, edge-coloring, hypercube, vlb]\noracle: true\n"));
  const std::string text = emit_table1(rows);
  CHECK(text.find("out-of-scope") != std::string::npos);
  CHECK(text.find("no data") == std::string::npos);
  const std::string csv = emit_table1(rows, "csv");
  std::istringstream in(csv);
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) ++count;
  CHECK(count == 9);
  CHECK(emit_table1({}).find("no data") != std::string::npos);
}

TEST_CASE("command-line round trip through files") {
  const fs::path dir = scratch_dir();
  const std::string inst = (dir / "u.json").string();
  const std::string sched = (dir / "s.json").string();
  const std::string trace = (dir / "t.json").string();

  CHECK(run_cli("generate --family uniform --n 8 --B 2 --out " + inst) == 0);
  CHECK(instance_from_json(read_json_file(inst)).demand(0, 1) == Rational(1, 4));
  CHECK(run_cli("schedule --algorithm hypercube --instance " + inst + " --out " + sched) == 0);
  CHECK(run_cli("verify --instance " + inst + " --schedule " + sched) == 0);
  CHECK(run_cli("metrics --bounds --instance " + inst + " --schedule " + sched) == 0);
  CHECK(schedule_from_json(read_json_file(sched)).horizon() == 3);

  CHECK(run_cli("schedule --algorithm greedy --instance " + inst + " --out " + sched + " --trace " + trace) == 0);
  CHECK(run_cli("certify --instance " + inst + " --trace " + trace) == 0);
  CHECK(run_cli("bounds --n 1024 --B 32") == 0);
  CHECK(run_cli("bounds --n 1 --B 32") == 2);

  const std::string small = (dir / "small.json").string();
  write_text_file(small, R"({"n": 2, "demands": [["0", "3/2"], ["0", "0"]]})");
  CHECK(run_cli("oracle --instance " + small) == 0);
  CHECK(run_cli("oracle --instance " + small + " --horizon 1") == 1);
  CHECK(run_cli("oracle --instance " + small + " --sender-cap none --receiver-cap 1/4") == 1);
  CHECK(run_cli("oracle --instance " + small + " --sender-cap none --receiver-cap 1/4 --horizon 8") == 0);
  CHECK(run_cli("oracle --instance " + inst) == 2);

  Json bad = read_json_file(sched);
  bad["steps"][0]["transfers"][0]["amount"] = "5";
  write_text_file(sched, bad.dump());
  CHECK(run_cli("verify --instance " + inst + " --schedule " + sched) == 1);

  const std::string six = (dir / "six.json").string();
  const std::string padded = (dir / "padded.json").string();
  CHECK(run_cli("generate --n 6 --B 1 --out " + six) == 0);
  CHECK(run_cli("schedule --algorithm hypercube --instance " + six + " --out " + sched) == 2);
  CHECK(run_cli("schedule --algorithm hypercube --pad --instance " + six + " --out " + sched +
                " --padded-instance " + padded) == 0);
  CHECK(instance_from_json(read_json_file(padded)).n() == 8);
  CHECK(run_cli("verify --instance " + padded + " --schedule " + sched) == 0);

  const std::string config = (dir / "exp.yaml").string();
  const std::string results = (dir / "results.csv").string();
  write_text_file(config, "n: [4]\nB: [1]\nalgorithms: [greedy, round-robin]\noracle: true\n");
  CHECK(run_cli("--workers 2 experiment --config " + config + " --out " + results) == 0);
  CHECK(slurp(results).rfind("# coflow-results schema=1", 0) == 0);
  CHECK(run_cli("table1 --results " + results) == 0);
  CHECK(run_cli("--format csv table1 --results " + results) == 0);
  CHECK(run_cli("schedule --algorithm nonsense --instance " + inst) == 2);
  CHECK(run_cli("--help") == 0);
}
