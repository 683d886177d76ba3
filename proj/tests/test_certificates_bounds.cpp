#include <doctest.h>

#include <cmath>

#include "coflow/bounds.hpp"
#include "coflow/certificate.hpp"
#include "coflow/direct.hpp"
#include "coflow/errors.hpp"
#include "coflow/indirect.hpp"
#include "support.hpp"

using namespace coflow;
using testing::make;
using testing::q;

TEST_CASE("certificate for a single three-halves commodity") {
  const Instance inst = make({{"0", "3/2"}, {"0", "0"}});
  const auto run = greedy_schedule(inst);
  const DualCertificate c = build_certificate(run.trace);
  CHECK(c.alpha_S(0, 1) == Rational(3, 2));
  REQUIRE(c.beta_S[0].size() == 3);
  CHECK(c.beta_S[0][0] == Rational(3, 8));
  CHECK(c.beta_S[0][1] == Rational(1, 8));
  CHECK(c.beta_S[0][2] == Rational(0));
  // 3/2 * 3/2 - (3/8 + 1/8)
  CHECK(q(c.obj_DS) == mpq_class(9, 4) - mpq_class(1, 2));
  CHECK(c.obj_DR == Rational(7, 4));
  const auto check = check_certificate(inst, run.trace, c);
  CHECK(check.passed);
  CHECK(check.dual_sum == Rational(7, 2));
  CHECK(check.alg_total_completion == Rational(2));
}

TEST_CASE("certificate for a swap satisfies the half-ALG bound") {
  const Instance inst = make({{"0", "1"}, {"1", "0"}});
  const auto run = greedy_schedule(inst);
  const DualCertificate c = build_certificate(run.trace);
  // Each side: sum D_ij * 1 - (1/4 + 1/4) over t = 0, plus zeros at t = 1.
  CHECK(c.obj_DS == Rational(3, 2));
  CHECK(c.obj_DR == Rational(3, 2));
  const auto check = check_certificate(inst, run.trace, c);
  CHECK(check.passed);
  CHECK(check.dual_sum * Rational(2) >= Rational(2));
}

TEST_CASE("empty instance gives the zero certificate") {
  const Instance inst = make({{"0", "0"}, {"0", "0"}});
  const auto run = greedy_schedule(inst);
  const DualCertificate c = build_certificate(run.trace);
  CHECK(c.horizon == 0);
  CHECK(c.obj_DS == Rational(0));
  CHECK(c.obj_DR == Rational(0));
  CHECK(c.alpha_S.all_zero());
  CHECK(check_certificate(inst, run.trace, c).passed);
}

TEST_CASE("an unfinished trace is rejected") {
  const Instance inst = make({{"0", "2"}, {"0", "0"}});
  auto run = greedy_schedule(inst);
  run.trace.matchings.pop_back();
  run.trace.residuals.pop_back();
  run.trace.refresh_sums();
  CHECK_THROWS_AS(build_certificate(run.trace), TraceError);
  GreedyTrace empty;
  CHECK_THROWS_AS(build_certificate(empty), TraceError);
}

TEST_CASE("small fractional demand breaks the half-ALG objective bound") {
  // DS = DR = 1/9 - 1/12 while ALG = 1/3.
  const Instance inst = make({{"0", "1/3"}, {"0", "0"}});
  const auto run = greedy_schedule(inst);
  const DualCertificate c = build_certificate(run.trace);
  CHECK(c.obj_DS == Rational(1, 36));
  const auto check = check_certificate(inst, run.trace, c);
  CHECK(check.feasible_DS);
  CHECK(check.feasible_DR);
  CHECK(check.residual_identity);
  CHECK_FALSE(check.objective_bound);
  CHECK_FALSE(check.passed);
  CHECK(check.dual_sum == Rational(1, 18));
}

TEST_CASE("integral demand certifies fully") {
  for (const auto& base : testing::small_corpus(120, 99)) {
    std::vector<std::vector<Rational>> d(base.n(), std::vector<Rational>(base.n()));
    for (std::size_t i = 0; i < base.n(); ++i) {
      for (std::size_t j = 0; j < base.n(); ++j) d[i][j] = base.demand(i, j) * Rational(12);
    }
    const Instance inst = make_instance(base.n(), d);
    for (const auto order : {PairOrder::kLexicographic, PairOrder::kRandom}) {
      const auto run = greedy_schedule(inst, {order, 4});
      const auto check = check_certificate(inst, run.trace, build_certificate(run.trace));
      CHECK_MESSAGE(check.passed, check.first_violation);
    }
  }
}

TEST_CASE("every greedy run on the corpus gives a feasible dual") {
  for (const auto& inst : testing::small_corpus(120, 99)) {
    for (const auto order : {PairOrder::kLexicographic, PairOrder::kRandom}) {
      const auto run = greedy_schedule(inst, {order, 4});
      const DualCertificate c = build_certificate(run.trace);
      const auto check = check_certificate(inst, run.trace, c);
      CHECK(check.trace_consistent);
      CHECK(check.feasible_DS);
      CHECK(check.feasible_DR);
      CHECK(check.residual_identity);
      // Independent recomputation of the objective bound.
      mpq_class ds = 0, dr = 0;
      const auto d = testing::matrix(inst);
      for (std::size_t i = 0; i < inst.n(); ++i) {
        for (std::size_t j = 0; j < inst.n(); ++j) {
          ds += d[i][j] * q(inst.row_sums()[i]);
          dr += d[i][j] * q(inst.col_sums()[j]);
        }
        for (std::size_t t = 0; t <= run.trace.horizon(); ++t) {
          ds -= q(run.trace.residuals[t].row_sum(i)) / 4;
          dr -= q(run.trace.residuals[t].col_sum(i)) / 4;
        }
      }
      CHECK(q(c.obj_DS) == ds);
      CHECK(q(c.obj_DR) == dr);
      const mpq_class alg = q(compute_metrics(inst, run.schedule).total_completion);
      CHECK(check.objective_bound == (2 * (ds + dr) >= alg));
      CHECK(check.passed == check.objective_bound);
    }
  }
}

TEST_CASE("lowering beta_S at t = 0 is caught at (i, j, 0)") {
  const Instance inst = make({{"0", "1", "1/2"}, {"1/3", "0", "0"}, {"0", "3/2", "0"}});
  const auto run = greedy_schedule(inst);
  DualCertificate c = build_certificate(run.trace);
  c.beta_S[0][0] -= Rational(1, 100);
  const auto check = check_certificate(inst, run.trace, c);
  CHECK_FALSE(check.passed);
  CHECK_FALSE(check.feasible_DS);
  CHECK(check.first_violation.find("(0, 0, 0)") != std::string::npos);
}

TEST_CASE("tampered objectives, traces and residual identities are reported") {
  const Instance inst = make({{"0", "1", "1/2"}, {"1/3", "0", "0"}, {"0", "3/2", "0"}});
  const auto run = greedy_schedule(inst);
  DualCertificate c = build_certificate(run.trace);

  DualCertificate inflated = c;
  inflated.obj_DR += Rational(1);
  CHECK_FALSE(check_certificate(inst, run.trace, inflated).passed);

  DualCertificate raised = c;
  raised.beta_R[1][1] += Rational(1, 2);
  const auto r = check_certificate(inst, run.trace, raised);
  CHECK_FALSE(r.passed);
  CHECK(r.feasible_DR);
  CHECK_FALSE(r.residual_identity);

  GreedyTrace bent = run.trace;
  bent.residuals[1](0, 1) += Rational(1, 7);
  bent.refresh_sums();
  CHECK_FALSE(check_certificate(inst, bent, c).trace_consistent);

  const Instance other = make({{"0", "1", "1/2"}, {"1/3", "0", "0"}, {"0", "1", "0"}});
  CHECK_FALSE(check_certificate(other, run.trace, c).passed);
}

TEST_CASE("lower bound examples") {
  BoundsReport b = lower_bounds(1024, Rational(2));
  CHECK(b.log_lb == Rational(10));
  CHECK(b.ceil_B == 2);
  CHECK(b.max_lb == Rational(10));

  b = lower_bounds(1024, Rational(32));
  CHECK(b.upper_scale == Rational(64));
  REQUIRE(b.mid_lb.has_value());
  // d = (1/3) * 10 / 5, value B d / 2
  CHECK(q(*b.mid_lb) == mpq_class(32) * q(10, 15) / 2);
  CHECK(b.upper_formula == Rational(2 * 32 * 3));
  CHECK_FALSE(b.rounded);

  b = lower_bounds(4, Rational(16));
  CHECK(b.ceil_B == 16);
  CHECK(b.max_lb == Rational(16));
  CHECK_FALSE(b.mid_lb.has_value());
  CHECK(b.regime == Regime::kLinear);
}

TEST_CASE("irrational logarithms are rounded in the safe direction") {
  const BoundsReport b = lower_bounds(1000, Rational(7));
  REQUIRE(b.mid_lb.has_value());
  CHECK(b.rounded);
  const double ratio = std::log2(1000.0) / std::log2(7.0);
  CHECK(q(*b.mid_lb) <= mpq_class(7) * mpq_class(ratio) / 6 + mpq_class(1, 1000000));
  CHECK(q(*b.mid_lb) > mpq_class(7) * mpq_class(ratio) / 6 - mpq_class(1, 100));
  CHECK(q(b.upper_formula) >= mpq_class(14) * mpq_class(ratio + 1) - mpq_class(1, 1000000));
  CHECK(q(b.upper_formula) < mpq_class(14) * mpq_class(ratio + 1) + mpq_class(1, 100));

  const BoundsReport exact = lower_bounds(1000, Rational(10));
  CHECK_FALSE(exact.rounded);
  CHECK(exact.mid_lb == Rational(5));
  CHECK(lower_bounds(1000, Rational(1)).log_lb == Rational(10));
  CHECK_THROWS_AS(lower_bounds(1, Rational(1)), ValidationError);
  CHECK_THROWS_AS(lower_bounds(8, Rational(0)), ValidationError);
}

TEST_CASE("path counting") {
  CHECK(path_count_feasible(3, 3, 8));
  CHECK(path_count(3, 3, 8).count == 7);
  CHECK_FALSE(path_count_feasible(2, 2, 8));
  CHECK(path_count(2, 2, 8).count == 3);
  CHECK(path_count(10, 2, 1024).count == 55);
  CHECK_FALSE(path_count_feasible(10, 2, 1024));
  for (long L = 0; L <= 40; ++L) {
    for (long h = 0; h <= L + 2; h += 3) CHECK(path_count(L, h, 2).count == testing::binomial_sum(L, h));
    const mpz_class full = (mpz_class(1) << static_cast<mp_bitcnt_t>(L)) - 1;
    for (std::size_t n : {2, 7, 100, 4096}) {
      CHECK(path_count_feasible(L, L, n) == (2 * full >= n));
    }
  }
  CHECK(path_count(200, 100, 2).count == testing::binomial_sum(200, 100));
}

TEST_CASE("gap report examples") {
  const Instance cube = uniform_instance(1024, Rational(2));
  const GapReport g = compare(cube, hypercube_schedule(cube), lower_bounds(1024, Rational(2)));
  CHECK(g.makespan == 10);
  CHECK(g.max_lb == Rational(10));
  CHECK(g.ratio_makespan == Rational(1));
  CHECK_FALSE(g.informational);

  const Instance rr = uniform_instance(4, Rational(8));
  const GapReport h = compare(rr, round_robin_schedule(rr), lower_bounds(4, Rational(8)));
  CHECK(h.makespan == 6);
  CHECK(h.ratio_makespan == Rational(3, 4));
  CHECK(h.ratio_makespan_decimal == "0.75");

  Schedule broken;
  broken.steps.push_back({{{0, 1, {0, 1}, Rational(3)}}});
  CHECK_THROWS_AS(compare(rr, broken, lower_bounds(4, Rational(8))), std::invalid_argument);
  const Instance sparse = make({{"0", "1"}, {"0", "0"}});
  CHECK(compare(sparse, greedy_schedule(sparse).schedule, lower_bounds(sparse)).informational);
}
