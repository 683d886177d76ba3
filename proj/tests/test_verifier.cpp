#include <doctest.h>

#include <random>

#include "coflow/direct.hpp"
#include "coflow/indirect.hpp"
#include "coflow/verifier.hpp"
#include "support.hpp"

using namespace coflow;
using testing::make;
using testing::q;

namespace {

bool has_kind(const VerificationReport& r, Violation::Kind kind) {
  for (const auto& v : r.violations) {
    if (v.kind == kind) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("a one-step swap is feasible, direct and integral") {
  const Instance inst = make({{"0", "1"}, {"1", "0"}});
  Schedule s;
  s.steps.push_back({{{0, 1, {0, 1}, Rational(1)}, {1, 0, {1, 0}, Rational(1)}}});
  const auto r = verify(inst, s);
  CHECK(r.feasible);
  CHECK(r.is_direct);
  CHECK(r.is_integral);
  CHECK(r.max_edge_load == Rational(1));
  CHECK(r.max_hops == 1);
  CHECK(classify(s) == Classification{true, true});
}

TEST_CASE("three halves on one edge in one step is an edge capacity violation") {
  const Instance inst = make({{"0", "3/2"}, {"0", "0"}});
  Schedule s;
  s.steps.push_back({{{0, 1, {0, 1}, Rational(3, 2)}}});
  const auto r = verify(inst, s);
  CHECK_FALSE(r.feasible);
  REQUIRE(has_kind(r, Violation::Kind::kEdgeCapacity));
  const auto& v = r.violations.front();
  CHECK(v.step == 0);
  CHECK(v.node == 0);
  CHECK(*v.peer == 1);
  CHECK(r.max_edge_load == Rational(3, 2));
}

TEST_CASE("node capacities bound fractional fan-out and fan-in") {
  const Instance inst = make({{"0", "1", "1"}, {"0", "0", "0"}, {"0", "0", "0"}});
  Schedule s;
  s.steps.push_back({{{0, 1, {0, 1}, Rational(3, 4)}, {0, 2, {0, 2}, Rational(3, 4)}}});
  s.steps.push_back({{{0, 1, {0, 1}, Rational(1, 4)}, {0, 2, {0, 2}, Rational(1, 4)}}});
  const auto r = verify(inst, s);
  CHECK(has_kind(r, Violation::Kind::kSenderCapacity));
  CHECK_FALSE(has_kind(r, Violation::Kind::kEdgeCapacity));
  CHECK_FALSE(r.is_integral);

  const Instance in = make({{"0", "0", "1"}, {"0", "0", "1"}, {"0", "0", "0"}});
  Schedule t;
  t.steps.push_back({{{0, 2, {0, 2}, Rational(1)}, {1, 2, {1, 2}, Rational(1, 2)}}});
  t.steps.push_back({{{1, 2, {1, 2}, Rational(1, 2)}}});
  CHECK(has_kind(verify(in, t), Violation::Kind::kReceiverCapacity));
}

TEST_CASE("relays may only forward what arrived in earlier steps") {
  const Instance inst = make({{"0", "0", "1"}, {"0", "0", "0"}, {"0", "0", "0"}});
  Schedule good;
  good.steps.push_back({{{0, 1, {0, 2}, Rational(1)}}});
  good.steps.emplace_back();
  good.steps.push_back({{{1, 2, {0, 2}, Rational(1)}}});
  auto r = verify(inst, good);
  CHECK(r.feasible);
  CHECK_FALSE(r.is_direct);
  CHECK(r.max_hops == 2);

  Schedule same_step;
  same_step.steps.push_back({{{0, 1, {0, 2}, Rational(1)}, {1, 2, {0, 2}, Rational(1)}}});
  r = verify(inst, same_step);
  CHECK_FALSE(r.feasible);
  CHECK(has_kind(r, Violation::Kind::kConservation));

  Schedule too_much;
  too_much.steps.push_back({{{0, 1, {0, 2}, Rational(1, 2)}}});
  too_much.steps.push_back({{{1, 2, {0, 2}, Rational(1)}}});
  CHECK(has_kind(verify(inst, too_much), Violation::Kind::kConservation));
}

TEST_CASE("data may not leave its destination") {
  const Instance inst = make({{"0", "1", "0"}, {"0", "0", "0"}, {"0", "0", "0"}});
  Schedule s;
  s.steps.push_back({{{0, 1, {0, 1}, Rational(1)}}});
  s.steps.push_back({{{1, 2, {0, 1}, Rational(1)}}});
  CHECK(has_kind(verify(inst, s), Violation::Kind::kDepartsDestination));
}

TEST_CASE("unmet demand and over-delivery are reported") {
  const Instance inst = make({{"0", "2"}, {"0", "0"}});
  Schedule s;
  s.steps.push_back({{{0, 1, {0, 1}, Rational(1)}}});
  auto r = verify(inst, s);
  CHECK_FALSE(r.feasible);
  CHECK(r.violations.empty());
  CHECK(r.unmet_demand(0, 1) == Rational(1));
  s.steps.push_back({{{0, 1, {0, 1}, Rational(1)}}});
  s.steps.push_back({{{0, 1, {0, 1}, Rational(1, 2)}}});
  r = verify(inst, s);
  CHECK(r.feasible);
  CHECK(r.unmet_demand(0, 1) == Rational(-1, 2));
}

TEST_CASE("structural problems are violations, never exceptions") {
  const Instance inst = make({{"0", "1"}, {"0", "0"}});
  Schedule s;
  s.steps.push_back({{{0, 7, {0, 1}, Rational(1)}, {1, 1, {0, 1}, Rational(1)}, {1, 0, {1, 0}, Rational(1)}}});
  const auto r = verify(inst, s);
  CHECK_FALSE(r.feasible);
  CHECK(r.violations.size() == 3);
  CHECK(has_kind(r, Violation::Kind::kStructural));
}

TEST_CASE("hypercube edge load on uniform(8, 2) is exactly B/2") {
  // Self pairs never cross an edge, so zeroing the diagonal leaves the
  // busiest edge of every dimension with 4 commodities of weight 1/4.
  const Instance inst = uniform_instance(8, Rational(2));
  const auto r = verify(inst, hypercube_schedule(inst));
  CHECK(r.feasible);
  CHECK(r.max_edge_load == Rational(1));
  CHECK(r.max_hops <= 3);
  const auto classification = classify(hypercube_schedule(inst));
  CHECK_FALSE(classification.direct);
  CHECK(classification.integral);
}

TEST_CASE("hypercube edge load matches the closed form n/2 * B/n on uniform instances") {
  for (std::size_t n : {2, 4, 8, 16, 32}) {
    for (const Rational B : {Rational(1, 2), Rational(1), Rational(2)}) {
      const Instance inst = uniform_instance(n, B);
      const auto r = verify(inst, hypercube_schedule(inst));
      CHECK(r.feasible);
      CHECK(q(r.max_edge_load) == mpq_class(static_cast<long>(n / 2)) * q(B) / static_cast<long>(n));
    }
  }
}

TEST_CASE("relay mutations break feasibility") {
  const Instance inst = uniform_instance(8, Rational(1));
  const Schedule base = hypercube_schedule(inst);
  REQUIRE(verify(inst, base).feasible);
  std::mt19937_64 rng(5);
  int mutated = 0;
  for (std::size_t s = 0; s < base.steps.size(); ++s) {
    for (std::size_t k = 0; k < base.steps[s].transfers.size(); ++k) {
      const Transfer& t = base.steps[s].transfers[k];
      if (t.from == t.commodity.origin) continue;
      // Candidates hold none of this commodity before step s.
      std::vector<bool> holds(8, false);
      holds[t.commodity.origin] = holds[t.from] = holds[t.to] = true;
      for (std::size_t e = 0; e < s; ++e) {
        for (const auto& u : base.steps[e].transfers) {
          if (u.commodity == t.commodity) holds[u.to] = true;
        }
      }
      std::vector<NodeId> candidates;
      for (NodeId v = 0; v < 8; ++v) {
        if (!holds[v]) candidates.push_back(v);
      }
      if (candidates.empty()) continue;
      Schedule copy = base;
      const NodeId other = candidates[rng() % candidates.size()];
      copy.steps[s].transfers[k].from = other;
      CHECK_FALSE(verify(inst, copy).feasible);
      CHECK_FALSE(testing::reference_check(inst, copy).feasible);
      ++mutated;
    }
  }
  CHECK(mutated > 0);
}

TEST_CASE("verifier agrees with the reference check on every scheduler") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 30; ++k) {
    const std::size_t n = 4;
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && rng() % 2) d[i][j] = Rational(static_cast<std::int64_t>(rng() % 3), 4);
      }
    }
    const Instance inst = make_instance(n, d);
    for (const Schedule& s : {greedy_schedule(inst).schedule, edge_coloring_schedule(inst),
                              smeared_fractional_schedule(inst), round_robin_schedule(inst),
                              vlb_lift(inst, Scheme::kHypercube)}) {
      const auto r = verify(inst, s);
      const auto ref = testing::reference_check(inst, s);
      CHECK(r.feasible == ref.feasible);
      CHECK(q(r.max_edge_load) == ref.max_edge_load);
      CHECK(r.is_direct == !ref.relayed);
    }
  }
}
