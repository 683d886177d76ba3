#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "coflow/model.hpp"

namespace coflow {

/// How the greedy scheduler breaks the "arbitrary" choice of a maximal
/// fractional matching. Any order gives a maximal matching.
enum class PairOrder {
  kLexicographic,       // (i, j) ascending
  kResidualDescending,  // largest residual demand first, ties lexicographic
  kLoadDescending,      // largest D_i^S(t) + D_j^R(t) first, ties lexicographic
  kRandom               // seeded shuffle, redrawn each step
};

struct GreedyOptions {
  PairOrder order = PairOrder::kLexicographic;
  std::uint64_t seed = 0;
};

using PairList = std::vector<std::pair<NodeId, NodeId>>;

/// Visits `order` once, giving each pair min(residual, remaining sender cap,
/// remaining receiver cap). The result is maximal: every pair left with
/// residual has a saturated endpoint.
FractionalMatching maximal_fractional_matching(const SquareMatrix& residual, const Rational& cap,
                                               const PairList& order);
FractionalMatching maximal_fractional_matching(const SquareMatrix& residual,
                                               const Rational& cap = Rational(1));

/// Everything the dual certificate needs from a greedy run.
struct GreedyTrace {
  /// residuals[t] is D(t), t = 0..T; residuals.back() is all zero.
  std::vector<SquareMatrix> residuals;
  /// sender_residual[t][i] = D_i^S(t), receiver_residual[t][j] = D_j^R(t).
  std::vector<std::vector<Rational>> sender_residual;
  std::vector<std::vector<Rational>> receiver_residual;
  /// matchings[t] is shipped during step t, t = 0..T-1.
  std::vector<FractionalMatching> matchings;

  std::size_t horizon() const { return matchings.size(); }
  std::size_t n() const { return residuals.empty() ? 0 : residuals.front().size(); }

  /// Recomputes the per-node sums from the residual matrices.
  void refresh_sums();
};

struct GreedyResult {
  Schedule schedule;
  GreedyTrace trace;
};

/// Ships a maximal fractional matching of the residual demand every step
/// until nothing is left. Direct by construction.
GreedyResult greedy_schedule(const Instance& instance, const GreedyOptions& options = {});

/// Direct transfers, one step per matching.
Schedule schedule_from_matchings(const std::vector<FractionalMatching>& matchings);

/// Proper edge coloring of the bipartite multigraph with multiplicity[i][j]
/// parallel edges from sender i to receiver j, using exactly max-degree
/// colors. Each color class is returned as one matching.
std::vector<IntegralMatching> bipartite_edge_coloring(
    const std::vector<std::vector<std::int64_t>>& multiplicity);

/// Optimal direct integral makespan: colors the multigraph with multiplicity
/// ceil(D_ij); each slot carries min(1, remaining demand), full units first.
Schedule edge_coloring_schedule(const Instance& instance);

/// ceil(B) steps each shipping D / ceil(B).
Schedule smeared_fractional_schedule(const Instance& instance);

}  // namespace coflow
