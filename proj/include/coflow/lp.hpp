#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "coflow/model.hpp"
#include "coflow/rational.hpp"

namespace coflow {

/// minimize c.x subject to the rows, x >= 0.
struct LinearProgram {
  enum class Sense { kLessEqual, kGreaterEqual, kEqual };
  struct Row {
    std::vector<std::pair<std::size_t, Rational>> coeffs;
    Sense sense = Sense::kLessEqual;
    Rational rhs;
  };

  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<Row> rows;

  std::size_t add_variable(const Rational& cost);
  void add_row(Row row);
};

enum class PricingRule {
  kBland,
  /// Most negative reduced cost, switching to Bland's rule after a run of
  /// degenerate pivots.
  kDantzigWithBlandFallback,
};

struct SimplexResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  Rational objective;
  std::vector<Rational> x;
  std::size_t pivots = 0;
};

/// Two-phase primal simplex over exact rationals on a dense tableau.
SimplexResult solve_simplex(const LinearProgram& lp, PricingRule rule = PricingRule::kDantzigWithBlandFallback);

/// True iff x is nonnegative and satisfies every row exactly.
bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x);

/// Desk-scale limits for the completion-time LP.
struct OracleLimits {
  std::size_t max_nodes = 6;
  std::size_t max_horizon = 24;
};

/// Per-slot cap on the outgoing (sender) or incoming (receiver) sum; nullopt
/// removes the constraint family.
using Cap = std::optional<Rational>;

enum class LPStatus { kOptimal, kInfeasible, kHorizonTooShort };
std::string to_string(LPStatus status);

/// Completion-time LP over slots t = 1..T:
///   minimize sum t x_ijt  s.t.  sum_t x_ijt >= D_ij,
///   sum_j x_ijt <= sender_cap,  sum_i x_ijt <= receiver_cap,  x >= 0.
struct LPSolution {
  LPStatus status = LPStatus::kInfeasible;
  std::size_t horizon = 0;
  Rational objective;
  /// Nonzero entries keyed (i, j, t).
  std::map<std::tuple<NodeId, NodeId, std::size_t>, Rational> x;
  std::size_t pivots = 0;
};

/// Throws OracleSizeError above the limits and ValidationError for a
/// non-positive cap. Infeasible at T but feasible at 2T reports
/// kHorizonTooShort.
LPSolution solve_completion_lp(const Instance& instance, const Cap& sender_cap, const Cap& receiver_cap,
                               std::size_t horizon, const OracleLimits& limits = {});

/// Exact check of an optimal solution against every constraint and its
/// objective.
bool check_completion_solution(const Instance& instance, const Cap& sender_cap, const Cap& receiver_cap,
                               const LPSolution& solution);

/// Caps (1, 1), T = ceil(sum D) + n.
Rational opt_direct_fractional(const Instance& instance, const OracleLimits& limits = {});
/// Caps (1/4, none) and (none, 1/4), T = 4 ceil(sum D) + n. The size guard
/// applies to the base horizon ceil(sum D) + n.
Rational opt_sender_bound(const Instance& instance, const OracleLimits& limits = {});
Rational opt_receiver_bound(const Instance& instance, const OracleLimits& limits = {});

}  // namespace coflow
