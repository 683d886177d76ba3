#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "coflow/model.hpp"
#include "coflow/rational.hpp"

namespace coflow {

enum class Regime { kLogarithmic, kMiddle, kLinear };
std::string to_string(Regime regime);

/// Makespan bounds for n nodes under uniform load B.
///
/// log_lb is the smallest L with 2^L >= n, i.e. log2 n for powers of two.
/// mid_lb = B d / 2 with d = log2 n / (3 log2 B), only for 2 <= B <= n; when
/// the logarithms are irrational it is rounded down to a rigorous rational.
/// upper_formula is the guaranteed makespan of the regime's scheme
/// (log2 n, 2B (log n / log B + 1), 2B); upper_scale drops the constants
/// (log2 n, B log n / log B, B). Irrational values are rounded up.
struct BoundsReport {
  std::size_t n = 0;
  Rational B;
  Regime regime = Regime::kLogarithmic;
  std::int64_t ceil_B = 0;
  Rational log_lb;
  std::optional<Rational> mid_lb;
  Rational max_lb;
  Rational upper_formula;
  Rational upper_scale;
  /// False when every rounded value above is exact.
  bool rounded = false;
};

/// Throws ValidationError unless n >= 2 and B > 0.
BoundsReport lower_bounds(std::size_t n, const Rational& B);

/// Bounds for an instance, using its load bound.
BoundsReport lower_bounds(const Instance& instance);

struct PathCountCheck {
  std::int64_t L = 0;
  std::int64_t h = 0;
  /// sum_{i=1..min(h, L)} C(L, i)
  mpz_class count;
  bool feasible = false;
};

/// Feasible iff count >= n / 2. Throws std::invalid_argument on negative L or h.
PathCountCheck path_count(std::int64_t L, std::int64_t h, std::size_t n);
bool path_count_feasible(std::int64_t L, std::int64_t h, std::size_t n);

struct GapReport {
  std::int64_t makespan = 0;
  Rational total_completion;
  Rational average_completion;
  Rational max_lb;
  Rational ratio_makespan;
  Rational ratio_avg;
  std::string ratio_makespan_decimal;
  std::string ratio_avg_decimal;
  /// Lower bounds are only proven for uniform demand; otherwise informational.
  bool informational = false;
};

/// Throws std::invalid_argument for an infeasible schedule.
GapReport compare(const Instance& instance, const Schedule& schedule, const BoundsReport& bounds);

}  // namespace coflow
