#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coflow/model.hpp"

namespace coflow {

enum class Scheme { kRoundRobin, kHypercube, kElementaryBasis, kGrid };

std::string to_string(Scheme scheme);
/// Accepts "round-robin", "hypercube", "elementary-basis", "grid".
Scheme parse_scheme(const std::string& name);

/// A fixed sequence of integral matchings, each repeated `multiplicity` times
/// in consecutive steps.
///
/// | scheme           | dimension   | base     | length                  |
/// |------------------|-------------|----------|-------------------------|
/// | round-robin      | 1           | n        | (n-1) * m               |
/// | hypercube        | log2 n      | 2        | log2 n                  |
/// | elementary basis | d           | n^(1/d)  | d * (n^(1/d) - 1) * m   |
/// | grid             | 2           | sqrt n   | 2 * (sqrt n - 1)        |
struct ConnectionSchedule {
  Scheme scheme = Scheme::kRoundRobin;
  std::size_t n = 0;
  std::size_t dimension = 1;
  std::size_t base = 0;
  std::size_t multiplicity = 1;
  std::vector<IntegralMatching> matchings;

  std::size_t length() const { return matchings.size(); }
};

struct Hop {
  std::size_t step = 0;
  NodeId from = 0;
  NodeId to = 0;
  friend bool operator==(const Hop&, const Hop&) = default;
};

struct HopPath {
  std::vector<Hop> hops;
  Rational amount;
};

/// How one commodity's flow is carried over a connection schedule.
struct RoutingAssignment {
  Commodity commodity;
  std::vector<HopPath> paths;

  Rational total() const;
  std::size_t max_hops() const;
};

// Connection schedules. Sizes a scheme cannot handle raise UnsupportedSizeError.
ConnectionSchedule round_robin_connection(std::size_t n, std::size_t multiplicity);
ConnectionSchedule hypercube_connection(std::size_t n);
ConnectionSchedule elementary_basis_connection(std::size_t n, std::size_t dimension, std::size_t multiplicity);
ConnectionSchedule grid_connection(std::size_t n);

/// Exact integer d-th root of n, if any.
std::optional<std::size_t> exact_root(std::size_t n, std::size_t d);

/// Smallest d >= 1 with load^d >= n, i.e. ceil(log2 n / log2 load); none when
/// load <= 1.
std::optional<std::size_t> coordinate_dimension(std::size_t n, const Rational& load);

/// Elementary-basis parameters for a per-scheme load U (n times the largest
/// pair demand for native routing). With no explicit dimension the
/// ceil(log n / log U) choice is used when n^(1/d) is integral; otherwise the
/// integral-root dimension with the shortest schedule.
struct BasisPlan {
  std::size_t dimension = 1;
  std::size_t base = 0;
  std::size_t multiplicity = 1;
  std::size_t length() const { return dimension * (base - 1) * multiplicity; }
};
BasisPlan plan_elementary_basis(std::size_t n, const Rational& load, std::optional<std::size_t> dimension);

/// Routes `amount` from u to v over the connection schedule's own rule:
/// round-robin uses the direct shift, hypercube and elementary basis fix
/// coordinates in schedule order, grid fixes the row then the column.
/// Repeated matchings share the flow equally.
RoutingAssignment route_commodity(const ConnectionSchedule& connection, NodeId u, NodeId v,
                                  const Rational& amount);

/// Routes every commodity of the instance over the connection schedule.
/// Throws CapacityError if some physical edge would carry more than one unit.
Schedule route_instance(const ConnectionSchedule& connection, const Instance& instance);

/// Native connection schedules sized for the instance.
ConnectionSchedule native_connection(const Instance& instance, Scheme scheme,
                                     std::optional<std::size_t> dimension = std::nullopt);

/// Shifts 1..n-1, each repeated ceil(max D_ij) times (= ceil(B/n) on uniform
/// demand B/n); every pair is served directly in its own slots.
Schedule round_robin_schedule(const Instance& instance);
Schedule hypercube_schedule(const Instance& instance);
Schedule elementary_basis_schedule(const Instance& instance, std::optional<std::size_t> dimension = std::nullopt);
Schedule grid_schedule(const Instance& instance);

/// Connection schedule of the uniform scheme the lifting runs on: sized for
/// uniform demand load_bound / n.
ConnectionSchedule lifting_connection(const Instance& instance, Scheme scheme,
                                      std::optional<std::size_t> dimension = std::nullopt);

/// Two-phase load balancing over the doubled connection schedule: phase one
/// spreads D_uv / n of every commodity to each node, phase two forwards it to
/// v. A chunk whose first-phase path passes through v is delivered there.
/// The schedule has exactly 2T steps.
Schedule vlb_lift(const Instance& instance, Scheme scheme, std::optional<std::size_t> dimension = std::nullopt);

struct AutoPlan {
  bool lifted = false;
  Scheme scheme = Scheme::kRoundRobin;
  std::optional<std::size_t> dimension;
  std::string description;
};

/// Regime choice on B = load_bound: direct round-robin whenever its makespan
/// (n-1) * ceil(max D_ij) is within 2B (this covers B >= n on uniform
/// demand); otherwise lifting over round-robin when B >= n, over the
/// hypercube when B <= 2 and n is a power of two, and over the elementary
/// basis otherwise.
AutoPlan plan_auto(const Instance& instance);
Schedule auto_schedule(const Instance& instance);

/// Next node count the scheme supports (power of two, perfect square,
/// perfect d-th power); n itself if already supported.
std::size_t supported_size(Scheme scheme, std::size_t n, std::optional<std::size_t> dimension = std::nullopt);

}  // namespace coflow
