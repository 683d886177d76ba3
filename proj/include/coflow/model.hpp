#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "coflow/rational.hpp"

namespace coflow {

using NodeId = std::uint32_t;

/// Dense n-by-n matrix of rationals, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), cells_(n * n) {}

  std::size_t size() const { return n_; }
  Rational& operator()(std::size_t i, std::size_t j) { return cells_[i * n_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }

  Rational row_sum(std::size_t i) const;
  Rational col_sum(std::size_t j) const;
  Rational total() const;
  bool all_zero() const;

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.n_ == b.n_ && a.cells_ == b.cells_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Rational> cells_;
};

/// A demand matrix over n >= 2 nodes with nonnegative entries and a zero
/// diagonal. Immutable once built.
class Instance {
 public:
  /// Throws ValidationError (too few nodes, dimension mismatch, negative
  /// entry, nonzero diagonal).
  static Instance create(std::size_t n, const std::vector<std::vector<Rational>>& demands);
  static Instance create(SquareMatrix demands);

  std::size_t n() const { return demands_.size(); }
  const SquareMatrix& demands() const { return demands_; }
  const Rational& demand(std::size_t i, std::size_t j) const { return demands_(i, j); }

  /// Maximum over all row sums and column sums.
  const Rational& load_bound() const { return load_bound_; }
  const Rational& max_entry() const { return max_entry_; }
  const Rational& total_demand() const { return total_; }
  const std::vector<Rational>& row_sums() const { return row_sums_; }
  const std::vector<Rational>& col_sums() const { return col_sums_; }

  /// True when every off-diagonal entry has the same value.
  bool is_uniform() const;
  /// Number of nonzero entries.
  std::size_t support_size() const;

 private:
  explicit Instance(SquareMatrix demands);

  SquareMatrix demands_;
  std::vector<Rational> row_sums_;
  std::vector<Rational> col_sums_;
  Rational load_bound_;
  Rational max_entry_;
  Rational total_;
};

Instance make_instance(std::size_t n, const std::vector<std::vector<Rational>>& demands);

/// Off-diagonal entries B/n, diagonal zero. The resulting load bound is
/// B*(n-1)/n; schemes parameterized by the nominal B recover it as
/// n * max_entry().
Instance uniform_instance(std::size_t n, const Rational& nominal_load);

/// Embeds the instance into a larger node set with zero demand on the new nodes.
Instance pad_instance(const Instance& instance, std::size_t padded_n);

struct Commodity {
  NodeId origin = 0;
  NodeId destination = 0;
  friend bool operator==(const Commodity&, const Commodity&) = default;
  friend auto operator<=>(const Commodity&, const Commodity&) = default;
};

/// Rates per (source, receiver) pair with per-node sums bounded by cap.
struct FractionalMatching {
  struct Entry {
    NodeId source = 0;
    NodeId receiver = 0;
    Rational rate;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  std::vector<Entry> triples;
  Rational cap = Rational(1);

  /// True when the node sums, positivity, self-loop and duplicate rules hold.
  bool valid(std::size_t n) const;
  Rational total_rate() const;
};

/// Partial injective map from sources to receivers without self-loops.
class IntegralMatching {
 public:
  explicit IntegralMatching(std::size_t n) : receiver_(n, kNone), source_(n, kNone) {}

  std::size_t n() const { return receiver_.size(); }
  /// Throws std::invalid_argument if u or v is already matched or u == v.
  void connect(NodeId u, NodeId v);
  std::optional<NodeId> receiver_of(NodeId u) const;
  std::optional<NodeId> source_of(NodeId v) const;
  std::size_t edge_count() const;

  friend bool operator==(const IntegralMatching&, const IntegralMatching&) = default;

 private:
  static constexpr std::int64_t kNone = -1;
  std::vector<std::int64_t> receiver_;
  std::vector<std::int64_t> source_;
};

/// Amount of commodity data moved over the physical edge from -> to during a step.
struct Transfer {
  NodeId from = 0;
  NodeId to = 0;
  Commodity commodity;
  Rational amount;
  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct Step {
  std::vector<Transfer> transfers;
  friend bool operator==(const Step&, const Step&) = default;
};

/// Per-step parcels over the time-expanded network. Data moved during step s
/// (interval [s, s+1]) is available at the receiving node at time s+1.
struct Schedule {
  std::vector<Step> steps;

  std::size_t horizon() const { return steps.size(); }
  std::size_t transfer_count() const;
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Appends the steps of `tail` after those of `head`.
Schedule concatenate(Schedule head, const Schedule& tail);

struct Metrics {
  std::int64_t makespan = 0;
  Rational total_completion;
  Rational average_completion;
  SquareMatrix delivered;
};

/// Throws StructuralError for out-of-range nodes, self commodities, or
/// positive flow of a commodity without demand.
Metrics compute_metrics(const Instance& instance, const Schedule& schedule);

/// Checks node ranges and commodity references. Throws StructuralError.
void check_structure(const Instance& instance, const Schedule& schedule);

}  // namespace coflow
