#include "coflow/model.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "coflow/errors.hpp"

namespace coflow {

Rational SquareMatrix::row_sum(std::size_t i) const {
  Rational sum;
  for (std::size_t j = 0; j < n_; ++j) sum += (*this)(i, j);
  return sum;
}

Rational SquareMatrix::col_sum(std::size_t j) const {
  Rational sum;
  for (std::size_t i = 0; i < n_; ++i) sum += (*this)(i, j);
  return sum;
}

Rational SquareMatrix::total() const {
  Rational sum;
  for (const auto& cell : cells_) sum += cell;
  return sum;
}

bool SquareMatrix::all_zero() const {
  return std::all_of(cells_.begin(), cells_.end(), [](const Rational& q) { return q.is_zero(); });
}

Instance::Instance(SquareMatrix demands)
    : demands_(std::move(demands)), row_sums_(demands_.size()), col_sums_(demands_.size()) {
  const std::size_t n = demands_.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& d = demands_(i, j);
      if (d.is_zero()) continue;
      row_sums_[i] += d;
      col_sums_[j] += d;
      total_ += d;
      if (max_entry_ < d) max_entry_ = d;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    load_bound_ = max(load_bound_, max(row_sums_[i], col_sums_[i]));
  }
}

Instance Instance::create(SquareMatrix demands) {
  const std::size_t n = demands.size();
  if (n < 2) {
    throw ValidationError(ValidationError::Kind::kTooFewNodes,
                          "instance needs at least 2 nodes, got " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& d = demands(i, j);
      if (d.sign() < 0) {
        throw ValidationError(ValidationError::Kind::kNegativeEntry,
                              "negative demand " + d.str() + " at (" + std::to_string(i) + ", " +
                                  std::to_string(j) + ")");
      }
      if (i == j && !d.is_zero()) {
        throw ValidationError(ValidationError::Kind::kNonzeroDiagonal,
                              "nonzero diagonal demand " + d.str() + " at node " + std::to_string(i));
      }
    }
  }
  return Instance(std::move(demands));
}

Instance Instance::create(std::size_t n, const std::vector<std::vector<Rational>>& demands) {
  if (n < 2) {
    throw ValidationError(ValidationError::Kind::kTooFewNodes,
                          "instance needs at least 2 nodes, got " + std::to_string(n));
  }
  if (demands.size() != n) {
    throw ValidationError(ValidationError::Kind::kDimensionMismatch,
                          "expected " + std::to_string(n) + " rows, got " + std::to_string(demands.size()));
  }
  SquareMatrix matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (demands[i].size() != n) {
      throw ValidationError(ValidationError::Kind::kDimensionMismatch,
                            "row " + std::to_string(i) + " has " + std::to_string(demands[i].size()) +
                                " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) matrix(i, j) = demands[i][j];
  }
  return create(std::move(matrix));
}

bool Instance::is_uniform() const {
  const std::size_t n = this->n();
  const Rational& first = demands_(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && demands_(i, j) != first) return false;
    }
  }
  return true;
}

std::size_t Instance::support_size() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n(); ++i) {
    for (std::size_t j = 0; j < n(); ++j) count += demands_(i, j).is_zero() ? 0 : 1;
  }
  return count;
}

Instance make_instance(std::size_t n, const std::vector<std::vector<Rational>>& demands) {
  return Instance::create(n, demands);
}

Instance uniform_instance(std::size_t n, const Rational& nominal_load) {
  if (nominal_load.sign() <= 0) {
    throw ValidationError(ValidationError::Kind::kInvalidParameter, "uniform load must be positive");
  }
  if (n < 2) {
    throw ValidationError(ValidationError::Kind::kTooFewNodes,
                          "instance needs at least 2 nodes, got " + std::to_string(n));
  }
  const Rational entry = nominal_load / Rational(static_cast<std::int64_t>(n));
  SquareMatrix matrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) matrix(i, j) = entry;
    }
  }
  return Instance::create(std::move(matrix));
}

Instance pad_instance(const Instance& instance, std::size_t padded_n) {
  if (padded_n < instance.n()) throw std::invalid_argument("cannot pad to a smaller node count");
  SquareMatrix matrix(padded_n);
  for (std::size_t i = 0; i < instance.n(); ++i) {
    for (std::size_t j = 0; j < instance.n(); ++j) matrix(i, j) = instance.demand(i, j);
  }
  return Instance::create(std::move(matrix));
}

bool FractionalMatching::valid(std::size_t n) const {
  std::vector<Rational> out(n);
  std::vector<Rational> in(n);
  std::set<std::pair<NodeId, NodeId>> seen;
  for (const auto& e : triples) {
    if (e.source >= n || e.receiver >= n || e.source == e.receiver) return false;
    if (e.rate.sign() <= 0) return false;
    if (!seen.emplace(e.source, e.receiver).second) return false;
    out[e.source] += e.rate;
    in[e.receiver] += e.rate;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (out[v] > cap || in[v] > cap) return false;
  }
  return true;
}

Rational FractionalMatching::total_rate() const {
  Rational sum;
  for (const auto& e : triples) sum += e.rate;
  return sum;
}

void IntegralMatching::connect(NodeId u, NodeId v) {
  if (u >= n() || v >= n()) throw std::invalid_argument("matching endpoint out of range");
  if (u == v) throw std::invalid_argument("matching self-loop at node " + std::to_string(u));
  if (receiver_[u] != kNone) throw std::invalid_argument("source " + std::to_string(u) + " already matched");
  if (source_[v] != kNone) throw std::invalid_argument("receiver " + std::to_string(v) + " already matched");
  receiver_[u] = v;
  source_[v] = u;
}

std::optional<NodeId> IntegralMatching::receiver_of(NodeId u) const {
  if (u >= n() || receiver_[u] == kNone) return std::nullopt;
  return static_cast<NodeId>(receiver_[u]);
}

std::optional<NodeId> IntegralMatching::source_of(NodeId v) const {
  if (v >= n() || source_[v] == kNone) return std::nullopt;
  return static_cast<NodeId>(source_[v]);
}

std::size_t IntegralMatching::edge_count() const {
  return static_cast<std::size_t>(
      std::count_if(receiver_.begin(), receiver_.end(), [](std::int64_t r) { return r != kNone; }));
}

std::size_t Schedule::transfer_count() const {
  std::size_t count = 0;
  for (const auto& step : steps) count += step.transfers.size();
  return count;
}

Schedule concatenate(Schedule head, const Schedule& tail) {
  head.steps.insert(head.steps.end(), tail.steps.begin(), tail.steps.end());
  return head;
}

void check_structure(const Instance& instance, const Schedule& schedule) {
  const std::size_t n = instance.n();
  for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
    for (const auto& t : schedule.steps[s].transfers) {
      const auto where = " in step " + std::to_string(s);
      if (t.from >= n || t.to >= n || t.commodity.origin >= n || t.commodity.destination >= n) {
        throw StructuralError("transfer references a node outside 0.." + std::to_string(n - 1) + where);
      }
      if (t.from == t.to) throw StructuralError("transfer is a self-loop at node " + std::to_string(t.from) + where);
      if (t.commodity.origin == t.commodity.destination) {
        throw StructuralError("commodity with equal origin and destination" + where);
      }
      if (t.amount.sign() <= 0) throw StructuralError("non-positive transfer amount " + t.amount.str() + where);
      if (instance.demand(t.commodity.origin, t.commodity.destination).is_zero()) {
        throw StructuralError("flow for commodity (" + std::to_string(t.commodity.origin) + ", " +
                              std::to_string(t.commodity.destination) + ") which has no demand" + where);
      }
    }
  }
}

Metrics compute_metrics(const Instance& instance, const Schedule& schedule) {
  check_structure(instance, schedule);
  Metrics metrics;
  metrics.delivered = SquareMatrix(instance.n());
  for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
    const Rational completion(static_cast<std::int64_t>(s + 1));
    for (const auto& t : schedule.steps[s].transfers) {
      if (t.to != t.commodity.destination) continue;
      metrics.delivered(t.commodity.origin, t.commodity.destination) += t.amount;
      metrics.total_completion += t.amount * completion;
      metrics.makespan = static_cast<std::int64_t>(s + 1);
    }
  }
  if (instance.total_demand().sign() > 0) {
    metrics.average_completion = metrics.total_completion / instance.total_demand();
  }
  return metrics;
}

}  // namespace coflow
