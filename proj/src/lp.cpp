#include "coflow/lp.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

#include "coflow/errors.hpp"

namespace coflow {

std::size_t LinearProgram::add_variable(const Rational& cost) {
  objective.push_back(cost);
  return num_vars++;
}

void LinearProgram::add_row(Row row) { rows.push_back(std::move(row)); }

namespace {

using Sense = LinearProgram::Sense;

constexpr std::size_t kDegenerateLimit = 64;

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : cells_(rows, std::vector<Rational>(cols + 1)), z_(cols + 1), basis_(rows) {}

  std::size_t rows() const { return cells_.size(); }
  std::size_t cols() const { return z_.size() - 1; }
  Rational& at(std::size_t i, std::size_t j) { return cells_[i][j]; }
  Rational& rhs(std::size_t i) { return cells_[i].back(); }
  std::vector<Rational>& z() { return z_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t q) {
    std::vector<Rational>& prow = cells_[r];
    const Rational inv = Rational(1) / prow[q];
    nonzero_.clear();
    for (std::size_t k = 0; k < prow.size(); ++k) {
      if (prow[k].is_zero()) continue;
      prow[k] *= inv;
      nonzero_.push_back(k);
    }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[q].is_zero()) return;
      const Rational f = row[q];
      for (std::size_t k : nonzero_) row[k] -= f * prow[k];
    };
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i != r) eliminate(cells_[i]);
    }
    eliminate(z_);
    basis_[r] = q;
  }

  void erase_row(std::size_t r) {
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

 private:
  std::vector<std::vector<Rational>> cells_;
  std::vector<Rational> z_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
};

enum class Outcome { kOptimal, kUnbounded };

// Minimizes the objective held in the tableau's z row over columns below
// `limit`.
Outcome iterate(Tableau& tab, std::size_t limit, PricingRule rule, std::size_t& pivots) {
  bool bland = rule == PricingRule::kBland;
  std::size_t degenerate_run = 0;
  auto& z = tab.z();
  while (true) {
    std::size_t entering = limit;
    for (std::size_t j = 0; j < limit; ++j) {
      if (z[j].sign() >= 0) continue;
      if (bland) {
        entering = j;
        break;
      }
      if (entering == limit || z[j] < z[entering]) entering = j;
    }
    if (entering == limit) return Outcome::kOptimal;

    std::size_t leaving = tab.rows();
    Rational best;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      const Rational& a = tab.at(i, entering);
      if (a.sign() <= 0) continue;
      Rational ratio = tab.rhs(i) / a;
      if (leaving == tab.rows() || ratio < best ||
          (ratio == best && tab.basis()[i] < tab.basis()[leaving])) {
        leaving = i;
        best = std::move(ratio);
      }
    }
    if (leaving == tab.rows()) return Outcome::kUnbounded;

    if (best.is_zero()) {
      if (++degenerate_run > kDegenerateLimit) bland = true;
    } else {
      degenerate_run = 0;
    }
    tab.pivot(leaving, entering);
    ++pivots;
  }
}

}  // namespace

SimplexResult solve_simplex(const LinearProgram& lp, PricingRule rule) {
  const std::size_t n = lp.num_vars;
  if (lp.objective.size() != n) throw std::invalid_argument("objective length differs from the variable count");

  // Normalize to nonnegative right-hand sides.
  std::vector<LinearProgram::Row> rows = lp.rows;
  std::size_t slack_count = 0;
  std::size_t artificial_count = 0;
  for (auto& row : rows) {
    for (const auto& [var, coeff] : row.coeffs) {
      if (var >= n) throw std::invalid_argument("row references an unknown variable");
      (void)coeff;
    }
    if (row.rhs.sign() < 0) {
      row.rhs = -row.rhs;
      for (auto& entry : row.coeffs) entry.second = -entry.second;
      if (row.sense == Sense::kLessEqual) {
        row.sense = Sense::kGreaterEqual;
      } else if (row.sense == Sense::kGreaterEqual) {
        row.sense = Sense::kLessEqual;
      }
    }
    if (row.sense != Sense::kEqual) ++slack_count;
    if (row.sense != Sense::kLessEqual) ++artificial_count;
  }

  const std::size_t m = rows.size();
  const std::size_t artificial_begin = n + slack_count;
  const std::size_t total = artificial_begin + artificial_count;
  Tableau tab(m, total);
  std::size_t next_slack = n;
  std::size_t next_artificial = artificial_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& [var, coeff] : rows[i].coeffs) tab.at(i, var) += coeff;
    tab.rhs(i) = rows[i].rhs;
    switch (rows[i].sense) {
      case Sense::kLessEqual:
        tab.at(i, next_slack) = Rational(1);
        tab.basis()[i] = next_slack++;
        break;
      case Sense::kGreaterEqual:
        tab.at(i, next_slack++) = Rational(-1);
        tab.at(i, next_artificial) = Rational(1);
        tab.basis()[i] = next_artificial++;
        break;
      case Sense::kEqual:
        tab.at(i, next_artificial) = Rational(1);
        tab.basis()[i] = next_artificial++;
        break;
    }
  }

  SimplexResult result;
  // Phase one: minimize the sum of artificials.
  auto& z = tab.z();
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < artificial_begin) continue;
    for (std::size_t j = 0; j <= total; ++j) {
      if (j >= artificial_begin && j < total) continue;
      if (!tab.at(i, j).is_zero()) z[j] -= tab.at(i, j);
    }
  }
  if (artificial_count > 0) {
    iterate(tab, total, rule, result.pivots);
    if (z[total].sign() != 0) {
      result.status = SimplexResult::Status::kInfeasible;
      return result;
    }
    // Pivot remaining (zero-valued) artificials out of the basis.
    for (std::size_t i = tab.rows(); i-- > 0;) {
      if (tab.basis()[i] < artificial_begin) continue;
      std::size_t column = artificial_begin;
      for (std::size_t j = 0; j < artificial_begin; ++j) {
        if (!tab.at(i, j).is_zero()) {
          column = j;
          break;
        }
      }
      if (column == artificial_begin) {
        tab.erase_row(i);
      } else {
        tab.pivot(i, column);
        ++result.pivots;
      }
    }
  }

  // Phase two.
  for (auto& value : z) value = Rational();
  for (std::size_t j = 0; j < n; ++j) z[j] = lp.objective[j];
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    const std::size_t b = tab.basis()[i];
    if (b >= n || lp.objective[b].is_zero()) continue;
    const Rational cost = lp.objective[b];
    for (std::size_t j = 0; j <= total; ++j) {
      if (!tab.at(i, j).is_zero()) z[j] -= cost * tab.at(i, j);
    }
  }
  if (iterate(tab, artificial_begin, rule, result.pivots) == Outcome::kUnbounded) {
    result.status = SimplexResult::Status::kUnbounded;
    return result;
  }

  result.status = SimplexResult::Status::kOptimal;
  result.x.assign(n, Rational());
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    if (tab.basis()[i] < n) result.x[tab.basis()[i]] = tab.rhs(i);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!result.x[j].is_zero()) result.objective += lp.objective[j] * result.x[j];
  }
  return result;
}

bool satisfies(const LinearProgram& lp, const std::vector<Rational>& x) {
  if (x.size() != lp.num_vars) return false;
  for (const auto& v : x) {
    if (v.sign() < 0) return false;
  }
  for (const auto& row : lp.rows) {
    Rational lhs;
    for (const auto& [var, coeff] : row.coeffs) lhs += coeff * x[var];
    switch (row.sense) {
      case Sense::kLessEqual:
        if (lhs > row.rhs) return false;
        break;
      case Sense::kGreaterEqual:
        if (lhs < row.rhs) return false;
        break;
      case Sense::kEqual:
        if (lhs != row.rhs) return false;
        break;
    }
  }
  return true;
}

std::string to_string(LPStatus status) {
  switch (status) {
    case LPStatus::kOptimal:
      return "optimal";
    case LPStatus::kInfeasible:
      return "infeasible";
    case LPStatus::kHorizonTooShort:
      return "horizon-too-short";
  }
  return "unknown";
}

namespace {

using Pair = std::pair<NodeId, NodeId>;

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

// Pairs that share a capped sender or receiver go in the same component;
// components are independent LPs.
std::vector<std::vector<Pair>> components(const Instance& instance, const Cap& sender_cap, const Cap& receiver_cap) {
  const std::size_t n = instance.n();
  std::vector<Pair> pairs;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (instance.demand(i, j).sign() > 0) pairs.emplace_back(i, j);
    }
  }
  std::vector<std::size_t> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<std::optional<std::size_t>> by_sender(n);
  std::vector<std::optional<std::size_t>> by_receiver(n);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    if (sender_cap) {
      if (by_sender[i]) parent[find_root(parent, p)] = find_root(parent, *by_sender[i]);
      by_sender[i] = p;
    }
    if (receiver_cap) {
      if (by_receiver[j]) parent[find_root(parent, p)] = find_root(parent, *by_receiver[j]);
      by_receiver[j] = p;
    }
  }
  std::vector<std::vector<Pair>> groups;
  std::vector<std::optional<std::size_t>> group_of(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::size_t root = find_root(parent, p);
    if (!group_of[root]) {
      group_of[root] = groups.size();
      groups.emplace_back();
    }
    groups[*group_of[root]].push_back(pairs[p]);
  }
  return groups;
}

struct ComponentLP {
  LinearProgram lp;
  std::vector<std::tuple<NodeId, NodeId, std::size_t>> keys;
};

ComponentLP build_component(const Instance& instance, const std::vector<Pair>& pairs, const Cap& sender_cap,
                            const Cap& receiver_cap, std::size_t horizon) {
  ComponentLP out;
  // var index = p * horizon + (t - 1)
  for (const auto& [i, j] : pairs) {
    for (std::size_t t = 1; t <= horizon; ++t) {
      out.lp.add_variable(Rational(static_cast<std::int64_t>(t)));
      out.keys.emplace_back(i, j, t);
    }
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    LinearProgram::Row row;
    row.sense = Sense::kGreaterEqual;
    row.rhs = instance.demand(pairs[p].first, pairs[p].second);
    for (std::size_t t = 0; t < horizon; ++t) row.coeffs.emplace_back(p * horizon + t, Rational(1));
    out.lp.add_row(std::move(row));
  }
  auto add_capacity = [&](const Cap& cap, bool by_sender) {
    if (!cap) return;
    std::map<NodeId, std::vector<std::size_t>> members;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      members[by_sender ? pairs[p].first : pairs[p].second].push_back(p);
    }
    for (const auto& [node, list] : members) {
      (void)node;
      for (std::size_t t = 0; t < horizon; ++t) {
        LinearProgram::Row row;
        row.sense = Sense::kLessEqual;
        row.rhs = *cap;
        for (std::size_t p : list) row.coeffs.emplace_back(p * horizon + t, Rational(1));
        out.lp.add_row(std::move(row));
      }
    }
  };
  add_capacity(sender_cap, true);
  add_capacity(receiver_cap, false);
  return out;
}

LPSolution solve_unguarded(const Instance& instance, const Cap& sender_cap, const Cap& receiver_cap,
                           std::size_t horizon, bool probe) {
  LPSolution solution;
  solution.horizon = horizon;
  solution.status = LPStatus::kOptimal;
  for (const auto& group : components(instance, sender_cap, receiver_cap)) {
    ComponentLP component = build_component(instance, group, sender_cap, receiver_cap, horizon);
    const SimplexResult result = solve_simplex(component.lp);
    solution.pivots += result.pivots;
    if (result.status != SimplexResult::Status::kOptimal) {
      solution.status = LPStatus::kInfeasible;
      break;
    }
    if (!satisfies(component.lp, result.x)) throw std::logic_error("simplex returned a point that violates a constraint");
    solution.objective += result.objective;
    for (std::size_t k = 0; k < result.x.size(); ++k) {
      if (!result.x[k].is_zero()) solution.x.emplace(component.keys[k], result.x[k]);
    }
  }
  if (solution.status != LPStatus::kOptimal) {
    solution.objective = Rational();
    solution.x.clear();
    if (probe && solve_unguarded(instance, sender_cap, receiver_cap, 2 * horizon, false).status == LPStatus::kOptimal) {
      solution.status = LPStatus::kHorizonTooShort;
    }
  }
  return solution;
}

void check_caps(const Cap& sender_cap, const Cap& receiver_cap) {
  if ((sender_cap && sender_cap->sign() <= 0) || (receiver_cap && receiver_cap->sign() <= 0)) {
    throw ValidationError(ValidationError::Kind::kInvalidParameter, "LP caps must be positive");
  }
}

void check_limits(const Instance& instance, std::size_t horizon, const OracleLimits& limits) {
  if (instance.n() > limits.max_nodes || horizon > limits.max_horizon) {
    throw OracleSizeError("LP oracle limited to n <= " + std::to_string(limits.max_nodes) + " and horizon <= " +
                          std::to_string(limits.max_horizon) + "; got n = " + std::to_string(instance.n()) +
                          ", horizon = " + std::to_string(horizon));
  }
}

std::size_t base_horizon(const Instance& instance) {
  return static_cast<std::size_t>(instance.total_demand().ceil_int()) + instance.n();
}

Rational optimum(const LPSolution& solution) {
  if (solution.status != LPStatus::kOptimal) {
    throw std::logic_error("completion LP not solved at a safe horizon: " + to_string(solution.status));
  }
  return solution.objective;
}

}  // namespace

LPSolution solve_completion_lp(const Instance& instance, const Cap& sender_cap, const Cap& receiver_cap,
                               std::size_t horizon, const OracleLimits& limits) {
  check_caps(sender_cap, receiver_cap);
  check_limits(instance, horizon, limits);
  LPSolution solution = solve_unguarded(instance, sender_cap, receiver_cap, horizon, true);
  if (solution.status == LPStatus::kOptimal && !check_completion_solution(instance, sender_cap, receiver_cap, solution)) {
    throw std::logic_error("completion LP solution failed its exact re-check");
  }
  return solution;
}

bool check_completion_solution(const Instance& instance, const Cap& sender_cap, const Cap& receiver_cap,
                               const LPSolution& solution) {
  if (solution.status != LPStatus::kOptimal) return false;
  const std::size_t n = instance.n();
  const std::size_t horizon = solution.horizon;
  SquareMatrix shipped(n);
  std::vector<std::vector<Rational>> out(horizon + 1, std::vector<Rational>(n));
  std::vector<std::vector<Rational>> in(horizon + 1, std::vector<Rational>(n));
  Rational objective;
  for (const auto& [key, value] : solution.x) {
    const auto [i, j, t] = key;
    if (i >= n || j >= n || t < 1 || t > horizon || value.sign() < 0) return false;
    shipped(i, j) += value;
    out[t][i] += value;
    in[t][j] += value;
    objective += value * Rational(static_cast<std::int64_t>(t));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (shipped(i, j) < instance.demand(i, j)) return false;
    }
  }
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t v = 0; v < n; ++v) {
      if (sender_cap && out[t][v] > *sender_cap) return false;
      if (receiver_cap && in[t][v] > *receiver_cap) return false;
    }
  }
  return objective == solution.objective;
}

Rational opt_direct_fractional(const Instance& instance, const OracleLimits& limits) {
  return optimum(solve_completion_lp(instance, Rational(1), Rational(1), base_horizon(instance), limits));
}

Rational opt_sender_bound(const Instance& instance, const OracleLimits& limits) {
  const std::size_t base = base_horizon(instance);
  check_limits(instance, base, limits);
  const Cap cap = Rational(1, 4);
  LPSolution solution = solve_unguarded(instance, cap, std::nullopt, 4 * (base - instance.n()) + instance.n(), true);
  if (solution.status == LPStatus::kOptimal && !check_completion_solution(instance, cap, std::nullopt, solution)) {
    throw std::logic_error("sender-bound LP solution failed its exact re-check");
  }
  return optimum(solution);
}

Rational opt_receiver_bound(const Instance& instance, const OracleLimits& limits) {
  const std::size_t base = base_horizon(instance);
  check_limits(instance, base, limits);
  const Cap cap = Rational(1, 4);
  LPSolution solution = solve_unguarded(instance, std::nullopt, cap, 4 * (base - instance.n()) + instance.n(), true);
  if (solution.status == LPStatus::kOptimal && !check_completion_solution(instance, std::nullopt, cap, solution)) {
    throw std::logic_error("receiver-bound LP solution failed its exact re-check");
  }
  return optimum(solution);
}

}  // namespace coflow
