#include "coflow/indirect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "coflow/errors.hpp"

namespace coflow {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

std::size_t log2_exact(std::size_t n) {
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  return bits;
}

// base^exponent, or nullopt past `limit`
std::optional<std::size_t> bounded_power(std::size_t base, std::size_t exponent, std::size_t limit) {
  unsigned __int128 value = 1;
  for (std::size_t k = 0; k < exponent; ++k) {
    value *= base;
    if (value > limit) return std::nullopt;
  }
  return static_cast<std::size_t>(value);
}

std::size_t floor_root(std::size_t n, std::size_t d) {
  auto guess = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d))));
  while (guess > 1 && !bounded_power(guess, d, n)) --guess;
  while (bounded_power(guess + 1, d, n)) ++guess;
  return guess;
}

std::size_t digit(std::size_t value, std::size_t position_weight, std::size_t base) {
  return (value / position_weight) % base;
}

void check_node_limit(std::size_t n) {
  if (n > 65536) throw std::invalid_argument("indirect schemes support at most 65536 nodes");
}

std::size_t ceil_multiplicity(const Rational& q) {
  const std::int64_t m = q.ceil_int();
  return static_cast<std::size_t>(std::max<std::int64_t>(1, m));
}

// Records parcels and the per-step outgoing load of each node. Every step of a
// connection schedule is an integral matching, so a node's load is its edge's.
class ParcelSink {
 public:
  ParcelSink(std::size_t n, std::size_t horizon, bool aggregate)
      : n_(n), aggregate_(aggregate), loads_(horizon, std::vector<Rational>(n)), index_(aggregate ? horizon : 0) {
    schedule_.steps.resize(horizon);
  }

  void add(std::size_t step, NodeId from, NodeId to, const Commodity& c, const Rational& amount) {
    loads_[step][from] += amount;
    auto& transfers = schedule_.steps[step].transfers;
    if (aggregate_) {
      const std::uint64_t key = ((static_cast<std::uint64_t>(from) * n_ + to) * n_ + c.origin) * n_ + c.destination;
      auto [it, inserted] = index_[step].emplace(key, transfers.size());
      if (!inserted) {
        transfers[it->second].amount += amount;
        return;
      }
    }
    transfers.push_back({from, to, c, amount});
  }

  Schedule finish(const std::string& scheme_name) {
    const Rational one(1);
    for (std::size_t s = 0; s < loads_.size(); ++s) {
      for (std::size_t v = 0; v < n_; ++v) {
        if (loads_[s][v] > one) {
          throw CapacityError(scheme_name + " overloads the edge out of node " + std::to_string(v) +
                              " in step " + std::to_string(s) + " with " + loads_[s][v].str());
        }
      }
    }
    return std::move(schedule_);
  }

 private:
  std::size_t n_;
  bool aggregate_;
  std::vector<std::vector<Rational>> loads_;
  std::vector<std::unordered_map<std::uint64_t, std::size_t>> index_;
  Schedule schedule_;
};

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kRoundRobin: return "round-robin";
    case Scheme::kHypercube: return "hypercube";
    case Scheme::kElementaryBasis: return "elementary-basis";
    case Scheme::kGrid: return "grid";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "round-robin") return Scheme::kRoundRobin;
  if (name == "hypercube") return Scheme::kHypercube;
  if (name == "elementary-basis") return Scheme::kElementaryBasis;
  if (name == "grid") return Scheme::kGrid;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

Rational RoutingAssignment::total() const {
  Rational sum;
  for (const auto& p : paths) sum += p.amount;
  return sum;
}

std::size_t RoutingAssignment::max_hops() const {
  std::size_t hops = 0;
  for (const auto& p : paths) hops = std::max(hops, p.hops.size());
  return hops;
}

std::optional<std::size_t> exact_root(std::size_t n, std::size_t d) {
  if (d == 0) return std::nullopt;
  if (d == 1) return n;
  const std::size_t r = floor_root(n, d);
  if (bounded_power(r, d, n) == n) return r;
  return std::nullopt;
}

std::optional<std::size_t> coordinate_dimension(std::size_t n, const Rational& load) {
  if (load <= Rational(1)) return std::nullopt;
  const Rational target(static_cast<std::int64_t>(n));
  Rational power = load;
  std::size_t d = 1;
  while (power < target) {
    power *= load;
    ++d;
  }
  return d;
}

ConnectionSchedule round_robin_connection(std::size_t n, std::size_t multiplicity) {
  check_node_limit(n);
  ConnectionSchedule c;
  c.scheme = Scheme::kRoundRobin;
  c.n = n;
  c.dimension = 1;
  c.base = n;
  c.multiplicity = multiplicity;
  for (std::size_t shift = 1; shift < n; ++shift) {
    IntegralMatching m(n);
    for (std::size_t u = 0; u < n; ++u) m.connect(static_cast<NodeId>(u), static_cast<NodeId>((u + shift) % n));
    for (std::size_t r = 0; r < multiplicity; ++r) c.matchings.push_back(m);
  }
  return c;
}

ConnectionSchedule hypercube_connection(std::size_t n) {
  check_node_limit(n);
  if (n < 2 || !is_power_of_two(n)) {
    throw UnsupportedSizeError("hypercube needs a power-of-two node count, got " + std::to_string(n),
                               supported_size(Scheme::kHypercube, n));
  }
  ConnectionSchedule c;
  c.scheme = Scheme::kHypercube;
  c.n = n;
  c.dimension = log2_exact(n);
  c.base = 2;
  c.multiplicity = 1;
  for (std::size_t bit = 0; bit < c.dimension; ++bit) {
    IntegralMatching m(n);
    for (std::size_t u = 0; u < n; ++u) m.connect(static_cast<NodeId>(u), static_cast<NodeId>(u ^ (std::size_t{1} << bit)));
    c.matchings.push_back(std::move(m));
  }
  return c;
}

ConnectionSchedule elementary_basis_connection(std::size_t n, std::size_t dimension, std::size_t multiplicity) {
  check_node_limit(n);
  const auto base = exact_root(n, dimension);
  if (!base || *base < 2) {
    throw UnsupportedSizeError("elementary basis of dimension " + std::to_string(dimension) +
                                   " needs a perfect power node count, got " + std::to_string(n),
                               supported_size(Scheme::kElementaryBasis, n, dimension));
  }
  ConnectionSchedule c;
  c.scheme = Scheme::kElementaryBasis;
  c.n = n;
  c.dimension = dimension;
  c.base = *base;
  c.multiplicity = multiplicity;
  std::size_t weight = 1;
  for (std::size_t coord = 0; coord < dimension; ++coord, weight *= c.base) {
    for (std::size_t shift = 1; shift < c.base; ++shift) {
      IntegralMatching m(n);
      for (std::size_t u = 0; u < n; ++u) {
        const std::size_t current = digit(u, weight, c.base);
        const std::size_t moved = (current + shift) % c.base;
        m.connect(static_cast<NodeId>(u), static_cast<NodeId>(u - current * weight + moved * weight));
      }
      for (std::size_t r = 0; r < multiplicity; ++r) c.matchings.push_back(m);
    }
  }
  return c;
}

ConnectionSchedule grid_connection(std::size_t n) {
  check_node_limit(n);
  const auto side = exact_root(n, 2);
  if (!side || *side < 2) {
    throw UnsupportedSizeError("grid needs a perfect square node count, got " + std::to_string(n),
                               supported_size(Scheme::kGrid, n));
  }
  const std::size_t g = *side;
  ConnectionSchedule c;
  c.scheme = Scheme::kGrid;
  c.n = n;
  c.dimension = 2;
  c.base = g;
  c.multiplicity = 1;
  // Phase 1 moves along columns to the destination row, phase 2 along rows.
  for (std::size_t k = 1; k < g; ++k) {
    IntegralMatching m(n);
    for (std::size_t r = 0; r < g; ++r) {
      for (std::size_t col = 0; col < g; ++col) {
        m.connect(static_cast<NodeId>(r * g + col), static_cast<NodeId>(((r + k) % g) * g + col));
      }
    }
    c.matchings.push_back(std::move(m));
  }
  for (std::size_t k = 1; k < g; ++k) {
    IntegralMatching m(n);
    for (std::size_t r = 0; r < g; ++r) {
      for (std::size_t col = 0; col < g; ++col) {
        m.connect(static_cast<NodeId>(r * g + col), static_cast<NodeId>(r * g + (col + k) % g));
      }
    }
    c.matchings.push_back(std::move(m));
  }
  return c;
}

BasisPlan plan_elementary_basis(std::size_t n, const Rational& load, std::optional<std::size_t> dimension) {
  auto make = [&](std::size_t d) {
    BasisPlan plan;
    plan.dimension = d;
    plan.base = *exact_root(n, d);
    plan.multiplicity = ceil_multiplicity(load / Rational(static_cast<std::int64_t>(plan.base)));
    return plan;
  };
  if (dimension) {
    const auto base = exact_root(n, *dimension);
    if (!base || *base < 2) {
      throw UnsupportedSizeError("elementary basis of dimension " + std::to_string(*dimension) +
                                     " needs a perfect power node count, got " + std::to_string(n),
                                 supported_size(Scheme::kElementaryBasis, n, *dimension));
    }
    return make(*dimension);
  }
  if (const auto d = coordinate_dimension(n, load)) {
    const auto base = exact_root(n, *d);
    if (base && *base >= 2) return make(*d);
  }
  std::optional<BasisPlan> best;
  for (std::size_t d = 1; (std::size_t{1} << d) <= n; ++d) {
    const auto base = exact_root(n, d);
    if (!base || *base < 2) continue;
    BasisPlan plan = make(d);
    if (!best || plan.length() < best->length()) best = plan;
  }
  return *best;
}

RoutingAssignment route_commodity(const ConnectionSchedule& connection, NodeId u, NodeId v, const Rational& amount) {
  RoutingAssignment assignment;
  assignment.commodity = {u, v};
  const std::size_t n = connection.n;
  if (u >= n || v >= n || u == v) throw std::invalid_argument("route endpoints must be distinct nodes");
  const std::size_t m = connection.multiplicity;

  switch (connection.scheme) {
    case Scheme::kRoundRobin: {
      const std::size_t block = (v + n - u) % n - 1;
      const Rational share = amount / Rational(static_cast<std::int64_t>(m));
      for (std::size_t r = 0; r < m; ++r) assignment.paths.push_back({{{block * m + r, u, v}}, share});
      break;
    }
    case Scheme::kHypercube: {
      HopPath path{{}, amount};
      NodeId w = u;
      for (std::size_t bit = 0; bit < connection.dimension; ++bit) {
        const NodeId mask = NodeId{1} << bit;
        if ((w & mask) == (v & mask)) continue;
        path.hops.push_back({bit, w, w ^ mask});
        w ^= mask;
      }
      assignment.paths.push_back(std::move(path));
      break;
    }
    case Scheme::kElementaryBasis: {
      const std::size_t base = connection.base;
      const Rational share = amount / Rational(static_cast<std::int64_t>(m));
      assignment.paths.assign(m, HopPath{{}, share});
      std::size_t w = u;
      std::size_t weight = 1;
      for (std::size_t coord = 0; coord < connection.dimension; ++coord, weight *= base) {
        const std::size_t current = digit(w, weight, base);
        const std::size_t wanted = digit(v, weight, base);
        if (current == wanted) continue;
        const std::size_t shift = (wanted + base - current) % base;
        const std::size_t block = coord * (base - 1) + shift - 1;
        const std::size_t next = w - current * weight + wanted * weight;
        for (std::size_t r = 0; r < m; ++r) {
          assignment.paths[r].hops.push_back({block * m + r, static_cast<NodeId>(w), static_cast<NodeId>(next)});
        }
        w = next;
      }
      break;
    }
    case Scheme::kGrid: {
      const std::size_t g = connection.base;
      HopPath path{{}, amount};
      const std::size_t row_u = u / g;
      const std::size_t col_u = u % g;
      const std::size_t row_v = v / g;
      const std::size_t col_v = v % g;
      std::size_t w = u;
      if (row_u != row_v) {
        const std::size_t k = (row_v + g - row_u) % g;
        const std::size_t next = row_v * g + col_u;
        path.hops.push_back({k - 1, static_cast<NodeId>(w), static_cast<NodeId>(next)});
        w = next;
      }
      if (col_u != col_v) {
        const std::size_t k = (col_v + g - col_u) % g;
        path.hops.push_back({(g - 1) + k - 1, static_cast<NodeId>(w), v});
      }
      assignment.paths.push_back(std::move(path));
      break;
    }
  }
  return assignment;
}

Schedule route_instance(const ConnectionSchedule& connection, const Instance& instance) {
  const std::size_t n = instance.n();
  if (connection.n != n) throw std::invalid_argument("connection schedule and instance sizes differ");
  ParcelSink sink(n, connection.length(), false);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      const Rational& d = instance.demand(u, v);
      if (d.is_zero()) continue;
      const RoutingAssignment assignment = route_commodity(connection, u, v, d);
      for (const auto& path : assignment.paths) {
        for (const auto& hop : path.hops) sink.add(hop.step, hop.from, hop.to, assignment.commodity, path.amount);
      }
    }
  }
  return sink.finish(to_string(connection.scheme));
}

ConnectionSchedule native_connection(const Instance& instance, Scheme scheme, std::optional<std::size_t> dimension) {
  const std::size_t n = instance.n();
  switch (scheme) {
    case Scheme::kRoundRobin:
      return round_robin_connection(n, ceil_multiplicity(instance.max_entry()));
    case Scheme::kHypercube:
      return hypercube_connection(n);
    case Scheme::kElementaryBasis: {
      const Rational load = instance.max_entry() * Rational(static_cast<std::int64_t>(n));
      const BasisPlan plan = plan_elementary_basis(n, load, dimension);
      return elementary_basis_connection(n, plan.dimension, plan.multiplicity);
    }
    case Scheme::kGrid:
      return grid_connection(n);
  }
  throw std::logic_error("unhandled scheme");
}

Schedule round_robin_schedule(const Instance& instance) {
  return route_instance(native_connection(instance, Scheme::kRoundRobin), instance);
}

Schedule hypercube_schedule(const Instance& instance) {
  return route_instance(native_connection(instance, Scheme::kHypercube), instance);
}

Schedule elementary_basis_schedule(const Instance& instance, std::optional<std::size_t> dimension) {
  return route_instance(native_connection(instance, Scheme::kElementaryBasis, dimension), instance);
}

Schedule grid_schedule(const Instance& instance) {
  return route_instance(native_connection(instance, Scheme::kGrid), instance);
}

ConnectionSchedule lifting_connection(const Instance& instance, Scheme scheme, std::optional<std::size_t> dimension) {
  const std::size_t n = instance.n();
  const Rational& load = instance.load_bound();
  switch (scheme) {
    case Scheme::kRoundRobin:
      return round_robin_connection(n, ceil_multiplicity(load / Rational(static_cast<std::int64_t>(n))));
    case Scheme::kHypercube:
      return hypercube_connection(n);
    case Scheme::kElementaryBasis: {
      const BasisPlan plan = plan_elementary_basis(n, load, dimension);
      return elementary_basis_connection(n, plan.dimension, plan.multiplicity);
    }
    case Scheme::kGrid:
      return grid_connection(n);
  }
  throw std::logic_error("unhandled scheme");
}

Schedule vlb_lift(const Instance& instance, Scheme scheme, std::optional<std::size_t> dimension) {
  const std::size_t n = instance.n();
  const ConnectionSchedule connection = lifting_connection(instance, scheme, dimension);
  const std::size_t period = connection.length();
  ParcelSink sink(n, 2 * period, true);
  const Rational spread(static_cast<std::int64_t>(n));

  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      const Rational& d = instance.demand(u, v);
      if (d.is_zero()) continue;
      const Commodity commodity{u, v};
      const Rational chunk = d / spread;
      for (NodeId k = 0; k < n; ++k) {
        bool delivered = (k == v);
        if (k != u) {
          const RoutingAssignment first = route_commodity(connection, u, k, chunk);
          for (const auto& path : first.paths) {
            for (const auto& hop : path.hops) {
              sink.add(hop.step, hop.from, hop.to, commodity, path.amount);
              if (hop.to == v) {
                delivered = true;
                break;
              }
            }
          }
        }
        if (delivered) continue;
        const RoutingAssignment second = route_commodity(connection, k, v, chunk);
        for (const auto& path : second.paths) {
          for (const auto& hop : path.hops) {
            sink.add(period + hop.step, hop.from, hop.to, commodity, path.amount);
          }
        }
      }
    }
  }
  return sink.finish("lifted " + to_string(scheme));
}

AutoPlan plan_auto(const Instance& instance) {
  const std::size_t n = instance.n();
  const Rational& load = instance.load_bound();
  AutoPlan plan;
  const Rational direct_makespan =
      Rational(static_cast<std::int64_t>(n - 1)) * Rational(instance.max_entry().ceil_int());
  if (direct_makespan <= Rational(2) * load) {
    plan.lifted = false;
    plan.scheme = Scheme::kRoundRobin;
    plan.description = "direct round-robin";
  } else if (load >= Rational(static_cast<std::int64_t>(n))) {
    plan.lifted = true;
    plan.scheme = Scheme::kRoundRobin;
    plan.description = "lifted round-robin";
  } else if (load <= Rational(2) && is_power_of_two(n)) {
    plan.lifted = true;
    plan.scheme = Scheme::kHypercube;
    plan.description = "lifted hypercube";
  } else {
    plan.lifted = true;
    plan.scheme = Scheme::kElementaryBasis;
    plan.dimension = plan_elementary_basis(n, load, std::nullopt).dimension;
    plan.description = "lifted elementary basis, d=" + std::to_string(*plan.dimension);
  }
  return plan;
}

Schedule auto_schedule(const Instance& instance) {
  const AutoPlan plan = plan_auto(instance);
  if (!plan.lifted) return round_robin_schedule(instance);
  return vlb_lift(instance, plan.scheme, plan.dimension);
}

std::size_t supported_size(Scheme scheme, std::size_t n, std::optional<std::size_t> dimension) {
  switch (scheme) {
    case Scheme::kRoundRobin:
      return std::max<std::size_t>(n, 2);
    case Scheme::kHypercube: {
      std::size_t p = 2;
      while (p < n) p <<= 1;
      return p;
    }
    case Scheme::kGrid: {
      std::size_t side = std::max<std::size_t>(2, floor_root(n, 2));
      while (side * side < n) ++side;
      return side * side;
    }
    case Scheme::kElementaryBasis: {
      const std::size_t d = dimension.value_or(1);
      std::size_t side = std::max<std::size_t>(2, floor_root(n, d));
      while (!bounded_power(side, d, std::numeric_limits<std::size_t>::max()) ||
             *bounded_power(side, d, std::numeric_limits<std::size_t>::max()) < n) {
        ++side;
      }
      return *bounded_power(side, d, std::numeric_limits<std::size_t>::max());
    }
  }
  return n;
}

}  // namespace coflow
