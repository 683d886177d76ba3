#include "coflow/verifier.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace coflow {

namespace {

constexpr std::int64_t kUnset = -1;

std::uint64_t edge_key(NodeId from, NodeId to) {
  return (static_cast<std::uint64_t>(from) << 32) | to;
}

struct Holding {
  Rational amount;
  std::size_t hops = 0;
};

// Per-step degree bookkeeping, reset lazily through the touched list.
struct StepNodes {
  explicit StepNodes(std::size_t n) : out_peer(n, kUnset), in_peer(n, kUnset), out_sum(n), in_sum(n) {}

  void reset() {
    for (NodeId v : touched) {
      out_peer[v] = kUnset;
      in_peer[v] = kUnset;
      out_sum[v] = Rational();
      in_sum[v] = Rational();
    }
    touched.clear();
  }

  std::vector<std::int64_t> out_peer;
  std::vector<std::int64_t> in_peer;
  std::vector<Rational> out_sum;
  std::vector<Rational> in_sum;
  std::vector<NodeId> touched;
};

bool structurally_valid(const Instance& instance, const Transfer& t) {
  const std::size_t n = instance.n();
  if (t.from >= n || t.to >= n || t.commodity.origin >= n || t.commodity.destination >= n) return false;
  if (t.from == t.to || t.commodity.origin == t.commodity.destination) return false;
  if (t.amount.sign() <= 0) return false;
  return !instance.demand(t.commodity.origin, t.commodity.destination).is_zero();
}

}  // namespace

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kStructural: return "structural";
    case Violation::Kind::kEdgeCapacity: return "edge-capacity";
    case Violation::Kind::kSenderCapacity: return "sender-capacity";
    case Violation::Kind::kReceiverCapacity: return "receiver-capacity";
    case Violation::Kind::kConservation: return "conservation";
    case Violation::Kind::kDepartsDestination: return "departs-destination";
  }
  return "unknown";
}

VerificationReport verify(const Instance& instance, const Schedule& schedule) {
  const std::size_t n = instance.n();
  const Rational one(1);
  VerificationReport report;
  SquareMatrix delivered(n);
  StepNodes nodes(n);
  std::unordered_map<std::uint64_t, Holding> inventory;
  std::unordered_map<std::uint64_t, Rational> edge_load;
  std::vector<std::size_t> parcel_hops;

  auto holding_key = [n](NodeId node, const Commodity& c) {
    return (static_cast<std::uint64_t>(node) * n + c.origin) * n + c.destination;
  };

  for (std::size_t s = 0; s < schedule.steps.size(); ++s) {
    const auto& transfers = schedule.steps[s].transfers;
    nodes.reset();
    edge_load.clear();
    parcel_hops.assign(transfers.size(), 0);
    std::vector<std::uint64_t> drained;

    // Departures draw on data present at time s.
    for (std::size_t k = 0; k < transfers.size(); ++k) {
      const Transfer& t = transfers[k];
      if (!structurally_valid(instance, t)) {
        report.violations.push_back({Violation::Kind::kStructural, s, t.from, t.to,
                                     "invalid transfer of amount " + t.amount.str()});
        continue;
      }
      if (t.from != t.commodity.origin || t.to != t.commodity.destination) report.is_direct = false;

      for (NodeId v : {t.from, t.to}) {
        if (nodes.out_peer[v] == kUnset && nodes.in_peer[v] == kUnset && nodes.out_sum[v].is_zero() &&
            nodes.in_sum[v].is_zero()) {
          nodes.touched.push_back(v);
        }
      }
      if (nodes.out_peer[t.from] != kUnset && nodes.out_peer[t.from] != t.to) report.is_integral = false;
      if (nodes.in_peer[t.to] != kUnset && nodes.in_peer[t.to] != t.from) report.is_integral = false;
      nodes.out_peer[t.from] = t.to;
      nodes.in_peer[t.to] = t.from;
      nodes.out_sum[t.from] += t.amount;
      nodes.in_sum[t.to] += t.amount;
      edge_load[edge_key(t.from, t.to)] += t.amount;

      if (t.from == t.commodity.destination) {
        report.violations.push_back({Violation::Kind::kDepartsDestination, s, t.from, t.to,
                                     "commodity data leaves its destination"});
        continue;
      }
      if (t.from == t.commodity.origin) {
        parcel_hops[k] = 1;
        continue;
      }
      const auto key = holding_key(t.from, t.commodity);
      Holding& held = inventory[key];
      held.amount -= t.amount;
      parcel_hops[k] = held.hops + 1;
      drained.push_back(key);
    }

    for (std::uint64_t key : drained) {
      auto it = inventory.find(key);
      if (it == inventory.end()) continue;
      if (it->second.amount.sign() < 0) {
        const auto node = static_cast<NodeId>(key / (static_cast<std::uint64_t>(n) * n));
        const auto commodity = key % (static_cast<std::uint64_t>(n) * n);
        report.violations.push_back({Violation::Kind::kConservation, s, node, std::nullopt,
                                     "forwards " + (-it->second.amount).str() + " more of commodity (" +
                                         std::to_string(commodity / n) + ", " + std::to_string(commodity % n) +
                                         ") than it holds"});
        inventory.erase(it);
      } else if (it->second.amount.is_zero()) {
        inventory.erase(it);
      }
    }

    // Arrivals become available at time s+1.
    for (std::size_t k = 0; k < transfers.size(); ++k) {
      const Transfer& t = transfers[k];
      if (parcel_hops[k] == 0) continue;  // rejected above
      report.max_hops = std::max(report.max_hops, parcel_hops[k]);
      if (t.to == t.commodity.destination) {
        delivered(t.commodity.origin, t.commodity.destination) += t.amount;
      } else if (t.to != t.commodity.origin) {
        Holding& held = inventory[holding_key(t.to, t.commodity)];
        held.amount += t.amount;
        held.hops = std::max(held.hops, parcel_hops[k]);
      }
    }

    for (const auto& [key, load] : edge_load) {
      if (report.max_edge_load < load) report.max_edge_load = load;
      if (load > one) {
        report.violations.push_back({Violation::Kind::kEdgeCapacity, s, static_cast<NodeId>(key >> 32),
                                     static_cast<NodeId>(key & 0xffffffffu), "edge load " + load.str()});
      }
    }
    for (NodeId v : nodes.touched) {
      if (nodes.out_sum[v] > one) {
        report.violations.push_back(
            {Violation::Kind::kSenderCapacity, s, v, std::nullopt, "outgoing rate " + nodes.out_sum[v].str()});
      }
      if (nodes.in_sum[v] > one) {
        report.violations.push_back(
            {Violation::Kind::kReceiverCapacity, s, v, std::nullopt, "incoming rate " + nodes.in_sum[v].str()});
      }
    }
  }

  report.unmet_demand = SquareMatrix(n);
  bool satisfied = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      report.unmet_demand(i, j) = instance.demand(i, j) - delivered(i, j);
      if (report.unmet_demand(i, j).sign() > 0) satisfied = false;
    }
  }
  report.feasible = satisfied && report.violations.empty();
  return report;
}

Classification classify(const Schedule& schedule) {
  Classification result;
  for (const auto& step : schedule.steps) {
    std::unordered_map<NodeId, NodeId> out_peer;
    std::unordered_map<NodeId, NodeId> in_peer;
    for (const auto& t : step.transfers) {
      if (t.from != t.commodity.origin || t.to != t.commodity.destination) result.direct = false;
      auto [out_it, out_new] = out_peer.emplace(t.from, t.to);
      if (!out_new && out_it->second != t.to) result.integral = false;
      auto [in_it, in_new] = in_peer.emplace(t.to, t.from);
      if (!in_new && in_it->second != t.from) result.integral = false;
    }
  }
  return result;
}

}  // namespace coflow
