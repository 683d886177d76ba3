#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coflow/model.hpp"

namespace coflow {

struct Violation {
  enum class Kind {
    kStructural,         // transfer references unknown nodes or commodities
    kEdgeCapacity,       // more than one unit on a physical edge in one step
    kSenderCapacity,     // outgoing rates of a node exceed one in one step
    kReceiverCapacity,   // incoming rates of a node exceed one in one step
    kConservation,       // a relay forwards data it does not hold yet
    kDepartsDestination  // data leaves the node it was destined for
  };

  Kind kind;
  std::size_t step = 0;
  NodeId node = 0;
  std::optional<NodeId> peer;
  std::string detail;
};

std::string to_string(Violation::Kind kind);

struct VerificationReport {
  bool feasible = false;
  std::vector<Violation> violations;
  Rational max_edge_load;
  /// D minus delivered; negative entries mean over-delivery.
  SquareMatrix unmet_demand;
  bool is_integral = true;
  bool is_direct = true;
  /// Upper bound on physical hops taken by any unit of data.
  std::size_t max_hops = 0;
};

/// Checks a schedule against the time-expanded network rules: node and edge
/// capacities per step, cumulative per-commodity conservation with waiting,
/// and demand satisfaction. Never throws; all problems become violations.
///
/// Data that reaches its destination is consumed there. Origins hold an
/// unbounded supply of their own commodities.
VerificationReport verify(const Instance& instance, const Schedule& schedule);

struct Classification {
  bool direct = true;
  bool integral = true;
  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Routing quadrant occupied by the schedule: direct if no parcel is relayed,
/// integral if every node uses at most one outgoing and one incoming physical
/// edge per step.
Classification classify(const Schedule& schedule);

}  // namespace coflow
