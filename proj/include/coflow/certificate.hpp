#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "coflow/direct.hpp"
#include "coflow/model.hpp"

namespace coflow {

/// Dual solutions for the sender-only and receiver-only quarter-capacity
/// relaxations, fitted to a greedy run with horizon T:
///   alpha_S(i, j) = D_i^S(0),  beta_S[i][t] = D_i^S(t) / 4,
///   alpha_R(i, j) = D_j^R(0),  beta_R[j][t] = D_j^R(t) / 4,  t = 0..T.
struct DualCertificate {
  std::size_t horizon = 0;
  SquareMatrix alpha_S;
  SquareMatrix alpha_R;
  std::vector<std::vector<Rational>> beta_S;
  std::vector<std::vector<Rational>> beta_R;
  Rational obj_DS;
  Rational obj_DR;

  std::size_t n() const { return alpha_S.size(); }
};

/// Throws TraceError if the trace is malformed or the run did not finish.
DualCertificate build_certificate(const GreedyTrace& trace);

/// sum D_ij alpha_ij - sum beta_it for the given duals.
Rational dual_objective(const SquareMatrix& demands, const SquareMatrix& alpha,
                        const std::vector<std::vector<Rational>>& beta);

/// Total completion time of the greedy run recorded in the trace.
Rational trace_total_completion(const GreedyTrace& trace);

struct CertificateCheck {
  bool passed = false;
  /// Empty on success, otherwise the first inequality that failed.
  std::string first_violation;
  bool trace_consistent = false;
  bool feasible_DS = false;
  bool feasible_DR = false;
  bool objective_bound = false;
  bool residual_identity = false;
  Rational alg_total_completion;
  Rational dual_sum;
};

/// Checks, in order: the trace replays the instance, dual feasibility of both
/// certificates, stored objectives, obj_DS + obj_DR >= ALG / 2, and the
/// residual identity 4 beta_S[i][t] = D_i^S(t) >= D_i^S - t (and the receiver
/// counterpart). Never throws.
CertificateCheck check_certificate(const Instance& instance, const GreedyTrace& trace,
                                   const DualCertificate& certificate);

}  // namespace coflow
