#include "coflow/certificate.hpp"

#include <sstream>

#include "coflow/errors.hpp"

namespace coflow {

namespace {

std::string at(std::size_t i, std::size_t j, std::size_t t) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ", " << t << ")";
  return os.str();
}

void validate_shape(const GreedyTrace& trace) {
  if (trace.residuals.empty()) throw TraceError("trace has no residual matrices");
  if (trace.residuals.size() != trace.matchings.size() + 1) {
    throw TraceError("trace needs one more residual matrix than matchings");
  }
  const std::size_t n = trace.n();
  for (const auto& r : trace.residuals) {
    if (r.size() != n) throw TraceError("residual matrices differ in size");
  }
  if (trace.sender_residual.size() != trace.residuals.size() ||
      trace.receiver_residual.size() != trace.residuals.size()) {
    throw TraceError("trace residual sums are missing");
  }
  if (!trace.residuals.back().all_zero()) throw TraceError("greedy run left residual demand at its horizon");
}

// Sender side when by_sender, receiver side otherwise. Returns the first
// violated constraint alpha(i, j) - t <= 4 beta[side][t], or an empty string.
std::string dual_feasibility(const SquareMatrix& alpha, const std::vector<std::vector<Rational>>& beta,
                             std::size_t horizon, bool by_sender) {
  const std::size_t n = alpha.size();
  const Rational four(4);
  const char* name = by_sender ? "DS" : "DR";
  if (beta.size() != n) return std::string(name) + " beta has the wrong number of nodes";
  for (std::size_t v = 0; v < n; ++v) {
    if (beta[v].size() != horizon + 1) return std::string(name) + " beta has the wrong horizon";
    for (const auto& b : beta[v]) {
      if (b.sign() < 0) return std::string(name) + " beta is negative at node " + std::to_string(v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = alpha(i, j);
      if (a.sign() < 0) return std::string(name) + " alpha is negative at (" + std::to_string(i) + ", " + std::to_string(j) + ")";
      const std::size_t side = by_sender ? i : j;
      // t = horizon has beta = 0, which covers every later t as well.
      for (std::size_t t = 0; t <= horizon; ++t) {
        if (a - Rational(static_cast<std::int64_t>(t)) > four * beta[side][t]) {
          return std::string(name) + " constraint alpha - t <= 4 beta violated at " + at(i, j, t);
        }
      }
    }
  }
  return {};
}

}  // namespace

Rational dual_objective(const SquareMatrix& demands, const SquareMatrix& alpha,
                        const std::vector<std::vector<Rational>>& beta) {
  Rational value;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    for (std::size_t j = 0; j < demands.size(); ++j) {
      if (!demands(i, j).is_zero()) value += demands(i, j) * alpha(i, j);
    }
  }
  for (const auto& row : beta) {
    for (const auto& b : row) value -= b;
  }
  return value;
}

Rational trace_total_completion(const GreedyTrace& trace) {
  Rational total;
  for (std::size_t t = 0; t < trace.matchings.size(); ++t) {
    total += trace.matchings[t].total_rate() * Rational(static_cast<std::int64_t>(t + 1));
  }
  return total;
}

DualCertificate build_certificate(const GreedyTrace& trace) {
  validate_shape(trace);
  const std::size_t n = trace.n();
  const std::size_t horizon = trace.horizon();
  const Rational quarter(1, 4);

  DualCertificate cert;
  cert.horizon = horizon;
  cert.alpha_S = SquareMatrix(n);
  cert.alpha_R = SquareMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cert.alpha_S(i, j) = trace.sender_residual[0][i];
      cert.alpha_R(i, j) = trace.receiver_residual[0][j];
    }
  }
  cert.beta_S.assign(n, std::vector<Rational>(horizon + 1));
  cert.beta_R.assign(n, std::vector<Rational>(horizon + 1));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t t = 0; t <= horizon; ++t) {
      cert.beta_S[v][t] = trace.sender_residual[t][v] * quarter;
      cert.beta_R[v][t] = trace.receiver_residual[t][v] * quarter;
    }
  }
  const SquareMatrix& demands = trace.residuals.front();
  cert.obj_DS = dual_objective(demands, cert.alpha_S, cert.beta_S);
  cert.obj_DR = dual_objective(demands, cert.alpha_R, cert.beta_R);
  return cert;
}

CertificateCheck check_certificate(const Instance& instance, const GreedyTrace& trace,
                                   const DualCertificate& certificate) {
  CertificateCheck check;
  auto fail = [&check](std::string message) {
    if (check.first_violation.empty()) check.first_violation = std::move(message);
  };

  try {
    validate_shape(trace);
  } catch (const TraceError& e) {
    fail(std::string("trace: ") + e.what());
    return check;
  }
  const std::size_t n = instance.n();
  const std::size_t horizon = trace.horizon();
  if (trace.n() != n || certificate.n() != n || certificate.horizon != horizon) {
    fail("trace, certificate and instance sizes differ");
    return check;
  }

  // The trace must replay greedy shipments from D down to zero.
  check.trace_consistent = trace.residuals.front() == instance.demands();
  if (!check.trace_consistent) fail("trace: initial residual differs from the instance demands");
  for (std::size_t t = 0; t < horizon && check.trace_consistent; ++t) {
    const auto& matching = trace.matchings[t];
    if (!matching.valid(n) || matching.cap != Rational(1)) {
      check.trace_consistent = false;
      fail("trace: step " + std::to_string(t) + " is not a fractional matching with cap 1");
      break;
    }
    SquareMatrix expected = trace.residuals[t];
    for (const auto& e : matching.triples) expected(e.source, e.receiver) -= e.rate;
    for (std::size_t i = 0; i < n && check.trace_consistent; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (expected(i, j).sign() < 0 || expected(i, j) != trace.residuals[t + 1](i, j)) {
          check.trace_consistent = false;
          fail("trace: residual at step " + std::to_string(t + 1) + " does not follow from the matching");
          break;
        }
      }
    }
  }
  if (check.trace_consistent) {
    GreedyTrace recomputed = trace;
    recomputed.refresh_sums();
    if (recomputed.sender_residual != trace.sender_residual ||
        recomputed.receiver_residual != trace.receiver_residual) {
      check.trace_consistent = false;
      fail("trace: stored residual sums disagree with the residual matrices");
    }
  }

  const std::string ds = dual_feasibility(certificate.alpha_S, certificate.beta_S, horizon, true);
  const std::string dr = dual_feasibility(certificate.alpha_R, certificate.beta_R, horizon, false);
  check.feasible_DS = ds.empty();
  check.feasible_DR = dr.empty();
  if (!ds.empty()) fail(ds);
  if (!dr.empty()) fail(dr);

  const SquareMatrix& demands = instance.demands();
  if (check.feasible_DS && check.feasible_DR) {
    const Rational ds_value = dual_objective(demands, certificate.alpha_S, certificate.beta_S);
    const Rational dr_value = dual_objective(demands, certificate.alpha_R, certificate.beta_R);
    if (ds_value != certificate.obj_DS) fail("stored obj_DS " + certificate.obj_DS.str() + " differs from " + ds_value.str());
    if (dr_value != certificate.obj_DR) fail("stored obj_DR " + certificate.obj_DR.str() + " differs from " + dr_value.str());
    check.dual_sum = ds_value + dr_value;
    check.alg_total_completion = trace_total_completion(trace);
    check.objective_bound = check.dual_sum * Rational(2) >= check.alg_total_completion;
    if (!check.objective_bound) {
      fail("obj_DS + obj_DR = " + check.dual_sum.str() + " is below ALG / 2 = " +
           (check.alg_total_completion / Rational(2)).str());
    }
  }

  check.residual_identity = true;
  const Rational four(4);
  for (std::size_t v = 0; v < n && check.residual_identity; ++v) {
    if (certificate.beta_S.size() != n || certificate.beta_R.size() != n) {
      check.residual_identity = false;
      break;
    }
    for (std::size_t t = 0; t <= horizon; ++t) {
      const Rational elapsed(static_cast<std::int64_t>(t));
      const Rational& sender_left = trace.sender_residual[t][v];
      const Rational& receiver_left = trace.receiver_residual[t][v];
      if (four * certificate.beta_S[v][t] != sender_left || sender_left < trace.sender_residual[0][v] - elapsed) {
        check.residual_identity = false;
        fail("sender residual identity 4 beta = D^S(t) >= D^S - t fails at node " + std::to_string(v) +
             ", t = " + std::to_string(t));
        break;
      }
      if (four * certificate.beta_R[v][t] != receiver_left ||
          receiver_left < trace.receiver_residual[0][v] - elapsed) {
        check.residual_identity = false;
        fail("receiver residual identity 4 beta = D^R(t) >= D^R - t fails at node " + std::to_string(v) +
             ", t = " + std::to_string(t));
        break;
      }
    }
  }

  check.passed = check.first_violation.empty();
  return check;
}

}  // namespace coflow
