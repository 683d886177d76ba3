#include "coflow/bounds.hpp"

#include <stdexcept>

#include "coflow/errors.hpp"
#include "coflow/verifier.hpp"

namespace coflow {

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::kLogarithmic:
      return "logarithmic";
    case Regime::kMiddle:
      return "middle";
    case Regime::kLinear:
      return "linear";
  }
  return "unknown";
}

BoundsReport lower_bounds(std::size_t n, const Rational& B) {
  if (n < 2) throw ValidationError(ValidationError::Kind::kTooFewNodes, "bounds need n >= 2");
  if (B.sign() <= 0) throw ValidationError(ValidationError::Kind::kInvalidParameter, "bounds need B > 0");

  BoundsReport report;
  report.n = n;
  report.B = B;
  report.ceil_B = B.ceil_int();

  std::int64_t levels = 0;
  while ((std::size_t{1} << levels) < n) ++levels;
  report.log_lb = Rational(levels);
  report.max_lb = max(Rational(report.ceil_B), report.log_lb);

  const Rational two(2);
  const Rational nodes(static_cast<std::int64_t>(n));
  const Log2Bracket log_n = log2_bracket(nodes);
  if (B <= two) {
    report.regime = Regime::kLogarithmic;
    report.upper_formula = Rational(levels);
    report.upper_scale = log_n.hi;
    report.rounded = !log_n.exact();
  } else if (B <= nodes) {
    report.regime = Regime::kMiddle;
    const Log2Bracket ratio = log_ratio_bracket(nodes, B);
    report.upper_formula = two * B * (ratio.hi + Rational(1));
    report.upper_scale = B * ratio.hi;
    report.rounded = !ratio.exact();
  } else {
    report.regime = Regime::kLinear;
    report.upper_formula = two * B;
    report.upper_scale = B;
  }

  if (B >= two && B <= nodes) {
    const Log2Bracket ratio = log_ratio_bracket(nodes, B);
    report.mid_lb = B * ratio.lo / Rational(6);
    report.max_lb = max(report.max_lb, *report.mid_lb);
    report.rounded = report.rounded || !ratio.exact();
  }
  return report;
}

BoundsReport lower_bounds(const Instance& instance) {
  return lower_bounds(instance.n(), instance.load_bound());
}

PathCountCheck path_count(std::int64_t L, std::int64_t h, std::size_t n) {
  if (L < 0 || h < 0) throw std::invalid_argument("path count needs L, h >= 0");
  PathCountCheck check;
  check.L = L;
  check.h = h;
  mpz_class binomial;
  const std::int64_t top = std::min(h, L);
  for (std::int64_t i = 1; i <= top; ++i) {
    mpz_bin_uiui(binomial.get_mpz_t(), static_cast<unsigned long>(L), static_cast<unsigned long>(i));
    check.count += binomial;
  }
  check.feasible = 2 * check.count >= mpz_class(std::to_string(n));
  return check;
}

bool path_count_feasible(std::int64_t L, std::int64_t h, std::size_t n) { return path_count(L, h, n).feasible; }

GapReport compare(const Instance& instance, const Schedule& schedule, const BoundsReport& bounds) {
  const VerificationReport report = verify(instance, schedule);
  if (!report.feasible) throw std::invalid_argument("cannot compare an infeasible schedule against bounds");
  const Metrics metrics = compute_metrics(instance, schedule);

  GapReport gap;
  gap.makespan = metrics.makespan;
  gap.total_completion = metrics.total_completion;
  gap.average_completion = metrics.average_completion;
  gap.max_lb = bounds.max_lb;
  gap.informational = !instance.is_uniform();
  if (gap.max_lb.sign() > 0) {
    gap.ratio_makespan = Rational(gap.makespan) / gap.max_lb;
    gap.ratio_avg = gap.average_completion / gap.max_lb;
  }
  gap.ratio_makespan_decimal = to_decimal(gap.ratio_makespan);
  gap.ratio_avg_decimal = to_decimal(gap.ratio_avg);
  return gap;
}

}  // namespace coflow
