#include "coflow/direct.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace coflow {

namespace {

PairList support_pairs(const SquareMatrix& m) {
  PairList pairs;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (i != j && m(i, j).sign() > 0) pairs.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }
  return pairs;
}

PairList step_order(const SquareMatrix& residual, const std::vector<Rational>& sender,
                    const std::vector<Rational>& receiver, const GreedyOptions& options,
                    std::mt19937_64& rng) {
  PairList pairs = support_pairs(residual);
  switch (options.order) {
    case PairOrder::kLexicographic:
      break;
    case PairOrder::kResidualDescending:
      std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        return residual(a.first, a.second) > residual(b.first, b.second);
      });
      break;
    case PairOrder::kLoadDescending:
      std::stable_sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        return sender[a.first] + receiver[a.second] > sender[b.first] + receiver[b.second];
      });
      break;
    case PairOrder::kRandom:
      for (std::size_t k = pairs.size(); k > 1; --k) {
        std::swap(pairs[k - 1], pairs[rng() % k]);
      }
      break;
  }
  return pairs;
}

}  // namespace

FractionalMatching maximal_fractional_matching(const SquareMatrix& residual, const Rational& cap,
                                               const PairList& order) {
  const std::size_t n = residual.size();
  std::vector<Rational> sender_room(n, cap);
  std::vector<Rational> receiver_room(n, cap);
  FractionalMatching matching;
  matching.cap = cap;
  for (const auto& [i, j] : order) {
    const Rational& r = residual(i, j);
    if (r.sign() <= 0) continue;
    Rational rate = min(r, min(sender_room[i], receiver_room[j]));
    if (rate.sign() <= 0) continue;
    sender_room[i] -= rate;
    receiver_room[j] -= rate;
    matching.triples.push_back({i, j, std::move(rate)});
  }
  return matching;
}

FractionalMatching maximal_fractional_matching(const SquareMatrix& residual, const Rational& cap) {
  return maximal_fractional_matching(residual, cap, support_pairs(residual));
}

void GreedyTrace::refresh_sums() {
  const std::size_t size = n();
  sender_residual.assign(residuals.size(), std::vector<Rational>(size));
  receiver_residual.assign(residuals.size(), std::vector<Rational>(size));
  for (std::size_t t = 0; t < residuals.size(); ++t) {
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        const Rational& r = residuals[t](i, j);
        if (r.is_zero()) continue;
        sender_residual[t][i] += r;
        receiver_residual[t][j] += r;
      }
    }
  }
}

Schedule schedule_from_matchings(const std::vector<FractionalMatching>& matchings) {
  Schedule schedule;
  schedule.steps.reserve(matchings.size());
  for (const auto& matching : matchings) {
    Step step;
    for (const auto& e : matching.triples) {
      step.transfers.push_back({e.source, e.receiver, {e.source, e.receiver}, e.rate});
    }
    schedule.steps.push_back(std::move(step));
  }
  return schedule;
}

GreedyResult greedy_schedule(const Instance& instance, const GreedyOptions& options) {
  const std::size_t n = instance.n();
  // Never reached on valid input; every step ships at least one saturating amount.
  const std::int64_t hard_horizon =
      instance.total_demand().ceil_int() + static_cast<std::int64_t>(n * n);

  GreedyTrace trace;
  trace.residuals.push_back(instance.demands());
  std::mt19937_64 rng(options.seed);
  std::vector<Rational> sender(instance.row_sums());
  std::vector<Rational> receiver(instance.col_sums());
  const Rational cap(1);

  while (!trace.residuals.back().all_zero()) {
    if (static_cast<std::int64_t>(trace.matchings.size()) >= hard_horizon) {
      throw std::logic_error("greedy scheduler exceeded its horizon of " + std::to_string(hard_horizon));
    }
    const SquareMatrix& current = trace.residuals.back();
    FractionalMatching matching =
        maximal_fractional_matching(current, cap, step_order(current, sender, receiver, options, rng));
    SquareMatrix next = current;
    for (const auto& e : matching.triples) {
      next(e.source, e.receiver) -= e.rate;
      sender[e.source] -= e.rate;
      receiver[e.receiver] -= e.rate;
    }
    trace.matchings.push_back(std::move(matching));
    trace.residuals.push_back(std::move(next));
  }
  trace.refresh_sums();
  Schedule schedule = schedule_from_matchings(trace.matchings);
  return {std::move(schedule), std::move(trace)};
}

std::vector<IntegralMatching> bipartite_edge_coloring(
    const std::vector<std::vector<std::int64_t>>& multiplicity) {
  const std::size_t n = multiplicity.size();
  std::int64_t max_degree = 0;
  std::vector<std::int64_t> col_degree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (multiplicity[i].size() != n) throw std::invalid_argument("multiplicity matrix must be square");
    std::int64_t row_degree = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (multiplicity[i][j] < 0) throw std::invalid_argument("negative multiplicity");
      if (i == j && multiplicity[i][j] != 0) throw std::invalid_argument("self-loop multiplicity");
      row_degree += multiplicity[i][j];
      col_degree[j] += multiplicity[i][j];
    }
    max_degree = std::max(max_degree, row_degree);
  }
  for (auto d : col_degree) max_degree = std::max(max_degree, d);

  const auto colors = static_cast<std::size_t>(max_degree);
  constexpr std::int64_t kFree = -1;
  // sender_at[u][c] = receiver joined to sender u by color c; receiver_at symmetric.
  std::vector<std::vector<std::int64_t>> sender_at(n, std::vector<std::int64_t>(colors, kFree));
  std::vector<std::vector<std::int64_t>> receiver_at(n, std::vector<std::int64_t>(colors, kFree));

  auto free_color = [colors](const std::vector<std::int64_t>& slots) {
    for (std::size_t c = 0; c < colors; ++c) {
      if (slots[c] == kFree) return c;
    }
    throw std::logic_error("no free color below the maximum degree");
  };

  struct Colored {
    std::size_t sender;
    std::size_t receiver;
    std::size_t color;
  };
  std::vector<Colored> path;

  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      for (std::int64_t copy = 0; copy < multiplicity[u][v]; ++copy) {
        const std::size_t a = free_color(sender_at[u]);
        if (receiver_at[v][a] != kFree) {
          const std::size_t b = free_color(receiver_at[v]);
          // Swap a and b along the alternating path starting at v with color a.
          // In a bipartite graph it never reaches u, so a becomes free at v.
          path.clear();
          std::size_t right = v;
          while (true) {
            const std::int64_t left = receiver_at[right][a];
            if (left == kFree) break;
            path.push_back({static_cast<std::size_t>(left), right, a});
            const std::int64_t next = sender_at[left][b];
            if (next == kFree) break;
            path.push_back({static_cast<std::size_t>(left), static_cast<std::size_t>(next), b});
            right = static_cast<std::size_t>(next);
          }
          for (const auto& e : path) {
            sender_at[e.sender][e.color] = kFree;
            receiver_at[e.receiver][e.color] = kFree;
          }
          for (const auto& e : path) {
            const std::size_t swapped = e.color == a ? b : a;
            sender_at[e.sender][swapped] = static_cast<std::int64_t>(e.receiver);
            receiver_at[e.receiver][swapped] = static_cast<std::int64_t>(e.sender);
          }
        }
        sender_at[u][a] = static_cast<std::int64_t>(v);
        receiver_at[v][a] = static_cast<std::int64_t>(u);
      }
    }
  }

  std::vector<IntegralMatching> classes(colors, IntegralMatching(n));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t c = 0; c < colors; ++c) {
      if (sender_at[u][c] != kFree) {
        classes[c].connect(static_cast<NodeId>(u), static_cast<NodeId>(sender_at[u][c]));
      }
    }
  }
  return classes;
}

Schedule edge_coloring_schedule(const Instance& instance) {
  const std::size_t n = instance.n();
  std::vector<std::vector<std::int64_t>> multiplicity(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) multiplicity[i][j] = instance.demand(i, j).ceil_int();
  }
  const auto classes = bipartite_edge_coloring(multiplicity);

  SquareMatrix remaining = instance.demands();
  const Rational one(1);
  Schedule schedule;
  schedule.steps.resize(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (NodeId u = 0; u < n; ++u) {
      const auto v = classes[c].receiver_of(u);
      if (!v) continue;
      Rational amount = min(one, remaining(u, *v));
      remaining(u, *v) -= amount;
      schedule.steps[c].transfers.push_back({u, *v, {u, *v}, std::move(amount)});
    }
  }
  return schedule;
}

Schedule smeared_fractional_schedule(const Instance& instance) {
  const std::size_t n = instance.n();
  const std::int64_t steps = instance.load_bound().ceil_int();
  Schedule schedule;
  if (steps == 0) return schedule;
  const Rational divisor(steps);
  Step step;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      const Rational& d = instance.demand(i, j);
      if (d.sign() > 0) step.transfers.push_back({i, j, {i, j}, d / divisor});
    }
  }
  schedule.steps.assign(static_cast<std::size_t>(steps), step);
  return schedule;
}

}  // namespace coflow
