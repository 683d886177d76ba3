#pragma once

// Reference computations for the test suites. They use mpq_class directly and
// share no code with the library beyond the data types they inspect.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "coflow/model.hpp"

namespace testing {

using coflow::Instance;
using coflow::Rational;
using coflow::Schedule;

inline mpq_class q(const Rational& r) { return r.to_mpq(); }
inline mpq_class q(long num, long den = 1) {
  mpq_class v(num, den);
  v.canonicalize();
  return v;
}
inline Rational R(const mpq_class& v) { return Rational(v); }

inline Instance make(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<Rational>> d;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (const auto& cell : row) r.push_back(Rational::parse(cell));
    d.push_back(r);
  }
  return coflow::make_instance(d.size(), d);
}

inline std::vector<std::vector<mpq_class>> matrix(const Instance& inst) {
  const std::size_t n = inst.n();
  std::vector<std::vector<mpq_class>> d(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i][j] = q(inst.demand(i, j));
  }
  return d;
}

inline mpq_class load_of(const Instance& inst) {
  const auto d = matrix(inst);
  mpq_class best = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    mpq_class row = 0, col = 0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      row += d[i][j];
      col += d[j][i];
    }
    best = std::max({best, row, col});
  }
  return best;
}

inline long ceil_of(const mpq_class& v) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), v.get_num_mpz_t(), v.get_den_mpz_t());
  return c.get_si();
}

// Maximum row or column sum of the rounded-up demand matrix.
inline long konig_degree(const Instance& inst) {
  const auto d = matrix(inst);
  long best = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    long row = 0, col = 0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      row += ceil_of(d[i][j]);
      col += ceil_of(d[j][i]);
    }
    best = std::max({best, row, col});
  }
  return best;
}

struct Outcome {
  bool feasible = true;
  std::string reason;
  long makespan = 0;
  mpq_class total_completion = 0;
  mpq_class max_edge_load = 0;
  bool relayed = false;
};

// Straightforward feasibility check: edge and node capacities per step,
// relays only forward what they received in earlier steps, destinations keep
// what they receive, every demand is met.
inline Outcome reference_check(const Instance& inst, const Schedule& s) {
  Outcome out;
  const std::size_t n = inst.n();
  const auto d = matrix(inst);
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, mpq_class> held;  // (node, origin, dest)
  std::vector<std::vector<mpq_class>> delivered(n, std::vector<mpq_class>(n));
  auto fail = [&out](const std::string& why) {
    if (out.feasible) out.reason = why;
    out.feasible = false;
  };
  for (std::size_t step = 0; step < s.steps.size(); ++step) {
    std::map<std::pair<std::size_t, std::size_t>, mpq_class> edge;
    std::vector<mpq_class> outgoing(n), incoming(n);
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, mpq_class> leaving, arriving;
    for (const auto& t : s.steps[step].transfers) {
      const std::size_t a = t.from, b = t.to, o = t.commodity.origin, e = t.commodity.destination;
      if (a >= n || b >= n || o >= n || e >= n || a == b || sgn(q(t.amount)) <= 0 || sgn(d[o][e]) == 0) {
        fail("structural");
        continue;
      }
      const mpq_class amount = q(t.amount);
      edge[{a, b}] += amount;
      outgoing[a] += amount;
      incoming[b] += amount;
      if (a == e) fail("leaves destination");
      if (a != o) {
        leaving[{a, o, e}] += amount;
        out.relayed = true;
      }
      arriving[{b, o, e}] += amount;
    }
    for (const auto& [k, v] : edge) {
      out.max_edge_load = std::max(out.max_edge_load, v);
      if (v > 1) fail("edge over capacity");
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (outgoing[v] > 1 || incoming[v] > 1) fail("node over capacity");
    }
    for (const auto& [k, v] : leaving) {
      if (held[k] < v) fail("relay forwards data it does not hold");
      held[k] -= v;
    }
    for (const auto& [k, v] : arriving) {
      const auto [node, o, e] = k;
      if (node == e) {
        delivered[o][e] += v;
        out.total_completion += v * static_cast<long>(step + 1);
        out.makespan = static_cast<long>(step + 1);
      } else if (node != o) {
        held[k] += v;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (delivered[i][j] < d[i][j]) fail("demand unmet");
    }
  }
  return out;
}

// Lexicographic greedy maximal fractional matching, returning ALG's total
// completion time and horizon.
inline std::pair<mpq_class, long> reference_greedy(const Instance& inst) {
  auto d = matrix(inst);
  const std::size_t n = d.size();
  mpq_class total = 0;
  long t = 0;
  auto remaining = [&]() {
    for (const auto& row : d) {
      for (const auto& v : row) {
        if (sgn(v) > 0) return true;
      }
    }
    return false;
  };
  while (remaining()) {
    ++t;
    std::vector<mpq_class> out(n, mpq_class(1)), in(n, mpq_class(1));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        mpq_class r = std::min({d[i][j], out[i], in[j]});
        if (sgn(r) <= 0) continue;
        d[i][j] -= r;
        out[i] -= r;
        in[j] -= r;
        total += r * t;
      }
    }
  }
  return {total, t};
}

// Sender-only relaxation with per-slot cap c: each sender front-loads its
// total at rate c in slots 1, 2, ...
inline mpq_class front_loaded(const std::vector<mpq_class>& totals, const mpq_class& cap) {
  mpq_class objective = 0;
  for (mpq_class rest : totals) {
    for (long t = 1; sgn(rest) > 0; ++t) {
      const mpq_class chunk = std::min(rest, cap);
      objective += chunk * t;
      rest -= chunk;
    }
  }
  return objective;
}

inline mpq_class reference_sender_bound(const Instance& inst) {
  const auto d = matrix(inst);
  std::vector<mpq_class> totals;
  for (const auto& row : d) {
    mpq_class s = 0;
    for (const auto& v : row) s += v;
    totals.push_back(s);
  }
  return front_loaded(totals, mpq_class(1, 4));
}

inline mpq_class reference_receiver_bound(const Instance& inst) {
  const auto d = matrix(inst);
  std::vector<mpq_class> totals(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) totals[j] += d[i][j];
  }
  return front_loaded(totals, mpq_class(1, 4));
}

inline mpz_class binomial_sum(long L, long h) {
  // Pascal's triangle row L.
  std::vector<mpz_class> row(1, 1);
  for (long k = 1; k <= L; ++k) {
    std::vector<mpz_class> next(k + 1, 1);
    for (long i = 1; i < k; ++i) next[i] = row[i - 1] + row[i];
    row = next;
  }
  mpz_class sum = 0;
  for (long i = 1; i <= std::min(h, L); ++i) sum += row[i];
  return sum;
}

// Instances with n in {2, 3, 4} and entries from {0, 1/4, 1/3, 1/2, 1, 3/2}.
inline std::vector<Instance> small_corpus(std::size_t count, std::uint64_t seed) {
  static const char* values[] = {"0", "1/4", "1/3", "1/2", "1", "3/2"};
  std::mt19937_64 rng(seed);
  std::vector<Instance> out;
  while (out.size() < count) {
    const std::size_t n = 2 + rng() % 3;
    std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) d[i][j] = Rational::parse(values[rng() % 6]);
      }
    }
    out.push_back(coflow::make_instance(n, d));
  }
  return out;
}

}  // namespace testing
