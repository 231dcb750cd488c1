#pragma once

// Tightness gadgets: the q-ary cube, the necklace graph (R-cube modulo cyclic
// rotation), the consecutive-ones function on its powers, and seeded
// Monte-Carlo estimators for implicit functions.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <thread>

#include "cartprod/graph.hpp"

namespace cartprod {

/// Pure evaluator from a product vertex tuple to {-1,+1}.
using ImplicitFunction = std::function<int(std::span<const Vertex>)>;

inline ProductGraph build_qary_cube(std::size_t q, std::size_t k, std::size_t dense_cap = kDefaultDenseCap) {
  if (q < 2) throw std::invalid_argument("q-ary cube needs q >= 2");
  return ProductGraph(complete_graph(q), k, dense_cap);
}

inline constexpr std::size_t kMaxNecklaceBits = 20;

struct NecklaceGraph {
  std::size_t bits = 0;                    // R
  WeightedGraph graph;
  std::vector<std::uint32_t> representatives;  // lexicographically minimal rotation of each class, ascending
  std::vector<std::size_t> longest_run;        // longest cyclic run of 1s in each class
};

namespace detail {

inline std::uint32_t rotate_left(std::uint32_t s, std::size_t r, std::size_t bits) {
  const std::uint32_t mask = (bits == 32) ? ~0u : ((1u << bits) - 1u);
  if (r == 0) return s;
  return ((s << r) | (s >> (bits - r))) & mask;
}

/// Minimal rotation as an R-bit integer; with the most significant bit read
/// first, the minimal integer is the lexicographically minimal string.
inline std::uint32_t canonical_rotation(std::uint32_t s, std::size_t bits) {
  std::uint32_t best = s;
  for (std::size_t r = 1; r < bits; ++r) best = std::min(best, rotate_left(s, r, bits));
  return best;
}

inline std::size_t longest_cyclic_run(std::uint32_t s, std::size_t bits) {
  std::size_t best = 0, cur = 0;
  for (std::size_t i = 0; i < 2 * bits; ++i) {
    cur = ((s >> (i % bits)) & 1u) ? cur + 1 : 0;
    best = std::max(best, cur);
  }
  return std::min(best, bits);
}

}  // namespace detail

/// Quotient of {0,1}^R minus {0^R, 1^R} by cyclic rotation. Edge mass between
/// two classes is proportional to the number of hypercube edges joining them.
inline NecklaceGraph build_necklace(std::size_t bits) {
  if (bits < 3) throw std::invalid_argument("necklace needs R >= 3");
  if (bits > kMaxNecklaceBits)
    throw CapExceeded("necklace: R = " + std::to_string(bits) + " exceeds the class-enumeration limit of " +
                      std::to_string(kMaxNecklaceBits));
  const std::uint32_t full = (1u << bits) - 1u;
  std::vector<std::uint32_t> canon(full + 1, 0);
  std::map<std::uint32_t, std::size_t> class_of;
  for (std::uint32_t s = 1; s < full; ++s) {
    canon[s] = detail::canonical_rotation(s, bits);
    class_of.emplace(canon[s], 0);
  }
  NecklaceGraph out;
  out.bits = bits;
  for (auto& [rep, id] : class_of) {
    id = out.representatives.size();
    out.representatives.push_back(rep);
    out.longest_run.push_back(detail::longest_cyclic_run(rep, bits));
  }
  std::map<std::pair<std::size_t, std::size_t>, double> count;
  for (std::uint32_t s = 1; s < full; ++s) {
    const std::size_t a = class_of[canon[s]];
    for (std::size_t i = 0; i < bits; ++i) {
      const std::uint32_t t = s ^ (1u << i);
      if (t == 0 || t == full || t < s) continue;  // each hypercube edge once
      const std::size_t b = class_of[canon[t]];
      count[std::minmax(a, b)] += 1.0;
    }
  }
  std::vector<WeightedEdgeInput> edges;
  for (const auto& [key, c] : count) edges.push_back({key.first, key.second, c});
  out.graph = build_graph(out.representatives.size(), edges);
  return out;
}

/// Smallest m with 2^m >= kR.
inline std::size_t consecutive_ones_run_length(std::size_t bits, std::size_t k) {
  const std::size_t target = bits * k;
  std::size_t m = 0;
  while ((std::size_t{1} << m) < target) ++m;
  return m;
}

/// +1 iff some coordinate's class has a cyclic run of ceil(log2(kR)) ones.
inline ImplicitFunction consecutive_ones_function(const NecklaceGraph& necklace, std::size_t k) {
  if (necklace.bits * k < 4) throw std::invalid_argument("consecutive_ones_function needs kR >= 4");
  const std::size_t m = consecutive_ones_run_length(necklace.bits, k);
  auto runs = std::make_shared<const std::vector<std::size_t>>(necklace.longest_run);
  return [runs, m](std::span<const Vertex> x) {
    for (Vertex c : x)
      if ((*runs)[c] >= m) return 1;
    return -1;
  };
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  double half_width = 0.0;  // 95% normal approximation
  std::size_t samples = 0;
};

inline constexpr std::size_t kMonteCarloStreams = 8;

namespace detail {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;
};

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::size_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x6b6b6cu};
  return std::mt19937_64(seq);
}

/// Runs a per-stream sampler `samples` times split over independent seeded
/// streams; `make_sampler()` builds one sampler per stream. Merge order is fixed.
template <class MakeSampler>
MonteCarloEstimate run_streams(std::size_t samples, std::uint64_t seed, MakeSampler make_sampler) {
  std::vector<Moments> parts(kMonteCarloStreams);
  std::vector<std::thread> pool;
  const unsigned workers = worker_count(kMonteCarloStreams);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t s = w; s < kMonteCarloStreams; s += workers) {
        auto rng = stream_rng(seed, s);
        auto draw = make_sampler();
        const std::size_t count = samples / kMonteCarloStreams + (s < samples % kMonteCarloStreams ? 1 : 0);
        Moments m;
        for (std::size_t i = 0; i < count; ++i) {
          const double v = draw(rng);
          m.sum += v;
          m.sum_sq += v * v;
        }
        m.count = count;
        parts[s] = m;
      }
    });
  }
  for (auto& t : pool) t.join();
  Moments total;
  for (const auto& m : parts) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
    total.count += m.count;
  }
  MonteCarloEstimate e;
  e.samples = total.count;
  if (total.count == 0) return e;
  const double nd = static_cast<double>(total.count);
  e.estimate = total.sum / nd;
  const double var = total.count > 1 ? std::max(0.0, (total.sum_sq - nd * e.estimate * e.estimate) / (nd - 1.0)) : 0.0;
  e.std_error = std::sqrt(var / nd);
  e.half_width = 1.96 * e.std_error;
  return e;
}

}  // namespace detail

/// Unbiased estimate of <f, L_j f> = 1/2 E_{x_-j ~ pi} E_{e ~ mu} (f(x^{j<-u}) - f(x^{j<-v}))^2.
inline MonteCarloEstimate influence_monte_carlo(const ImplicitFunction& fn, const WeightedGraph& g, std::size_t k,
                                                std::size_t j, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (j >= k) throw std::invalid_argument("coordinate out of range");
  const auto pi = g.pi();
  const auto edges = g.edges();
  std::vector<double> edge_w;
  for (const auto& e : edges) edge_w.push_back(e.mass);
  return detail::run_streams(samples, seed, [&] {
    return [&, vertex = std::discrete_distribution<std::size_t>(pi.begin(), pi.end()),
            edge = std::discrete_distribution<std::size_t>(edge_w.begin(), edge_w.end()),
            x = std::vector<Vertex>(k)](std::mt19937_64& rng) mutable {
      for (std::size_t i = 0; i < k; ++i) x[i] = i == j ? 0 : vertex(rng);
      const auto& e = edges[edge(rng)];
      x[j] = e.u;
      const double a = fn(x);
      x[j] = e.v;
      const double b = fn(x);
      return 0.5 * (a - b) * (a - b);
    };
  });
}

/// Pr_{x ~ pi^k}[f(x) = value].
inline MonteCarloEstimate probability_monte_carlo(const ImplicitFunction& fn, const WeightedGraph& g, std::size_t k,
                                                  int value, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const auto pi = g.pi();
  return detail::run_streams(samples, seed, [&] {
    return [&, vertex = std::discrete_distribution<std::size_t>(pi.begin(), pi.end()),
            x = std::vector<Vertex>(k)](std::mt19937_64& rng) mutable {
      for (auto& c : x) c = vertex(rng);
      return fn(x) == value ? 1.0 : 0.0;
    };
  });
}

}  // namespace cartprod
