#pragma once

/**
 * Random generation of mean self-similar trees and Monte Carlo estimation
 * of branch statistics.
 *
 * Construction (independent random attachment): start from a single vertex.
 * Each stage first gives every leaf two children, raising every vertex
 * order by one; then, for every branch of order j >= 2, draws a count N
 * from the side distribution with mean T_{j-1} and inserts N new leaves,
 * each into an independently uniform slot of that branch. A branch carrying
 * s side branches spans s+1 vertices; its slots are the parental edges of
 * those vertices, with the root's missing parental edge standing in for the
 * top branch's outlet. N independent uniform slot choices realize the
 * equiprobable multinomial over the s+1 slots. A leaf inserted at stage k
 * of a K-stage build ends up K-k+1 orders below its carrier branch, so an
 * order-j branch of the finished tree carries, for every i < j, an
 * independent count with mean T_{j-i}; the ensemble means therefore satisfy
 * the zeta recursion of horton.hpp exactly.
 *
 * Reproducibility: every sample index gets its own generator derived from
 * (seed, sample_index), and batch results are reduced in fixed block order,
 * so reports are identical for any thread count. All draws are hand-rolled
 * on top of mt19937_64; standard-library distributions are not bit-stable
 * across implementations.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hortonlab/error.hpp"
#include "hortonlab/pruning.hpp"
#include "hortonlab/strahler.hpp"
#include "hortonlab/tokunaga.hpp"
#include "hortonlab/tree.hpp"

namespace hortonlab {

enum class SideDistribution { poisson, geometric, deterministic };

inline const char* distribution_name(SideDistribution d) {
  switch (d) {
    case SideDistribution::poisson: return "poisson";
    case SideDistribution::geometric: return "geometric";
    case SideDistribution::deterministic: return "deterministic";
  }
  return "unknown";
}

struct SamplerConfig {
  TokunagaSequence seq;
  int K = 1;
  SideDistribution distribution = SideDistribution::poisson;
  std::uint64_t seed = 0;
  std::uint64_t samples = 1;
  std::uint64_t max_nodes = 10'000'000;
};

namespace detail {

/// splitmix64 finalizer: bijective 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 engine_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(mix64(mix64(seed) ^ index));
}

inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, n); n >= 1.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
  std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t r = g();
    if (r >= threshold) return r % n;
  }
}

inline std::uint64_t poisson_knuth(std::mt19937_64& g, double lambda) {
  double limit = std::exp(-lambda);
  std::uint64_t k = 0;
  double p = 1.0;
  do {
    p *= uniform01(g);
    ++k;
  } while (p > limit);
  return k - 1;
}

/// Poisson via chunked Knuth multiplication: exp(-30) is far from double
/// underflow, and a sum of independent Poisson chunks is Poisson of the
/// summed mean.
inline std::uint64_t draw_poisson(std::mt19937_64& g, double lambda) {
  std::uint64_t total = 0;
  while (lambda > 30.0) {
    total += poisson_knuth(g, 30.0);
    lambda -= 30.0;
  }
  if (lambda > 0.0) total += poisson_knuth(g, lambda);
  return total;
}

/// Geometric on {0, 1, 2, ...} with the given mean: success probability
/// p = 1/(1+mean), sampled by inversion.
inline std::uint64_t draw_geometric(std::mt19937_64& g, double mean) {
  if (mean <= 0.0) return 0;
  double u = 1.0 - uniform01(g);  // (0, 1]
  double v = std::log(u) / std::log1p(-1.0 / (1.0 + mean));
  if (!(v < 1e18)) return static_cast<std::uint64_t>(1e18);  // node cap trips
  return static_cast<std::uint64_t>(v);
}

inline std::uint64_t draw_count(std::mt19937_64& g, SideDistribution d,
                                double mean) {
  switch (d) {
    case SideDistribution::poisson:
      return mean > 0.0 ? draw_poisson(g, mean) : 0;
    case SideDistribution::geometric:
      return draw_geometric(g, mean);
    case SideDistribution::deterministic: {
      if (mean != std::floor(mean) || !(mean >= 0.0) || mean > 9e15)
        raise(errc::noninteger_mean,
              "deterministic side counts require integer T_k, got " +
                  real17(mean));
      return static_cast<std::uint64_t>(mean);
    }
  }
  return 0;
}

}  // namespace detail

/// Build one random tree of order exactly config.K. Deterministic given
/// (config, sample_index).
inline BinaryTree sample_tree(const SamplerConfig& config,
                              std::uint64_t sample_index) {
  if (config.K < 1) raise(errc::nonpositive_k, "sampler requires K >= 1");
  std::mt19937_64 g = detail::engine_for(config.seed, sample_index);
  BinaryTree t = BinaryTree::single();

  std::vector<NodeIndex> bfs, bottom;
  std::vector<std::uint32_t> slot;
  std::vector<std::vector<NodeIndex>> members;
  std::vector<NodeIndex> bottoms;
  constexpr std::uint32_t kNoSlot = std::numeric_limits<std::uint32_t>::max();

  for (int stage = 2; stage <= config.K; ++stage) {
    // (i) every leaf gets a cherry; all orders rise by one.
    for (NodeIndex v : t.leaves()) t.attach_children(v);
    if (t.size() > config.max_nodes)
      raise(errc::tree_too_large,
            "tree exceeded " + std::to_string(config.max_nodes) + " nodes");

    // (ii) re-derive branches. BFS visits parents first, so each branch's
    // bottom vertex (parent absent or of different order) is seen before
    // the rest of its members and member lists start at the bottom.
    OrderAssignment ord = assign_orders(t);
    bfs.clear();
    bfs.push_back(t.root());
    bottom.assign(t.size(), kNoNode);
    slot.assign(t.size(), kNoSlot);
    members.clear();
    bottoms.clear();
    for (std::size_t head = 0; head < bfs.size(); ++head) {
      NodeIndex v = bfs[head];
      const Node& nd = t.node(v);
      bottom[v] = (nd.parent == kNoNode || ord.order[nd.parent] != ord.order[v])
                      ? v
                      : bottom[nd.parent];
      if (ord.order[v] >= 2) {
        NodeIndex b = bottom[v];
        if (slot[b] == kNoSlot) {
          slot[b] = static_cast<std::uint32_t>(members.size());
          members.emplace_back();
          bottoms.push_back(b);
        }
        members[slot[b]].push_back(v);
      }
      if (nd.left != kNoNode) bfs.push_back(nd.left);
      if (nd.right != kNoNode) bfs.push_back(nd.right);
    }

    // One draw per branch, in a fixed order, so the random stream depends
    // only on (seed, sample_index). Slot lists are the stage-start
    // snapshot: repeated hits on one slot stack below each other, which is
    // exactly the multinomial placement.
    for (std::size_t s = 0; s < bottoms.size(); ++s) {
      int j = ord.order[bottoms[s]];
      double mean = config.seq.term(j - 1);
      std::uint64_t n = detail::draw_count(g, config.distribution, mean);
      if (n > config.max_nodes || t.size() + 2 * n > config.max_nodes)
        raise(errc::tree_too_large,
              "tree exceeded " + std::to_string(config.max_nodes) + " nodes");
      const std::vector<NodeIndex>& gaps = members[s];
      for (std::uint64_t i = 0; i < n; ++i) {
        NodeIndex at = gaps[detail::uniform_below(g, gaps.size())];
        t.insert_side_leaf(at);
      }
    }
  }
  return t;
}

/// Monte Carlo estimates. Flat (i, j) tables are row-major K x K with only
/// i < j entries populated, matching HortonStatistics.
struct SimulationReport {
  int K = 0;
  std::uint64_t samples = 0;
  std::vector<double> mean_Nk, se_Nk;       // index k-1
  std::vector<double> mean_Nij, se_Nij;     // index (i-1)*K + (j-1)
  std::vector<double> t_hat_ij, t_hat_se;   // T_hat = mean_Nij / mean_Nj

  std::size_t pair_index(int i, int j) const {
    return static_cast<std::size_t>(i - 1) * K + static_cast<std::size_t>(j - 1);
  }
  double nk(int k) const { return mean_Nk[static_cast<std::size_t>(k) - 1]; }
  double nk_se(int k) const { return se_Nk[static_cast<std::size_t>(k) - 1]; }
  double nij(int i, int j) const { return mean_Nij[pair_index(i, j)]; }
  double nij_se(int i, int j) const { return se_Nij[pair_index(i, j)]; }
  double t_hat(int i, int j) const { return t_hat_ij[pair_index(i, j)]; }
  double t_se(int i, int j) const { return t_hat_se[pair_index(i, j)]; }
};

namespace detail {

/// Running sums for means, variances, and the N_ij x N_j cross products
/// needed by the ratio standard error. merge() in fixed block order keeps
/// floating-point results independent of thread count.
struct MomentAccumulator {
  int K = 0;
  std::uint64_t n = 0;
  std::vector<double> sum_k, sum_k2;
  std::vector<double> sum_ij, sum_ij2, sum_cross;

  void init(int order) {
    K = order;
    n = 0;
    std::size_t k = static_cast<std::size_t>(order);
    sum_k.assign(k, 0.0);
    sum_k2.assign(k, 0.0);
    sum_ij.assign(k * k, 0.0);
    sum_ij2.assign(k * k, 0.0);
    sum_cross.assign(k * k, 0.0);
  }

  void add(const HortonStatistics& h) {
    ++n;
    for (int k = 1; k <= K; ++k) {
      double x = static_cast<double>(h.n(k));
      sum_k[static_cast<std::size_t>(k) - 1] += x;
      sum_k2[static_cast<std::size_t>(k) - 1] += x * x;
    }
    for (int i = 1; i < K; ++i)
      for (int j = i + 1; j <= K; ++j) {
        std::size_t p = static_cast<std::size_t>(i - 1) * K +
                        static_cast<std::size_t>(j - 1);
        double a = static_cast<double>(h.n(i, j));
        double b = static_cast<double>(h.n(j));
        sum_ij[p] += a;
        sum_ij2[p] += a * a;
        sum_cross[p] += a * b;
      }
  }

  void merge(const MomentAccumulator& o) {
    n += o.n;
    for (std::size_t i = 0; i < sum_k.size(); ++i) {
      sum_k[i] += o.sum_k[i];
      sum_k2[i] += o.sum_k2[i];
    }
    for (std::size_t i = 0; i < sum_ij.size(); ++i) {
      sum_ij[i] += o.sum_ij[i];
      sum_ij2[i] += o.sum_ij2[i];
      sum_cross[i] += o.sum_cross[i];
    }
  }

  SimulationReport finalize() const {
    SimulationReport r;
    r.K = K;
    r.samples = n;
    std::size_t k = static_cast<std::size_t>(K);
    double dn = static_cast<double>(n);
    r.mean_Nk.assign(k, 0.0);
    r.se_Nk.assign(k, 0.0);
    r.mean_Nij.assign(k * k, 0.0);
    r.se_Nij.assign(k * k, 0.0);
    r.t_hat_ij.assign(k * k, 0.0);
    r.t_hat_se.assign(k * k, 0.0);
    auto variance = [&](double sum, double sum2) {
      if (n < 2) return 0.0;
      double mean = sum / dn;
      double v = (sum2 - dn * mean * mean) / (dn - 1.0);
      return v > 0.0 ? v : 0.0;
    };
    for (std::size_t idx = 0; idx < k; ++idx) {
      r.mean_Nk[idx] = sum_k[idx] / dn;
      r.se_Nk[idx] = std::sqrt(variance(sum_k[idx], sum_k2[idx]) / dn);
    }
    for (int i = 1; i < K; ++i)
      for (int j = i + 1; j <= K; ++j) {
        std::size_t p = static_cast<std::size_t>(i - 1) * K +
                        static_cast<std::size_t>(j - 1);
        std::size_t q = static_cast<std::size_t>(j) - 1;
        double ma = sum_ij[p] / dn;
        double mb = sum_k[q] / dn;  // mean N_j >= 1 always
        r.mean_Nij[p] = ma;
        r.se_Nij[p] = std::sqrt(variance(sum_ij[p], sum_ij2[p]) / dn);
        double ratio = ma / mb;
        r.t_hat_ij[p] = ratio;
        if (n >= 2) {
          double va = variance(sum_ij[p], sum_ij2[p]);
          double vb = variance(sum_k[q], sum_k2[q]);
          double cov = (sum_cross[p] - dn * ma * mb) / (dn - 1.0);
          // Delta method for the ratio of means.
          double vr = (va / (mb * mb) + ratio * ratio * vb / (mb * mb) -
                       2.0 * ratio * cov / (mb * mb)) /
                      dn;
          r.t_hat_se[p] = vr > 0.0 ? std::sqrt(vr) : 0.0;
        }
      }
    return r;
  }
};

inline unsigned thread_cap_from_env() {
  const char* s = std::getenv("HORTONLAB_THREADS");
  if (!s) return std::numeric_limits<unsigned>::max();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || v < 1) return std::numeric_limits<unsigned>::max();
  return static_cast<unsigned>(v);
}

/// Run `work(sample_index, accumulator, ok_flag)` over 0..samples-1 in
/// fixed blocks of 256, optionally across threads, merging partials in
/// block order. The first exception thrown by any block is rethrown (in
/// block order, so error reporting is deterministic too).
template <typename Work>
void run_blocks(std::uint64_t samples, int K, Work&& work,
                MomentAccumulator& total, bool& all_ok) {
  constexpr std::uint64_t kBlock = 256;
  std::uint64_t nblocks = (samples + kBlock - 1) / kBlock;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  unsigned cap = thread_cap_from_env();
  std::uint64_t threads = std::min<std::uint64_t>(std::min<std::uint64_t>(hw, cap), nblocks);

  std::vector<MomentAccumulator> partial(static_cast<std::size_t>(nblocks));
  std::vector<char> ok(static_cast<std::size_t>(nblocks), 1);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nblocks));
  auto run_one = [&](std::uint64_t b) {
    MomentAccumulator& acc = partial[static_cast<std::size_t>(b)];
    acc.init(K);
    bool good = true;
    try {
      std::uint64_t end = std::min(samples, (b + 1) * kBlock);
      for (std::uint64_t i = b * kBlock; i < end; ++i) work(i, acc, good);
    } catch (...) {
      errors[static_cast<std::size_t>(b)] = std::current_exception();
    }
    ok[static_cast<std::size_t>(b)] = good ? 1 : 0;
  };

  if (threads <= 1) {
    for (std::uint64_t b = 0; b < nblocks; ++b) run_one(b);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (std::uint64_t w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::uint64_t b = next.fetch_add(1);
          if (b >= nblocks) return;
          run_one(b);
        }
      });
    for (auto& th : pool) th.join();
  }

  for (std::uint64_t b = 0; b < nblocks; ++b)
    if (errors[static_cast<std::size_t>(b)])
      std::rethrow_exception(errors[static_cast<std::size_t>(b)]);
  total.init(K);
  all_ok = true;
  for (std::uint64_t b = 0; b < nblocks; ++b) {
    total.merge(partial[static_cast<std::size_t>(b)]);
    all_ok = all_ok && ok[static_cast<std::size_t>(b)];
  }
}

}  // namespace detail

/// Sample config.samples independent trees and report the ensemble means,
/// standard errors (sample standard deviation / sqrt(samples)), and ratio
/// estimates T_hat_ij = mean_Nij / mean_Nj with delta-method errors.
inline SimulationReport estimate(const SamplerConfig& config) {
  if (config.K < 1) raise(errc::nonpositive_k, "sampler requires K >= 1");
  if (config.samples < 1) raise(errc::bad_config, "samples must be >= 1");
  detail::MomentAccumulator total;
  bool ok = true;
  detail::run_blocks(
      config.samples, config.K,
      [&](std::uint64_t i, detail::MomentAccumulator& acc, bool&) {
        acc.add(horton_statistics(sample_tree(config, i)));
      },
      total, ok);
  return total.finalize();
}

/// Outcome of the prune-invariance experiment: trees of order K+1 are
/// sampled, pruned once, and their statistics compared against a directly
/// sampled order-K ensemble and against T_{j-i}. Discrepancies are in
/// standard-error units (0 when both sides are exact and equal, infinity
/// when a zero-variance comparison differs).
struct PruneInvarianceReport {
  int K = 0;
  std::uint64_t samples = 0;
  bool shift_identities_exact = true;
  double max_cross_se = 0.0;          // pruned T_hat vs direct T_hat
  double max_direct_theory_se = 0.0;  // direct T_hat vs T_{j-i}
  double max_pruned_theory_se = 0.0;  // pruned T_hat vs T_{j-i}
  SimulationReport direct;
  SimulationReport pruned;
};

inline PruneInvarianceReport prune_invariance_check(const SamplerConfig& config) {
  if (config.K < 3)
    raise(errc::nonpositive_k, "prune_invariance_check requires K >= 3");
  if (config.samples < 1) raise(errc::bad_config, "samples must be >= 1");

  PruneInvarianceReport rep;
  rep.K = config.K;
  rep.samples = config.samples;
  rep.direct = estimate(config);

  SamplerConfig up = config;
  up.K = config.K + 1;
  detail::MomentAccumulator total;
  bool all_exact = true;
  detail::run_blocks(
      config.samples, config.K,
      [&](std::uint64_t i, detail::MomentAccumulator& acc, bool& good) {
        // Offset indices keep the two ensembles on disjoint random streams.
        BinaryTree t = sample_tree(up, config.samples + i);
        HortonStatistics before = horton_statistics(t);
        HortonStatistics after = horton_statistics(prune(t));
        for (int k = 2; k <= before.order && good; ++k)
          good = before.n(k) == after.n(k - 1);
        for (int i2 = 2; i2 < before.order && good; ++i2)
          for (int j2 = i2 + 1; j2 <= before.order && good; ++j2)
            good = before.n(i2, j2) == after.n(i2 - 1, j2 - 1);
        acc.add(after);
      },
      total, all_exact);
  rep.pruned = total.finalize();
  rep.shift_identities_exact = all_exact;

  auto gap = [](double x, double y, double se) {
    if (se > 0.0) return std::abs(x - y) / se;
    return x == y ? 0.0 : std::numeric_limits<double>::infinity();
  };
  for (int i = 1; i < config.K; ++i)
    for (int j = i + 1; j <= config.K; ++j) {
      double rd = rep.direct.t_hat(i, j);
      double rp = rep.pruned.t_hat(i, j);
      double sd = rep.direct.t_se(i, j);
      double sp = rep.pruned.t_se(i, j);
      double tv = config.seq.term(j - i);
      rep.max_cross_se =
          std::max(rep.max_cross_se, gap(rd, rp, std::sqrt(sd * sd + sp * sp)));
      rep.max_direct_theory_se =
          std::max(rep.max_direct_theory_se, gap(rd, tv, sd));
      rep.max_pruned_theory_se =
          std::max(rep.max_pruned_theory_se, gap(rp, tv, sp));
    }
  return rep;
}

}  // namespace hortonlab
