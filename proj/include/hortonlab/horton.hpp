#pragma once

/**
 * Expected branch counts ("Horton numbers") of a random self-similar tree
 * of order K, computed from a Tokunaga sequence by three independent
 * routes, plus a numerical check of their asymptotic geometric decay.
 *
 * zeta(K) = (zeta_K(1), ..., zeta_K(K)) where zeta_K(k) is the expected
 * number of order-k branches; zeta_K(K) = 1. The backward recursion
 *
 *   zeta_K(k) = 2 zeta_K(k+1) + sum_{j=1}^{K-k} T_j zeta_K(k+j)
 *
 * expresses that each order-(k+1)-or-higher branch begins with a merge of
 * two order-k branches and carries side branches of lower orders.
 *
 * The same first entry comes from a power-series reciprocal: with
 * t_1 = T_1 + 2 and t_j = T_j for j >= 2, the series 1/(1 - sum t_j z^j)
 * = sum g_m z^m (equivalently -1/t_hat(z)) has g_{K-1} = zeta_K(1).
 *
 * The geometric family additionally has a two-pole partial-fraction closed
 * form (zeta1_geometric_closed_form).
 *
 * The normalized table xi_K(j) = zeta_K(j)/zeta_K(1) converges to R^(1-j)
 * with R from horton_exponent whenever T_k grows at most exponentially;
 * verify_strong_horton measures the convergence and flags divergence.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hortonlab/error.hpp"
#include "hortonlab/tokunaga.hpp"

namespace hortonlab {

struct ZetaTable {
  int K = 0;
  std::vector<double> zeta;  // zeta[k-1] = expected count of order-k branches
  std::vector<double> xi;    // zeta[k-1] / zeta[0]
};

namespace detail {

inline void require_order(int K, const char* what) {
  if (K < 1)
    raise(errc::nonpositive_k, std::string(what) + " requires K >= 1, got " +
                                   std::to_string(K));
}

/// T_j rounded to integers for the exact-arithmetic mode; rejects
/// non-integral or unrepresentably large terms.
inline std::vector<std::int64_t> integer_terms(const TokunagaSequence& seq,
                                               int count) {
  std::vector<std::int64_t> t(static_cast<std::size_t>(count) + 1, 0);
  for (int j = 1; j <= count; ++j) {
    double v = seq.term(j);
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15)
      raise(errc::noninteger_mean,
            "exact mode requires integer T_k; T_" + std::to_string(j) + " = " +
                real17(v));
    t[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(v);
  }
  return t;
}

inline std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r))
    raise(errc::overflow, "integer overflow in exact branch-count recursion");
  return r;
}

inline std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r))
    raise(errc::overflow, "integer overflow in exact branch-count recursion");
  return r;
}

}  // namespace detail

/// Fill the zeta table top-down from zeta_K(K) = 1 by the backward
/// recursion. O(K^2).
inline ZetaTable zeta_by_recursion(const TokunagaSequence& seq, int K) {
  detail::require_order(K, "zeta_by_recursion");
  std::vector<double> T(static_cast<std::size_t>(K) + 1, 0.0);
  for (int j = 1; j < K; ++j) T[static_cast<std::size_t>(j)] = seq.term(j);

  ZetaTable out;
  out.K = K;
  out.zeta.assign(static_cast<std::size_t>(K), 0.0);
  out.zeta[static_cast<std::size_t>(K) - 1] = 1.0;
  for (int k = K - 1; k >= 1; --k) {
    double acc = 2.0 * out.zeta[static_cast<std::size_t>(k)];
    for (int j = 1; j <= K - k; ++j)
      acc += T[static_cast<std::size_t>(j)] *
             out.zeta[static_cast<std::size_t>(k + j) - 1];
    if (!std::isfinite(acc))
      raise(errc::overflow, "branch-count recursion overflowed double range");
    out.zeta[static_cast<std::size_t>(k) - 1] = acc;
  }
  out.xi.assign(static_cast<std::size_t>(K), 0.0);
  for (int k = 0; k < K; ++k)
    out.xi[static_cast<std::size_t>(k)] =
        out.zeta[static_cast<std::size_t>(k)] / out.zeta[0];
  return out;
}

/// Same recursion in checked 64-bit integer arithmetic. Requires every
/// T_j (j < K) to be a non-negative integer.
inline std::vector<std::int64_t> zeta_by_recursion_exact(
    const TokunagaSequence& seq, int K) {
  detail::require_order(K, "zeta_by_recursion_exact");
  auto T = detail::integer_terms(seq, K - 1);
  std::vector<std::int64_t> zeta(static_cast<std::size_t>(K), 0);
  zeta[static_cast<std::size_t>(K) - 1] = 1;
  for (int k = K - 1; k >= 1; --k) {
    std::int64_t acc =
        detail::checked_mul(2, zeta[static_cast<std::size_t>(k)]);
    for (int j = 1; j <= K - k; ++j)
      acc = detail::checked_add(
          acc, detail::checked_mul(T[static_cast<std::size_t>(j)],
                                   zeta[static_cast<std::size_t>(k + j) - 1]));
    zeta[static_cast<std::size_t>(k) - 1] = acc;
  }
  return zeta;
}

/// First-column values zeta_K(1) for every K = 1..Kmax at once, by the
/// power-series reciprocal. Returned vector has size Kmax+1 with slot 0
/// unused, so out[K] = zeta_K(1).
inline std::vector<double> zeta1_by_series(const TokunagaSequence& seq,
                                           int Kmax) {
  detail::require_order(Kmax, "zeta1_by_series");
  std::vector<double> t(static_cast<std::size_t>(Kmax), 0.0);
  if (Kmax >= 2) {
    t[1] = seq.term(1) + 2.0;
    for (int j = 2; j < Kmax; ++j)
      t[static_cast<std::size_t>(j)] = seq.term(j);
  }
  std::vector<double> g(static_cast<std::size_t>(Kmax), 0.0);
  g[0] = 1.0;
  for (int m = 1; m < Kmax; ++m) {
    double acc = 0.0;
    for (int i = 1; i <= m; ++i)
      acc += t[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(m - i)];
    if (!std::isfinite(acc))
      raise(errc::overflow, "series coefficients overflowed double range");
    g[static_cast<std::size_t>(m)] = acc;
  }
  std::vector<double> out(static_cast<std::size_t>(Kmax) + 1, 0.0);
  for (int K = 1; K <= Kmax; ++K)
    out[static_cast<std::size_t>(K)] = g[static_cast<std::size_t>(K) - 1];
  return out;
}

/// Exact-integer twin of zeta1_by_series.
inline std::vector<std::int64_t> zeta1_by_series_exact(
    const TokunagaSequence& seq, int Kmax) {
  detail::require_order(Kmax, "zeta1_by_series_exact");
  auto T = detail::integer_terms(seq, Kmax > 1 ? Kmax - 1 : 0);
  std::vector<std::int64_t> t(static_cast<std::size_t>(Kmax), 0);
  if (Kmax >= 2) {
    t[1] = detail::checked_add(T[1], 2);
    for (int j = 2; j < Kmax; ++j)
      t[static_cast<std::size_t>(j)] = T[static_cast<std::size_t>(j)];
  }
  std::vector<std::int64_t> g(static_cast<std::size_t>(Kmax), 0);
  g[0] = 1;
  for (int m = 1; m < Kmax; ++m) {
    std::int64_t acc = 0;
    for (int i = 1; i <= m; ++i)
      acc = detail::checked_add(
          acc, detail::checked_mul(t[static_cast<std::size_t>(i)],
                                   g[static_cast<std::size_t>(m - i)]));
    g[static_cast<std::size_t>(m)] = acc;
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(Kmax) + 1, 0);
  for (int K = 1; K <= Kmax; ++K)
    out[static_cast<std::size_t>(K)] = g[static_cast<std::size_t>(K) - 1];
  return out;
}

/// Partial-fraction closed form for the geometric family: returns
/// zeta_{K+1}(1) for K >= 0,
///   (1/(2c(p1-p2))) * ((1-c p2)/p2^{K+1} - (1-c p1)/p1^{K+1}),
/// with p1 > p2 the roots from geometric_roots.
inline double zeta1_geometric_closed_form(double a, double c, int K) {
  if (K < 0)
    raise(errc::nonpositive_k,
          "zeta1_geometric_closed_form requires K >= 0, got " +
              std::to_string(K));
  auto [p1, p2] = geometric_roots(a, c);
  double pref = 1.0 / (2.0 * c * (p1 - p2));
  double v = pref * ((1.0 - c * p2) / std::pow(p2, K + 1) -
                     (1.0 - c * p1) / std::pow(p1, K + 1));
  if (!std::isfinite(v))
    raise(errc::overflow, "closed form overflowed double range");
  return v;
}

/// Verify the order shift zeta_{K+1}(j+1) = zeta_K(j) for all
/// 1 <= j <= K < Kmax, within relative tolerance. Pruning drops every
/// branch order by one, so the expected counts must line up this way.
inline bool check_shift_property(const TokunagaSequence& seq, int Kmax,
                                 double rel_tol = 1e-12) {
  if (Kmax < 2)
    raise(errc::nonpositive_k, "check_shift_property requires Kmax >= 2");
  ZetaTable prev = zeta_by_recursion(seq, 1);
  for (int K = 1; K < Kmax; ++K) {
    ZetaTable next = zeta_by_recursion(seq, K + 1);
    for (int j = 1; j <= K; ++j) {
      double lhs = next.zeta[static_cast<std::size_t>(j)];
      double rhs = prev.zeta[static_cast<std::size_t>(j) - 1];
      if (std::abs(lhs - rhs) > rel_tol * std::max(std::abs(lhs), std::abs(rhs)))
        return false;
    }
    prev = std::move(next);
  }
  return true;
}

/// Convergence evidence for the geometric decay of normalized branch
/// counts. ratio_sequence[K-1] = zeta_{K+1}(1)/zeta_K(1) for K = 1..Kmax;
/// per_j_errors[j-1] = |xi_Kmax(j) - R^(1-j)| for j = 1..jmax. diverged is
/// a tail-fluctuation heuristic: no convergence detected up to Kmax, not a
/// proof of divergence.
struct ConvergenceReport {
  int Kmax = 0;
  int jmax = 0;
  double R_estimate = 0.0;
  std::vector<double> per_j_errors;
  std::vector<double> ratio_sequence;
  double tail_fluctuation = 0.0;
  bool diverged = false;
};

inline ConvergenceReport verify_strong_horton(const TokunagaSequence& seq,
                                              int Kmax, int jmax) {
  if (jmax < 2 || Kmax < jmax)
    raise(errc::nonpositive_k,
          "verify_strong_horton requires Kmax >= jmax >= 2");
  ConvergenceReport rep;
  rep.Kmax = Kmax;
  rep.jmax = jmax;
  rep.R_estimate = horton_exponent(seq).R;

  ZetaTable table = zeta_by_recursion(seq, Kmax);
  rep.per_j_errors.assign(static_cast<std::size_t>(jmax), 0.0);
  for (int j = 1; j <= jmax; ++j)
    rep.per_j_errors[static_cast<std::size_t>(j) - 1] =
        std::abs(table.xi[static_cast<std::size_t>(j) - 1] -
                 std::pow(rep.R_estimate, static_cast<double>(1 - j)));

  std::vector<double> first = zeta1_by_series(seq, Kmax + 1);
  rep.ratio_sequence.assign(static_cast<std::size_t>(Kmax), 0.0);
  for (int K = 1; K <= Kmax; ++K)
    rep.ratio_sequence[static_cast<std::size_t>(K) - 1] =
        first[static_cast<std::size_t>(K) + 1] /
        first[static_cast<std::size_t>(K)];

  std::size_t tail = std::min<std::size_t>(5, rep.ratio_sequence.size());
  auto last = rep.ratio_sequence.end();
  double hi = *std::max_element(last - static_cast<std::ptrdiff_t>(tail), last);
  double lo = *std::min_element(last - static_cast<std::ptrdiff_t>(tail), last);
  rep.tail_fluctuation = (hi - lo) / lo;
  rep.diverged = rep.tail_fluctuation > 1e-3;
  return rep;
}

}  // namespace hortonlab
