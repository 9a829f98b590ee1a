#pragma once

// Shared test helpers: exhaustive enumeration of small full binary trees,
// random labeled trees, typed-error capture, and an independent complex
// polynomial root finder used as an oracle for the bisection solver.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hortonlab/hortonlab.hpp"

namespace testsupport {

using hortonlab::BinaryTree;
using hortonlab::errc;
using hortonlab::Error;
using hortonlab::NodeIndex;

/// All full binary tree shapes with exactly `leaves` leaves
/// (Catalan(leaves-1) of them), built by joining smaller shapes.
inline const std::vector<BinaryTree>& shapes_with_leaves(int leaves) {
  static std::vector<std::vector<BinaryTree>> memo(1);  // memo[0] unused
  for (int m = static_cast<int>(memo.size()); m <= leaves; ++m) {
    std::vector<BinaryTree> list;
    if (m == 1) {
      list.push_back(BinaryTree::single());
    } else {
      for (int l = 1; l < m; ++l)
        for (const BinaryTree& a : memo[static_cast<std::size_t>(l)])
          for (const BinaryTree& b : memo[static_cast<std::size_t>(m - l)])
            list.push_back(hortonlab::join(a, b));
    }
    memo.push_back(std::move(list));
  }
  return memo[static_cast<std::size_t>(leaves)];
}

inline std::string random_label(std::mt19937_64& g) {
  static const char chars[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  std::string s;
  std::uint64_t len = g() % 4;  // 0..3, empty labels included
  for (std::uint64_t i = 0; i < len; ++i)
    s += chars[g() % (sizeof chars - 1)];
  return s;
}

/// Random labeled full binary tree with 1..max_leaves leaves, grown by
/// splitting uniformly chosen leaves.
inline BinaryTree random_tree(std::mt19937_64& g, int max_leaves) {
  std::uint64_t target = 1 + g() % static_cast<std::uint64_t>(max_leaves);
  BinaryTree t = BinaryTree::single(random_label(g));
  std::vector<NodeIndex> open{t.root()};
  while (open.size() < target) {
    std::size_t pick = static_cast<std::size_t>(g() % open.size());
    auto [l, r] = t.attach_children(open[pick]);
    t.mutable_node(open[pick]).label.clear();  // internal nodes carry no labels
    t.mutable_node(l).label = random_label(g);
    t.mutable_node(r).label = random_label(g);
    open[pick] = l;
    open.push_back(r);
  }
  return t;
}

/// Run f, which must throw Error; returns the code it threw.
template <typename F>
errc thrown_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a typed Error, none was thrown");
}

/// All complex roots of a real polynomial (coefficients highest power
/// first) by the Durand-Kerner iteration. Independent of the library's
/// bisection; used to cross-check real roots.
inline std::vector<std::complex<double>> polynomial_roots(
    std::vector<double> coeff) {
  if (coeff.size() < 2 || coeff.front() == 0.0)
    throw std::runtime_error("polynomial_roots wants degree >= 1");
  std::vector<std::complex<double>> c(coeff.begin(), coeff.end());
  for (auto& v : c) v /= coeff.front();
  std::size_t n = c.size() - 1;
  std::vector<std::complex<double>> roots(n);
  std::complex<double> seed(0.4, 0.9);
  roots[0] = seed;
  for (std::size_t i = 1; i < n; ++i) roots[i] = roots[i - 1] * seed;
  auto eval = [&](std::complex<double> z) {
    std::complex<double> acc = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) acc = acc * z + c[i];
    return acc;
  };
  for (int iter = 0; iter < 400; ++iter) {
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> denom = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      std::complex<double> delta = eval(roots[i]) / denom;
      roots[i] -= delta;
      moved = std::max(moved, std::abs(delta));
    }
    if (moved < 1e-15) break;
  }
  return roots;
}

/// Smallest positive real root reported by polynomial_roots.
inline double smallest_positive_real_root(const std::vector<double>& coeff,
                                          double imag_tol = 1e-9) {
  double best = std::numeric_limits<double>::infinity();
  for (auto z : polynomial_roots(coeff))
    if (std::abs(z.imag()) < imag_tol && z.real() > 0.0)
      best = std::min(best, z.real());
  if (!std::isfinite(best))
    throw std::runtime_error("no positive real root found");
  return best;
}

}  // namespace testsupport
