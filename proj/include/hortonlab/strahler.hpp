#pragma once

/**
 * Horton-Strahler orders and branch statistics.
 *
 * Orders: every leaf has order 1; an internal vertex with child orders i, j
 * has order max(i, j) + (i == j). The order of the tree is the order of its
 * root. Equivalently, a vertex's order is the number of prunings needed to
 * eliminate the subtree rooted there; order_via_pruning computes it that way
 * and exists as a cross-check.
 *
 * Branches: maximal connected sets of same-order vertices. A branch of order
 * k is counted at its bottom vertex, the unique member whose parent is
 * absent or has different order. N(k) is the number of order-k branches;
 * N(i, j) with i < j counts junctions where an order-i branch terminates
 * into a vertex of an order-j branch, i.e. internal vertices of order j with
 * children of orders i and j (i < j).
 */

#include <cstdint>
#include <utility>
#include <vector>

#include "hortonlab/error.hpp"
#include "hortonlab/pruning.hpp"
#include "hortonlab/tree.hpp"

namespace hortonlab {

/// Per-vertex Horton-Strahler orders plus the order of the whole tree.
struct OrderAssignment {
  std::vector<int> order;  // indexed by NodeIndex
  int tree_order = 0;
};

/// Compute all vertex orders bottom-up in one pass. Throws EMPTY_TREE on the
/// empty tree (it has no vertices, hence no orders).
inline OrderAssignment assign_orders(const BinaryTree& t) {
  if (t.empty()) raise(errc::empty_tree, "cannot assign orders to the empty tree");
  OrderAssignment a;
  a.order.assign(t.size(), 0);
  for (NodeIndex v : t.postorder()) {
    const Node& nd = t.node(v);
    if (nd.is_leaf()) {
      a.order[v] = 1;
    } else {
      int i = a.order[nd.left];
      int j = a.order[nd.right];
      a.order[v] = (i > j ? i : j) + (i == j ? 1 : 0);
    }
  }
  a.tree_order = a.order[t.root()];
  return a;
}

/// Order of the subtree rooted at v, computed as the number of prunings that
/// reduce that subtree to the empty tree. Slow; used to validate
/// assign_orders against the defining characterization.
inline int order_via_pruning(const BinaryTree& t, NodeIndex v) {
  BinaryTree s = subtree(t, v);
  int count = 0;
  while (!s.empty()) {
    s = prune(s);
    ++count;
  }
  return count;
}

/// Branch counts of a single tree. Side counts are stored as a flat
/// order x order matrix; only entries with i < j can be nonzero.
struct HortonStatistics {
  int order = 0;
  std::vector<std::uint64_t> branch_counts;  // branch_counts[k-1] = N(k)
  std::vector<std::uint64_t> side_counts;    // row-major order x order

  /// N(k): number of branches of order k; zero outside [1, order].
  std::uint64_t n(int k) const {
    if (k < 1 || k > order) return 0;
    return branch_counts[static_cast<std::size_t>(k - 1)];
  }

  /// N(i, j): order-i side branches joining order-j branches; zero unless
  /// 1 <= i < j <= order.
  std::uint64_t n(int i, int j) const {
    if (i < 1 || j <= i || j > order) return 0;
    return side_counts[static_cast<std::size_t>(i - 1) * order +
                       static_cast<std::size_t>(j - 1)];
  }
};

/// Count branches and side branches in one traversal over a precomputed
/// order assignment.
inline HortonStatistics horton_statistics(const BinaryTree& t,
                                          const OrderAssignment& a) {
  HortonStatistics h;
  h.order = a.tree_order;
  const std::size_t k = static_cast<std::size_t>(h.order);
  h.branch_counts.assign(k, 0);
  h.side_counts.assign(k * k, 0);
  const std::size_t n = t.size();
  for (NodeIndex v = 0; v < n; ++v) {
    const Node& nd = t.node(v);
    int ord = a.order[v];
    // Bottom vertex of a branch: no parent, or a parent of different order.
    if (nd.parent == kNoNode || a.order[nd.parent] != ord)
      ++h.branch_counts[static_cast<std::size_t>(ord - 1)];
    if (!nd.is_leaf()) {
      int i = a.order[nd.left];
      int j = a.order[nd.right];
      if (i != j) {
        if (i > j) std::swap(i, j);
        ++h.side_counts[static_cast<std::size_t>(i - 1) * h.order +
                        static_cast<std::size_t>(j - 1)];
      }
    }
  }
  return h;
}

/// Convenience overload computing the order assignment internally.
inline HortonStatistics horton_statistics(const BinaryTree& t) {
  OrderAssignment a = assign_orders(t);
  return horton_statistics(t, a);
}

}  // namespace hortonlab
