#pragma once

/**
 * Tree pruning: cut every leaf and its parental edge, then contract the
 * resulting single-child chains (series reduction). Both operations are
 * total and produce fresh compacted trees; the input is never mutated.
 */

#include <utility>
#include <vector>

#include "hortonlab/tree.hpp"

namespace hortonlab {

/// Delete every node with exactly one child, reconnecting its parent to its
/// child; a single-child root is deleted and the chain end becomes the root.
/// Accepts relaxed trees (0, 1, or 2 children per node) as produced by the
/// leaf-cut stage. Idempotent; a full binary tree passes through unchanged.
inline BinaryTree series_reduce(const BinaryTree& t) {
  if (t.empty()) return {};
  const std::size_t n = t.size();
  // rep[v]: the node v collapses to once all single-child chains below it
  // are contracted. Chains are followed iteratively; no recursion.
  std::vector<NodeIndex> rep(n, kNoNode);
  for (NodeIndex start = 0; start < n; ++start) {
    if (rep[start] != kNoNode) continue;
    std::vector<NodeIndex> path;
    NodeIndex v = start;
    while (rep[v] == kNoNode && t.node(v).child_count() == 1) {
      path.push_back(v);
      const Node& nd = t.node(v);
      v = nd.left != kNoNode ? nd.left : nd.right;
    }
    NodeIndex target = rep[v] != kNoNode ? rep[v] : v;
    rep[start] = target;
    for (NodeIndex u : path) rep[u] = target;
  }

  BinaryTree out;
  std::vector<std::pair<NodeIndex, NodeIndex>> queue{{rep[t.root()], kNoNode}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [old_v, new_parent] = queue[head];
    const Node& src = t.node(old_v);
    Node n_new;
    n_new.parent = new_parent;
    n_new.label = src.label;
    NodeIndex new_v = out.append_node(std::move(n_new));
    if (new_parent == kNoNode) {
      out.set_root(new_v);
    } else {
      Node& p = out.mutable_node(new_parent);
      if (p.left == kNoNode)
        p.left = new_v;
      else
        p.right = new_v;
    }
    if (src.child_count() == 2) {
      queue.emplace_back(rep[src.left], new_v);
      queue.emplace_back(rep[src.right], new_v);
    }
  }
  return out;
}

/// One application of the pruning operator: remove all leaves and their
/// parental edges, then series-reduce. prune(empty) = empty; the
/// single-vertex tree prunes to the empty tree.
inline BinaryTree prune(const BinaryTree& t) {
  if (t.empty()) return {};
  if (t.is_leaf(t.root())) return {};

  // Leaf cut: copy the arena without leaf nodes. Nodes that lose one child
  // keep the survivor in the left slot; series_reduce removes them.
  BinaryTree stripped;
  std::vector<std::pair<NodeIndex, NodeIndex>> queue{{t.root(), kNoNode}};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [old_v, new_parent] = queue[head];
    const Node& src = t.node(old_v);
    Node n_new;
    n_new.parent = new_parent;
    n_new.label = src.label;
    NodeIndex new_v = stripped.append_node(std::move(n_new));
    if (new_parent == kNoNode) {
      stripped.set_root(new_v);
    } else {
      Node& p = stripped.mutable_node(new_parent);
      if (p.left == kNoNode)
        p.left = new_v;
      else
        p.right = new_v;
    }
    if (src.left != kNoNode && !t.node(src.left).is_leaf())
      queue.emplace_back(src.left, new_v);
    if (src.right != kNoNode && !t.node(src.right).is_leaf())
      queue.emplace_back(src.right, new_v);
  }
  return series_reduce(stripped);
}

}  // namespace hortonlab
