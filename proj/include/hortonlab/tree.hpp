#pragma once

/**
 * Finite rooted binary trees stored in an index-based arena.
 *
 * The canonical object is the full binary tree: every node has zero or two
 * children. The empty tree (no nodes at all) is a valid value. Intermediate
 * states with single-child nodes arise while pruning (after the leaf cut,
 * before series reduction) and are representable; series_reduce removes
 * them. Child order carries no meaning for any statistic, but it is kept
 * stable so serialization round-trips reproduce the input exactly.
 */

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hortonlab/error.hpp"

namespace hortonlab {

using NodeIndex = std::uint32_t;
inline constexpr NodeIndex kNoNode = std::numeric_limits<NodeIndex>::max();

struct Node {
  NodeIndex parent = kNoNode;
  NodeIndex left = kNoNode;
  NodeIndex right = kNoNode;
  std::string label;  // ingestion only; every statistic ignores it

  bool is_leaf() const noexcept { return left == kNoNode && right == kNoNode; }

  int child_count() const noexcept {
    return (left != kNoNode ? 1 : 0) + (right != kNoNode ? 1 : 0);
  }
};

class BinaryTree {
 public:
  /// Default-constructed tree is the empty tree.
  BinaryTree() = default;

  static BinaryTree single(std::string label = {}) {
    BinaryTree t;
    t.nodes_.emplace_back();
    t.nodes_.back().label = std::move(label);
    t.root_ = 0;
    return t;
  }

  bool empty() const noexcept { return root_ == kNoNode; }
  std::size_t size() const noexcept { return nodes_.size(); }
  NodeIndex root() const noexcept { return root_; }

  bool contains(NodeIndex v) const noexcept { return v < nodes_.size(); }

  const Node& node(NodeIndex v) const {
    if (!contains(v)) raise(errc::node_not_found, "node index " + std::to_string(v));
    return nodes_[v];
  }

  bool is_leaf(NodeIndex v) const { return node(v).is_leaf(); }

  std::vector<NodeIndex> leaves() const {
    std::vector<NodeIndex> out;
    for (NodeIndex v = 0; v < nodes_.size(); ++v)
      if (nodes_[v].is_leaf()) out.push_back(v);
    return out;
  }

  // --- construction (parser, sampler, tests). A finished tree is treated as
  // --- immutable: all analysis functions take `const BinaryTree&`.

  NodeIndex add_root(std::string label = {}) {
    if (!empty()) raise(errc::bad_config, "add_root on nonempty tree");
    nodes_.emplace_back();
    nodes_.back().label = std::move(label);
    root_ = 0;
    return root_;
  }

  /// Attach two fresh leaves under `v`, which must currently be a leaf.
  std::pair<NodeIndex, NodeIndex> attach_children(NodeIndex v) {
    if (!is_leaf(v)) raise(errc::bad_config, "attach_children target is not a leaf");
    NodeIndex l = make_node(v);
    NodeIndex r = make_node(v);
    nodes_[v].left = l;
    nodes_[v].right = r;
    return {l, r};
  }

  /// Split the parental edge of `v`: a new internal node takes v's place as
  /// child of v's parent (or becomes the root when v is the root), with
  /// children (v, fresh leaf). Returns (internal, leaf).
  std::pair<NodeIndex, NodeIndex> insert_side_leaf(NodeIndex v) {
    if (!contains(v)) raise(errc::node_not_found, "node index " + std::to_string(v));
    NodeIndex p = nodes_[v].parent;
    NodeIndex mid = make_node(p);
    NodeIndex leaf = make_node(mid);
    nodes_[mid].left = v;
    nodes_[mid].right = leaf;
    nodes_[v].parent = mid;
    if (p == kNoNode) {
      root_ = mid;
    } else {
      if (nodes_[p].left == v)
        nodes_[p].left = mid;
      else
        nodes_[p].right = mid;
    }
    return {mid, leaf};
  }

  /// Used by the parser and by tree rebuilders: append a detached node.
  NodeIndex append_node(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeIndex>(nodes_.size() - 1);
  }

  void set_root(NodeIndex v) { root_ = v; }

  Node& mutable_node(NodeIndex v) {
    if (!contains(v)) raise(errc::node_not_found, "node index " + std::to_string(v));
    return nodes_[v];
  }

  // --- whole-tree helpers ---

  /// Nodes in postorder (children before parent). Iterative; safe for very
  /// deep chains. Works on relaxed trees with single-child nodes.
  std::vector<NodeIndex> postorder() const {
    std::vector<NodeIndex> out;
    if (empty()) return out;
    out.reserve(nodes_.size());
    std::vector<NodeIndex> stack{root_};
    while (!stack.empty()) {
      NodeIndex v = stack.back();
      stack.pop_back();
      out.push_back(v);
      if (nodes_[v].left != kNoNode) stack.push_back(nodes_[v].left);
      if (nodes_[v].right != kNoNode) stack.push_back(nodes_[v].right);
    }
    std::vector<NodeIndex> rev(out.rbegin(), out.rend());
    return rev;
  }

  bool structurally_equal(const BinaryTree& other, bool compare_labels = true) const {
    if (empty() || other.empty()) return empty() == other.empty();
    if (size() != other.size()) return false;
    std::vector<std::pair<NodeIndex, NodeIndex>> stack{{root_, other.root_}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      if (a == kNoNode || b == kNoNode) {
        if (a != b) return false;
        continue;
      }
      const Node& na = nodes_[a];
      const Node& nb = other.nodes_[b];
      if (compare_labels && na.label != nb.label) return false;
      stack.emplace_back(na.left, nb.left);
      stack.emplace_back(na.right, nb.right);
    }
    return true;
  }

  bool is_full_binary() const {
    for (const Node& n : nodes_)
      if (n.child_count() == 1) return false;
    return true;
  }

 private:
  NodeIndex make_node(NodeIndex parent) {
    nodes_.emplace_back();
    nodes_.back().parent = parent;
    return static_cast<NodeIndex>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  NodeIndex root_ = kNoNode;
};

/// Fresh compacted copy of the subtree rooted at `v` (indices renumbered in
/// BFS order from the new root).
inline BinaryTree subtree(const BinaryTree& t, NodeIndex v) {
  if (t.empty()) raise(errc::empty_tree, "subtree of the empty tree");
  if (!t.contains(v)) raise(errc::node_not_found, "node index " + std::to_string(v));
  BinaryTree out;
  std::vector<std::pair<NodeIndex, NodeIndex>> queue;  // (old index, new parent)
  queue.emplace_back(v, kNoNode);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [old_v, new_parent] = queue[head];
    const Node& src = t.node(old_v);
    Node n;
    n.parent = new_parent;
    n.label = src.label;
    NodeIndex new_v = out.append_node(std::move(n));
    if (new_parent == kNoNode) {
      out.set_root(new_v);
    } else {
      Node& p = out.mutable_node(new_parent);
      if (p.left == kNoNode)
        p.left = new_v;
      else
        p.right = new_v;
    }
    if (src.left != kNoNode) queue.emplace_back(src.left, new_v);
    if (src.right != kNoNode) queue.emplace_back(src.right, new_v);
  }
  return out;
}

/// Join two nonempty trees under a fresh root. Convenience for tests and
/// tree enumeration.
inline BinaryTree join(const BinaryTree& left, const BinaryTree& right,
                       std::string root_label = {}) {
  if (left.empty() || right.empty()) raise(errc::empty_tree, "join with the empty tree");
  BinaryTree out;
  Node root;
  root.label = std::move(root_label);
  NodeIndex r = out.append_node(std::move(root));
  out.set_root(r);
  auto graft = [&](const BinaryTree& src, bool as_left) {
    std::vector<std::pair<NodeIndex, NodeIndex>> queue{{src.root(), r}};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      auto [old_v, new_parent] = queue[head];
      const Node& s = src.node(old_v);
      Node n;
      n.parent = new_parent;
      n.label = s.label;
      NodeIndex new_v = out.append_node(std::move(n));
      Node& p = out.mutable_node(new_parent);
      if (new_parent == r) {
        (as_left ? p.left : p.right) = new_v;
      } else if (p.left == kNoNode) {
        p.left = new_v;
      } else {
        p.right = new_v;
      }
      if (s.left != kNoNode) queue.emplace_back(s.left, new_v);
      if (s.right != kNoNode) queue.emplace_back(s.right, new_v);
    }
  };
  graft(left, true);
  graft(right, false);
  return out;
}

}  // namespace hortonlab
