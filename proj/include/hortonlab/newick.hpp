#pragma once

/**
 * Tree ingestion and serialization in a strict Newick subset:
 *
 *   document := subtree ";"
 *   subtree  := leaf | "(" subtree "," subtree ")"
 *   leaf     := [A-Za-z0-9_]*        (possibly empty)
 *
 * Whitespace may appear between tokens. Labels sit at leaf positions only
 * and are kept on the nodes but ignored by every statistic. Internal nodes
 * must have exactly two children: arity violations ("(a)", "(a,b,c)")
 * raise NOT_FULL_BINARY, token-level violations raise SYNTAX_ERROR, both
 * with the byte offset. The single vertex serializes as its label plus ";"
 * (so the empty-labeled vertex is just ";").
 */

#include <cctype>
#include <cstddef>
#include <string>
#include <vector>

#include "hortonlab/error.hpp"
#include "hortonlab/tree.hpp"

namespace hortonlab {

/// A tree serialized in the grammar above.
using TreeDocument = std::string;

namespace detail {

inline bool is_label_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '_';
}

[[noreturn]] inline void parse_fail(errc code, const std::string& what,
                                    std::size_t offset) {
  raise(code, what + " at byte " + std::to_string(offset));
}

}  // namespace detail

inline BinaryTree parse_tree(const std::string& text) {
  BinaryTree t;
  // Indices of open internal nodes; child_count() of the top tells whether
  // the next subtree is its left or right child.
  std::vector<NodeIndex> open;
  std::size_t pos = 0;
  const std::size_t n = text.size();
  auto skip_ws = [&] {
    while (pos < n && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto attach = [&](NodeIndex child) {
    if (open.empty()) {
      t.set_root(child);
      return;
    }
    Node& p = t.mutable_node(open.back());
    if (p.left == kNoNode)
      p.left = child;
    else
      p.right = child;
    t.mutable_node(child).parent = open.back();
  };

  bool expect_subtree = true;
  for (;;) {
    skip_ws();
    if (expect_subtree) {
      if (pos < n && text[pos] == '(') {
        Node internal;
        NodeIndex v = t.append_node(internal);
        attach(v);
        open.push_back(v);
        ++pos;
        continue;
      }
      // Leaf: a possibly empty label.
      std::size_t start = pos;
      while (pos < n && detail::is_label_char(text[pos])) ++pos;
      Node leaf;
      leaf.label = text.substr(start, pos - start);
      attach(t.append_node(std::move(leaf)));
      expect_subtree = false;
      continue;
    }
    // A subtree just ended.
    if (open.empty()) {
      if (pos >= n)
        detail::parse_fail(errc::syntax_error, "expected ';'", pos);
      if (text[pos] != ';')
        detail::parse_fail(errc::syntax_error,
                           std::string("expected ';', got '") + text[pos] + "'",
                           pos);
      ++pos;
      skip_ws();
      if (pos != n)
        detail::parse_fail(errc::syntax_error, "trailing content after ';'",
                           pos);
      return t;
    }
    if (pos >= n)
      detail::parse_fail(errc::syntax_error, "unterminated '('", pos);
    char c = text[pos];
    if (c == ',') {
      if (t.node(open.back()).child_count() == 2)
        detail::parse_fail(errc::not_full_binary,
                           "more than two children", pos);
      ++pos;
      expect_subtree = true;
      continue;
    }
    if (c == ')') {
      if (t.node(open.back()).child_count() != 2)
        detail::parse_fail(errc::not_full_binary,
                           "internal node with a single child", pos);
      open.pop_back();
      ++pos;
      continue;  // the closed node is itself a finished subtree
    }
    detail::parse_fail(errc::syntax_error,
                       std::string("unexpected '") + c + "'", pos);
  }
}

inline std::string serialize_tree(const BinaryTree& t) {
  if (t.empty()) raise(errc::empty_tree, "cannot serialize the empty tree");
  std::string out;
  // Explicit stack of (node, phase): 0 emit node or '(', 1 emit ',' and the
  // right child, 2 emit ')'.
  std::vector<std::pair<NodeIndex, int>> stack{{t.root(), 0}};
  while (!stack.empty()) {
    auto& [v, phase] = stack.back();
    const Node& nd = t.node(v);
    if (phase == 0) {
      if (nd.is_leaf()) {
        out += nd.label;
        stack.pop_back();
        continue;
      }
      out += '(';
      phase = 1;
      stack.emplace_back(nd.left, 0);
      continue;
    }
    if (phase == 1) {
      out += ',';
      phase = 2;
      stack.emplace_back(nd.right, 0);
      continue;
    }
    out += ')';
    stack.pop_back();
  }
  out += ';';
  return out;
}

}  // namespace hortonlab
