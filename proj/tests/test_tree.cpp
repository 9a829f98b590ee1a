#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "hortonlab/hortonlab.hpp"
#include "support.hpp"

using namespace hortonlab;
using testsupport::shapes_with_leaves;
using testsupport::thrown_code;

namespace {

// Ten-leaf reference tree: orders 3/3/3 on the spine, three order-2
// branches, side branches {1,2}x3, {1,3}x1, {2,3}x1.
const char* kTenLeaf = "(((((a,b),c),((d,e),f)),((g,h),j)),i);";

HortonStatistics stats_of(const BinaryTree& t) { return horton_statistics(t); }

}  // namespace

TEST_CASE("single-vertex and empty trees") {
  BinaryTree t;
  CHECK(t.empty());
  CHECK(t.size() == 0);
  CHECK(t.root() == kNoNode);

  BinaryTree s = BinaryTree::single("tip");
  CHECK(s.size() == 1);
  CHECK(s.is_leaf(s.root()));
  CHECK(s.node(s.root()).label == "tip");
  CHECK(s.is_full_binary());
  CHECK(s.leaves() == std::vector<NodeIndex>{s.root()});
}

TEST_CASE("attach_children grows full binary trees") {
  BinaryTree t = BinaryTree::single();
  auto [l, r] = t.attach_children(t.root());
  CHECK(t.size() == 3);
  CHECK(t.node(l).parent == t.root());
  CHECK(t.node(r).parent == t.root());
  CHECK(t.node(t.root()).child_count() == 2);
  CHECK(t.is_full_binary());

  // Only leaves accept children.
  CHECK(thrown_code([&] { t.attach_children(t.root()); }) == errc::bad_config);
}

TEST_CASE("insert_side_leaf splits a parental edge") {
  BinaryTree t = BinaryTree::single();
  auto [l, r] = t.attach_children(t.root());
  NodeIndex old_root = t.root();

  // Splitting an ordinary edge: mid takes v's place under v's parent.
  auto [mid, leaf] = t.insert_side_leaf(l);
  CHECK(t.size() == 5);
  CHECK(t.node(mid).parent == old_root);
  CHECK(t.node(l).parent == mid);
  CHECK(t.node(leaf).parent == mid);
  CHECK(t.is_leaf(leaf));
  CHECK(t.is_full_binary());
  (void)r;

  // Splitting the root's (imaginary) parental edge: mid becomes the root.
  auto [mid2, leaf2] = t.insert_side_leaf(t.root());
  CHECK(t.root() == mid2);
  CHECK(t.node(old_root).parent == mid2);
  CHECK(t.is_leaf(leaf2));
  CHECK(t.is_full_binary());
  CHECK(t.size() == 7);
}

TEST_CASE("subtree extracts a compact copy") {
  BinaryTree t = parse_tree("((a,b),c);");
  NodeIndex ab = t.node(t.root()).left;
  BinaryTree sub = subtree(t, ab);
  CHECK(sub.size() == 3);
  CHECK(sub.structurally_equal(parse_tree("(a,b);")));
  CHECK(serialize_tree(sub) == "(a,b);");

  BinaryTree whole = subtree(t, t.root());
  CHECK(whole.structurally_equal(t));
}

TEST_CASE("join composes two trees under a fresh root") {
  BinaryTree c = join(BinaryTree::single("a"), BinaryTree::single("b"));
  CHECK(serialize_tree(c) == "(a,b);");
  BinaryTree d = join(c, BinaryTree::single("x"), "top");
  CHECK(d.node(d.root()).label == "top");
  CHECK(serialize_tree(d) == "((a,b),x);");
}

namespace {

// Append a node with the given label below `parent` (as its left or right
// child in declaration order); relaxed trees for series_reduce tests.
NodeIndex append_child(BinaryTree& t, std::string label, NodeIndex parent) {
  Node n;
  n.label = std::move(label);
  n.parent = parent;
  NodeIndex v = t.append_node(std::move(n));
  Node& p = t.mutable_node(parent);
  (p.left == kNoNode ? p.left : p.right) = v;
  return v;
}

}  // namespace

TEST_CASE("series reduction collapses chain vertices") {
  // Hand-build root -> mid -> leaf, a pure chain.
  BinaryTree t;
  NodeIndex root = t.add_root("r");
  NodeIndex mid = append_child(t, "m", root);
  append_child(t, "x", mid);

  BinaryTree r = series_reduce(t);
  CHECK(r.size() == 1);
  CHECK(r.node(r.root()).label == "x");
}

TEST_CASE("series reduction keeps full binary trees intact") {
  for (int n = 1; n <= 6; ++n)
    for (const BinaryTree& t : shapes_with_leaves(n)) {
      BinaryTree r = series_reduce(t);
      CHECK(r.structurally_equal(t));
    }
}

TEST_CASE("series reduction handles chains above junctions") {
  // root -> chain -> (a,b): the chain nodes vanish, the cherry stays.
  BinaryTree t;
  NodeIndex root = t.add_root();
  NodeIndex c1 = append_child(t, "", root);
  NodeIndex c2 = append_child(t, "", c1);
  append_child(t, "a", c2);
  append_child(t, "b", c2);

  BinaryTree r = series_reduce(t);
  CHECK(r.size() == 3);
  CHECK(serialize_tree(r) == "(a,b);");
  // Idempotent.
  CHECK(series_reduce(r).structurally_equal(r));
}

TEST_CASE("pruning small examples") {
  CHECK(prune(BinaryTree::single()).empty());
  CHECK(prune(BinaryTree()).empty());

  BinaryTree cherry = parse_tree("(a,b);");
  BinaryTree p = prune(cherry);
  CHECK(p.size() == 1);

  // Comb of 4 leaves has order 2: one pruning leaves a single vertex.
  BinaryTree comb = parse_tree("(a,(b,(c,d)));");
  CHECK(prune(comb).size() == 1);
  CHECK(prune(prune(comb)).empty());

  // Perfect 4-leaf tree: pruning yields the cherry.
  BinaryTree perfect = parse_tree("((,),(,));");
  BinaryTree pp = prune(perfect);
  CHECK(pp.size() == 3);
  CHECK(pp.structurally_equal(parse_tree("(,);"), false));
}

TEST_CASE("ten-leaf reference tree statistics and prune chain") {
  BinaryTree t = parse_tree(kTenLeaf);
  CHECK(t.size() == 19);
  HortonStatistics s = stats_of(t);
  CHECK(s.order == 3);
  CHECK(s.n(1) == 10u);
  CHECK(s.n(2) == 3u);
  CHECK(s.n(3) == 1u);
  CHECK(s.n(1, 2) == 3u);
  CHECK(s.n(1, 3) == 1u);
  CHECK(s.n(2, 3) == 1u);
  // Out-of-range queries are zero, not errors.
  CHECK(s.n(4) == 0u);
  CHECK(s.n(2, 2) == 0u);
  CHECK(s.n(3, 9) == 0u);

  BinaryTree p1 = prune(t);
  CHECK(p1.size() == 5);
  BinaryTree p2 = prune(p1);
  CHECK(p2.size() == 1);
  CHECK(prune(p2).empty());
}

TEST_CASE("comb statistics") {
  HortonStatistics s = stats_of(parse_tree("(a,(b,(c,d)));"));
  CHECK(s.order == 2);
  CHECK(s.n(1) == 4u);
  CHECK(s.n(2) == 1u);
  CHECK(s.n(1, 2) == 2u);
}

TEST_CASE("orders match the pruning characterization") {
  // k(v) is the number of prunings that erase the subtree at v.
  for (int n = 1; n <= 7; ++n)
    for (const BinaryTree& t : shapes_with_leaves(n)) {
      OrderAssignment a = assign_orders(t);
      for (NodeIndex v : t.postorder())
        CHECK(a.order[v] == order_via_pruning(t, v));
    }
}

TEST_CASE("orders match the pruning characterization on random trees") {
  std::mt19937_64 g(7);
  for (int rep = 0; rep < 60; ++rep) {
    BinaryTree t = testsupport::random_tree(g, 40);
    OrderAssignment a = assign_orders(t);
    for (NodeIndex v : t.postorder())
      CHECK(a.order[v] == order_via_pruning(t, v));
  }
}

TEST_CASE("tree order counts prunings to the empty tree") {
  std::mt19937_64 g(11);
  for (int rep = 0; rep < 25; ++rep) {
    BinaryTree t = testsupport::random_tree(g, 32);
    int order = assign_orders(t).tree_order;
    BinaryTree cur = t;
    for (int i = 0; i < order; ++i) {
      CHECK(!cur.empty());
      cur = prune(cur);
    }
    CHECK(cur.empty());
  }
}

TEST_CASE("pruning shifts branch and side-branch counts by one order") {
  auto check_shift = [](const BinaryTree& t) {
    HortonStatistics before = stats_of(t);
    if (before.order < 2) return;
    HortonStatistics after = stats_of(prune(t));
    CHECK(after.order == before.order - 1);
    for (int k = 2; k <= before.order; ++k) CHECK(after.n(k - 1) == before.n(k));
    for (int i = 2; i < before.order; ++i)
      for (int j = i + 1; j <= before.order; ++j)
        CHECK(after.n(i - 1, j - 1) == before.n(i, j));
  };
  for (int n = 2; n <= 7; ++n)
    for (const BinaryTree& t : shapes_with_leaves(n)) check_shift(t);
  std::mt19937_64 g(13);
  for (int rep = 0; rep < 40; ++rep)
    check_shift(testsupport::random_tree(g, 48));
}

TEST_CASE("branch bookkeeping balances at junctions") {
  // Below the top order, every order-k branch either pairs up to create an
  // order-(k+1) vertex or terminates as a side branch of some higher order.
  auto check_balance = [](const BinaryTree& t) {
    HortonStatistics s = stats_of(t);
    for (int k = 1; k < s.order; ++k) {
      std::uint64_t side = 0;
      for (int j = k + 1; j <= s.order; ++j) side += s.n(k, j);
      CHECK(s.n(k) == 2 * s.n(k + 1) + side);
    }
    CHECK(s.n(s.order) == 1u);
  };
  for (int n = 1; n <= 7; ++n)
    for (const BinaryTree& t : shapes_with_leaves(n)) check_balance(t);
  std::mt19937_64 g(17);
  for (int rep = 0; rep < 40; ++rep)
    check_balance(testsupport::random_tree(g, 64));
}

TEST_CASE("leaf count equals the order-1 branch count") {
  std::mt19937_64 g(19);
  for (int rep = 0; rep < 20; ++rep) {
    BinaryTree t = testsupport::random_tree(g, 50);
    CHECK(stats_of(t).n(1) == t.leaves().size());
  }
}

TEST_CASE("empty-tree and bad-index errors") {
  BinaryTree t;
  CHECK(thrown_code([&] { assign_orders(t); }) == errc::empty_tree);
  CHECK(thrown_code([&] { horton_statistics(t); }) == errc::empty_tree);
  BinaryTree s = BinaryTree::single();
  CHECK(thrown_code([&] { s.node(42); }) == errc::node_not_found);
  CHECK(thrown_code([&] { order_via_pruning(s, 42); }) ==
        errc::node_not_found);
}

TEST_CASE("structural equality respects labels only when asked") {
  BinaryTree a = parse_tree("(x,y);");
  BinaryTree b = parse_tree("(x,z);");
  CHECK(!a.structurally_equal(b));
  CHECK(a.structurally_equal(b, false));
  CHECK(!a.structurally_equal(parse_tree("((x,y),z);"), false));
}
