#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "hortonlab/hortonlab.hpp"
#include "support.hpp"

using namespace hortonlab;
using testsupport::thrown_code;

TEST_CASE("parsing small documents") {
  BinaryTree leaf = parse_tree("x;");
  CHECK(leaf.size() == 1);
  CHECK(leaf.node(leaf.root()).label == "x");

  BinaryTree bare = parse_tree(";");
  CHECK(bare.size() == 1);
  CHECK(bare.node(bare.root()).label.empty());

  BinaryTree cherry = parse_tree("(,);");
  CHECK(cherry.size() == 3);
  CHECK(cherry.is_full_binary());

  BinaryTree perfect = parse_tree("((,),(,));");
  CHECK(perfect.size() == 7);
  CHECK(assign_orders(perfect).tree_order == 3);

  BinaryTree comb = parse_tree("(a,(b,(c,d)));");
  HortonStatistics s = horton_statistics(comb);
  CHECK(s.order == 2);
  CHECK(s.n(1) == 4u);
  CHECK(s.n(1, 2) == 2u);
}

TEST_CASE("whitespace between tokens is ignored") {
  BinaryTree t = parse_tree(" ( a ,\n\tb ) ; ");
  CHECK(t.size() == 3);
  CHECK(serialize_tree(t) == "(a,b);");
}

TEST_CASE("string round trips") {
  for (const char* doc :
       {";", "x;", "(,);", "(a,b);", "((,),(,));", "(a,(b,(c,d)));",
        "(((((a,b),c),((d,e),f)),((g,h),j)),i);", "(a_1,b_2);"}) {
    CHECK(serialize_tree(parse_tree(doc)) == doc);
  }
}

TEST_CASE("serializing small trees") {
  CHECK(serialize_tree(BinaryTree::single()) == ";");
  CHECK(serialize_tree(BinaryTree::single("tip")) == "tip;");
  CHECK(serialize_tree(join(BinaryTree::single(), BinaryTree::single())) ==
        "(,);");
  CHECK(thrown_code([] { serialize_tree(BinaryTree()); }) == errc::empty_tree);
}

TEST_CASE("tree round trips on random labeled trees") {
  std::mt19937_64 g(2024);
  for (int rep = 0; rep < 1000; ++rep) {
    BinaryTree t = testsupport::random_tree(g, 50);
    BinaryTree back = parse_tree(serialize_tree(t));
    CHECK(back.structurally_equal(t));
  }
}

TEST_CASE("arity violations carry the byte offset") {
  try {
    parse_tree("(a,b,c);");
    FAIL("expected NOT_FULL_BINARY");
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_full_binary);
    CHECK(std::string(e.what()).find("at byte 4") != std::string::npos);
  }
  try {
    parse_tree("(a);");
    FAIL("expected NOT_FULL_BINARY");
  } catch (const Error& e) {
    CHECK(e.code() == errc::not_full_binary);
    CHECK(std::string(e.what()).find("at byte 2") != std::string::npos);
  }
  CHECK(thrown_code([] { parse_tree("(a,,b);"); }) == errc::not_full_binary);
}

TEST_CASE("token violations are syntax errors") {
  CHECK(thrown_code([] { parse_tree(""); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("(a,b"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("x"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("(a,b)"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("(a,b);x"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("(a,b);;"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("a,b;"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("(a,b));"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree("(a,b!);"); }) == errc::syntax_error);
  CHECK(thrown_code([] { parse_tree(")"); }) == errc::syntax_error);
}

TEST_CASE("unterminated groups name the failure") {
  try {
    parse_tree("((a,b),(c,");
    FAIL("expected SYNTAX_ERROR");
  } catch (const Error& e) {
    CHECK(e.code() == errc::syntax_error);
    CHECK(std::string(e.what()).find("unterminated") != std::string::npos);
  }
}

TEST_CASE("sampled trees survive the round trip") {
  SamplerConfig cfg;
  cfg.seq = TokunagaSequence::geometric(1.0, 2.0);
  cfg.K = 5;
  cfg.distribution = SideDistribution::poisson;
  cfg.seed = 8;
  for (std::uint64_t i = 0; i < 25; ++i) {
    BinaryTree t = sample_tree(cfg, i);
    CHECK(parse_tree(serialize_tree(t)).structurally_equal(t));
  }
}
