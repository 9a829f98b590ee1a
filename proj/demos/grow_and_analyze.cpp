// Grow one random tree, print its Newick form, then show that pruning
// shifts every branch count down by exactly one order.

#include <cstdio>

#include "hortonlab/hortonlab.hpp"

int main() {
  using namespace hortonlab;
  SamplerConfig cfg;
  cfg.seq = TokunagaSequence::geometric(1.0, 2.0);
  cfg.K = 4;
  cfg.seed = 7;

  BinaryTree t = sample_tree(cfg, 0);
  std::printf("tree: %s\n", serialize_tree(t).c_str());

  HortonStatistics before = horton_statistics(t);
  std::printf("order %d, branch counts:", before.order);
  for (int k = 1; k <= before.order; ++k)
    std::printf(" N_%d=%llu", k, static_cast<unsigned long long>(before.n(k)));
  std::printf("\n");

  BinaryTree pruned = prune(t);
  HortonStatistics after = horton_statistics(pruned);
  std::printf("after one pruning (order %d):", after.order);
  for (int k = 1; k <= after.order; ++k)
    std::printf(" N_%d=%llu", k, static_cast<unsigned long long>(after.n(k)));
  std::printf("\n");
  return 0;
}
