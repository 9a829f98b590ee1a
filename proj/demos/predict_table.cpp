// Print the expected branch-count table for a geometric side-branching law
// and compare the normalized column against the limiting powers of 1/R.

#include <cstdio>

#include "hortonlab/hortonlab.hpp"

int main() {
  using namespace hortonlab;
  auto seq = TokunagaSequence::geometric(1.0, 2.0);
  const int K = 8;
  ZetaTable table = zeta_by_recursion(seq, K);
  ExponentResult er = horton_exponent(seq);

  std::printf("family: %s   R = %.17g (%s)\n", seq.describe().c_str(), er.R,
              root_method_name(er.method));
  std::printf("%3s %18s %22s %22s\n", "k", "zeta_K(k)", "xi_K(k)", "R^(1-k)");
  for (int k = 1; k <= K; ++k)
    std::printf("%3d %18.1f %22.15g %22.15g\n", k, table.zeta[k - 1],
                table.xi[k - 1], std::pow(er.R, 1.0 - k));
  return 0;
}
