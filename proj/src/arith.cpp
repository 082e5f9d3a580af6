#include "bstark/arith.hpp"

namespace bstark {

std::vector<std::pair<long, int>> factor_small(long n) {
  std::vector<std::pair<long, int>> out;
  if (n < 0) n = -n;
  for (long q = 2; q * q <= n; ++q) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    if (e > 0) out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace bstark
