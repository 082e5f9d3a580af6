#include "bstark/group.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace bstark {

AbelianGroup::AbelianGroup(std::vector<int> table, int size, std::vector<std::string> labels)
    : n_(size), table_(std::move(table)), labels_(std::move(labels)) {
  if (static_cast<int>(table_.size()) != n_ * n_) throw std::invalid_argument("AbelianGroup: bad table size");
  inv_.assign(static_cast<std::size_t>(n_), -1);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (mul(a, b) == 0) {
        inv_[static_cast<std::size_t>(a)] = b;
        break;
      }
    }
    if (inv_[static_cast<std::size_t>(a)] < 0) throw std::invalid_argument("AbelianGroup: element without inverse");
  }
  if (labels_.empty()) {
    for (int a = 0; a < n_; ++a) labels_.push_back("g" + std::to_string(a));
  }
}

AbelianGroup AbelianGroup::cyclic_product(const std::vector<int>& orders) {
  int n = 1;
  for (int o : orders) n *= o;
  auto digits = [&](int x) {
    std::vector<int> d(orders.size());
    for (int i = static_cast<int>(orders.size()) - 1; i >= 0; --i) {
      d[static_cast<std::size_t>(i)] = x % orders[static_cast<std::size_t>(i)];
      x /= orders[static_cast<std::size_t>(i)];
    }
    return d;
  };
  std::vector<int> table(static_cast<std::size_t>(n) * n);
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) {
    auto da = digits(a);
    std::string lab = "(";
    for (std::size_t i = 0; i < da.size(); ++i) lab += (i ? "," : "") + std::to_string(da[i]);
    labels.push_back(lab + ")");
    for (int b = 0; b < n; ++b) {
      auto db = digits(b);
      int c = 0;
      for (std::size_t i = 0; i < orders.size(); ++i) c = c * orders[i] + (da[i] + db[i]) % orders[i];
      table[static_cast<std::size_t>(a) * n + b] = c;
    }
  }
  return AbelianGroup(std::move(table), n, std::move(labels));
}

int AbelianGroup::pow(int a, long k) const {
  if (k < 0) {
    a = inv(a);
    k = -k;
  }
  int r = 0;
  for (long i = 0; i < k % order(a); ++i) r = mul(r, a);
  return r;
}

int AbelianGroup::order(int a) const {
  int k = 1;
  int x = a;
  while (x != 0) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

int AbelianGroup::exponent() const {
  int e = 1;
  for (int a = 0; a < n_; ++a) e = std::lcm(e, order(a));
  return e;
}

std::vector<int> AbelianGroup::subgroup(const std::vector<int>& gens) const {
  std::vector<char> in(static_cast<std::size_t>(n_), 0);
  std::vector<int> out{0};
  in[0] = 1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int g : gens) {
      int y = mul(out[i], g);
      if (!in[static_cast<std::size_t>(y)]) {
        in[static_cast<std::size_t>(y)] = 1;
        out.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> AbelianGroup::cyclic_decomposition(const std::vector<int>& H) const {
  const std::size_t target = H.size();
  std::vector<int> chosen;
  // Backtracking: pick elements of maximal order whose cyclic group meets
  // the span of the previous choices trivially.
  std::function<bool(std::vector<int>&)> search = [&](std::vector<int>& span) -> bool {
    if (span.size() == target) return true;
    std::vector<int> cands;
    for (int h : H) {
      if (h == 0) continue;
      auto cyc = subgroup({h});
      std::vector<int> meet;
      std::set_intersection(cyc.begin(), cyc.end(), span.begin(), span.end(), std::back_inserter(meet));
      if (meet.size() == 1) cands.push_back(h);
    }
    std::stable_sort(cands.begin(), cands.end(), [&](int a, int b) { return order(a) > order(b); });
    for (int h : cands) {
      auto gens = chosen;
      gens.push_back(h);
      auto next = subgroup(gens);
      if (next.size() != span.size() * static_cast<std::size_t>(order(h))) continue;
      chosen.push_back(h);
      if (search(next)) return true;
      chosen.pop_back();
    }
    return false;
  };
  std::vector<int> span{0};
  if (!search(span)) throw InvariantViolation("cyclic_decomposition: no decomposition found");
  return chosen;
}

bool Character::is_trivial() const {
  return std::all_of(values.begin(), values.end(), [](int v) { return v == 0; });
}

std::vector<Character> characters(const AbelianGroup& G) {
  const int n = G.size();
  const int e = G.exponent();
  std::vector<int> gens;
  std::vector<int> span{0};
  for (int g = 0; g < n; ++g) {
    if (!std::binary_search(span.begin(), span.end(), g)) {
      gens.push_back(g);
      span = G.subgroup(gens);
    }
  }
  std::vector<Character> out;
  std::vector<int> assign(gens.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == gens.size()) {
      std::vector<int> val(static_cast<std::size_t>(n), -1);
      val[0] = 0;
      std::vector<int> queue{0};
      for (std::size_t q = 0; q < queue.size(); ++q) {
        int x = queue[q];
        for (std::size_t j = 0; j < gens.size(); ++j) {
          int y = G.mul(x, gens[j]);
          int v = (val[static_cast<std::size_t>(x)] + assign[j]) % e;
          if (val[static_cast<std::size_t>(y)] < 0) {
            val[static_cast<std::size_t>(y)] = v;
            queue.push_back(y);
          } else if (val[static_cast<std::size_t>(y)] != v) {
            return;
          }
        }
      }
      out.push_back(Character{e, std::move(val)});
      return;
    }
    int step = e / G.order(gens[i]);
    for (int a = 0; a < e; a += step) {
      assign[i] = a;
      rec(i + 1);
    }
  };
  rec(0);
  if (static_cast<int>(out.size()) != n) throw InvariantViolation("characters: count differs from group order");
  return out;
}

}  // namespace bstark
