#include "awbm/oracles.hpp"

#include <deque>
#include <set>
#include <string>

namespace awbm::oracle {

int max_budget(int n) {
  if (n <= 2) return 24;
  if (n == 3) return 10;
  if (n == 4) return 6;
  return 4;
}

static void check_budget(int n, int budget) {
  if (budget < 0) throw ArgumentError("length budget must be nonnegative");
  if (budget > max_budget(n))
    throw CapacityError("length budget " + std::to_string(budget) + " exceeds oracle capacity " +
                        std::to_string(max_budget(n)) + " for rank " + std::to_string(n));
}

int length(const WeylElement& a) {
  const int n = a.rank();
  const Perm winv = a.w.inverse();
  Int total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Int pairing = a.nu[static_cast<size_t>(i)] - a.nu[static_cast<size_t>(j)];
      // w^{-1}(e_i - e_j) is positive iff w^{-1}(i) < w^{-1}(j).
      total += winv(i) < winv(j) ? std::abs(pairing) : std::abs(pairing - 1);
    }
  return static_cast<int>(total);
}

bool bruhat(const WeylElement& a, const WeylElement& b) {
  const int n = b.rank();
  if (a.rank() != n) throw ContextError("elements have different rank");
  const auto word = reduced_word(b);
  check_budget(n, static_cast<int>(word.size()));
  if (a.degree() != b.degree()) return false;
  const WeylElement omega = omega_element(n, b.degree());
  const size_t len = word.size();
  for (unsigned long mask = 0; mask < (1ul << len); ++mask) {
    WeylElement x = omega;
    for (size_t i = len; i-- > 0;)
      if ((mask >> i) & 1ul) x = simple_reflection(n, word[i]) * x;
    if (x == a) return true;
  }
  return false;
}

bool up(const WeylElement& a, const WeylElement& b, int budget) {
  const int n = a.rank();
  if (b.rank() != n) throw ContextError("elements have different rank");
  check_budget(n, budget);
  if (a.degree() != b.degree()) return false;
  const WeylElement a_inv = inverse(a);
  auto inside = [&](const WeylElement& c) {
    return awbm::length(a_inv * c) <= budget && awbm::length(inverse(c) * b) <= budget;
  };
  if (!inside(a)) return false;
  std::set<WeylElement> seen{a};
  std::deque<WeylElement> queue{a};
  while (!queue.empty()) {
    const WeylElement c = queue.front();
    queue.pop_front();
    if (c == b) return true;
    const Vec y = scaled_image(c);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        // Hyperplanes H_{e_i-e_j,k} strictly above the alcove of c.
        const Int d = y[static_cast<size_t>(i)] - y[static_cast<size_t>(j)];
        const Int first = floor_div(d, n) + 1;
        for (Int k = first; k <= first + budget; ++k) {
          WeylElement next = affine_reflection(n, i, j, k) * c;
          if (!inside(next) || !seen.insert(next).second) continue;
          queue.push_back(std::move(next));
        }
      }
  }
  return false;
}

std::vector<WeylElement> enumerate(int n, Int degree, int budget) {
  check_budget(n, budget);
  std::set<WeylElement> acc;
  std::set<WeylElement> layer{omega_element(n, degree)};
  acc.insert(layer.begin(), layer.end());
  for (int len = 0; len < budget && n >= 2; ++len) {
    std::set<WeylElement> next;
    for (const auto& x : layer)
      for (int k = 0; k < n; ++k) {
        WeylElement y = simple_reflection(n, k) * x;
        if (awbm::length(y) == len + 1) next.insert(y);
      }
    acc.insert(next.begin(), next.end());
    layer = std::move(next);
  }
  std::vector<WeylElement> out(acc.begin(), acc.end());
  sort_canonical(out);
  return out;
}

}  // namespace awbm::oracle
