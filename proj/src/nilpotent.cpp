#include "camnet/nilpotent.hpp"

#include <map>
#include <mutex>

namespace camnet::detail {

namespace {

long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void generate(int maxdeg, std::vector<std::pair<int, int>>& blocks, int degree,
              std::vector<DynkinTerm>& out) {
  if (!blocks.empty()) {
    auto [rm, sm] = blocks.back();
    // Structurally nonzero ends only: the innermost bracket must not repeat
    // its own letter.
    if (sm == 1 || (sm == 0 && rm == 1)) {
      DynkinTerm t;
      t.blocks = blocks;
      t.degree = degree;
      int m = static_cast<int>(blocks.size());
      long denom = static_cast<long>(m) * degree;
      for (auto [r, s] : blocks) denom *= factorial(r) * factorial(s);
      t.coeff = Rat((m % 2 == 1) ? 1 : -1, denom);
      out.push_back(std::move(t));
    }
  }
  // Extend with one more block.
  for (int r = 0; degree + r <= maxdeg; ++r)
    for (int s = (r == 0 ? 1 : 0); degree + r + s <= maxdeg; ++s) {
      blocks.push_back({r, s});
      generate(maxdeg, blocks, degree + r + s, out);
      blocks.pop_back();
    }
}

}  // namespace

const std::vector<DynkinTerm>& dynkin_terms(int maxdeg) {
  static std::mutex mu;
  static std::map<int, std::vector<DynkinTerm>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(maxdeg);
  if (it == cache.end()) {
    std::vector<DynkinTerm> terms;
    std::vector<std::pair<int, int>> blocks;
    generate(maxdeg, blocks, 0, terms);
    it = cache.emplace(maxdeg, std::move(terms)).first;
  }
  return it->second;
}

}  // namespace camnet::detail
