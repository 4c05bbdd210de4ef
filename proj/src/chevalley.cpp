#include "camnet/chevalley.hpp"

#include <mutex>
#include <unordered_map>

namespace camnet {

namespace {

// Standard-convention structure constants ([e_a, e_{-a}] = +h_a) for one
// root system, built by height recursion from extraspecial pairs.
class StdConstants {
 public:
  explicit StdConstants(const RootSystem& rs) : rs_(rs) { build(); }

  // N_{a,b} for arbitrary roots with a+b a root; 0 if a+b not a root.
  Rat full(RootIndex a, RootIndex b) const {
    RootVec sum = rs_.roots[a];
    for (int i = 0; i < rs_.rank; ++i) sum[i] += rs_.roots[b][i];
    auto z = rs_.index_of(sum);
    if (!z) return Rat(0);
    bool ap = rs_.is_positive(a), bp = rs_.is_positive(b);
    if (ap && bp) return Rat(pos(a, b));
    if (!ap && !bp) return -Rat(pos(rs_.negative[a], rs_.negative[b]));
    if (!ap) return -full(b, a);
    // a positive, b negative
    if (rs_.is_positive(*z)) {
      // N_{a,b} = -(z,z)/(a,a) * Npos(-b, z)
      return -rs_.norm2(*z) / rs_.norm2(a) * Rat(pos(rs_.negative[b], *z));
    }
    // N_{a,b} = (z,z)/(b,b) * Npos(-z, a)
    return rs_.norm2(*z) / rs_.norm2(b) * Rat(pos(rs_.negative[*z], a));
  }

 private:
  const RootSystem& rs_;
  std::map<std::pair<RootIndex, RootIndex>, long> pos_;  // ordered a<b, both positive

  long pos(RootIndex a, RootIndex b) const {
    if (a == b) throw CamnetError("Internal", "structure constant N_{a,a}");
    if (a < b) {
      auto it = pos_.find({a, b});
      return it == pos_.end() ? 0 : it->second;
    }
    auto it = pos_.find({b, a});
    return it == pos_.end() ? 0 : -it->second;
  }

  void build() {
    // Roots are sorted by height then lex, so walking positive roots in index
    // order is a height recursion.
    for (RootIndex g = 0; g < rs_.num_positive; ++g) {
      if (rs_.height_std[g] < 2) continue;
      // Extraspecial pair (eps, eta): eps minimal with g - eps a positive root.
      RootIndex eps = -1, eta = -1;
      std::vector<std::pair<RootIndex, RootIndex>> pairs;
      for (RootIndex a = 0; a < rs_.num_positive; ++a) {
        RootVec v = rs_.roots[g];
        for (int i = 0; i < rs_.rank; ++i) v[i] -= rs_.roots[a][i];
        auto b = rs_.index_of(v);
        if (!b || !rs_.is_positive(*b)) continue;
        pairs.push_back({a, *b});
        if (eps < 0) { eps = a; eta = *b; }
      }
      if (eps < 0) throw CamnetError("Internal", "no decomposition of a non-simple root");
      pos_[{eps, eta}] = rs_.p_string(eps, eta) + 1;

      for (auto [a, b] : pairs) {
        if (a >= b) continue;            // ordered pairs only
        if (a == eps && b == eta) continue;
        // Four-root relation on (eps, eta, -a, -b).
        Rat t2(0), t3(0);
        {
          RootVec d = rs_.roots[eta];
          for (int i = 0; i < rs_.rank; ++i) d[i] -= rs_.roots[a][i];
          if (auto di = rs_.index_of(d)) {
            t2 = full(eta, rs_.negative[a]) * full(eps, rs_.negative[b]) / rs_.norm2(*di);
          }
        }
        {
          RootVec d = rs_.roots[eps];
          for (int i = 0; i < rs_.rank; ++i) d[i] -= rs_.roots[a][i];
          if (auto di = rs_.index_of(d)) {
            t3 = full(rs_.negative[a], eps) * full(eta, rs_.negative[b]) / rs_.norm2(*di);
          }
        }
        Rat n = rs_.norm2(g) * (t2 + t3) / Rat(pos(eps, eta));
        if (!rat_is_integer(n))
          throw CamnetError("Internal", "non-integral structure constant");
        long ni = n.get_num().get_si();
        long expect = rs_.p_string(a, b) + 1;
        if (ni != expect && ni != -expect)
          throw CamnetError("Internal", "structure constant magnitude mismatch");
        pos_[{a, b}] = ni;
      }
    }
  }
};

}  // namespace

ChevalleyTable::ChevalleyTable(RootSystem rs) : rs_(std::move(rs)) { build(); }

void ChevalleyTable::build() {
  StdConstants std_n(rs_);
  auto sign_of = [&](RootIndex r) { return rs_.is_positive(r) ? 1 : -1; };
  for (RootIndex a = 0; a < rs_.num_roots(); ++a)
    for (RootIndex b = 0; b < rs_.num_roots(); ++b) {
      if (b == rs_.negative[a] || a == b) continue;
      RootVec sum = rs_.roots[a];
      for (int i = 0; i < rs_.rank; ++i) sum[i] += rs_.roots[b][i];
      auto z = rs_.index_of(sum);
      if (!z) continue;
      Rat n = std_n.full(a, b);
      if (!rat_is_integer(n)) throw CamnetError("Internal", "non-integral constant");
      long v = n.get_num().get_si() * sign_of(a) * sign_of(b) * sign_of(*z);
      if (v == 0) throw CamnetError("Internal", "vanishing constant for a root sum");
      n_[{a, b}] = static_cast<int>(v);
    }

  coroots_.resize(rs_.num_roots());
  for (RootIndex g = 0; g < rs_.num_roots(); ++g) coroots_[g] = rs_.coroot(g);
}

int ChevalleyTable::structure_constant(RootIndex a, RootIndex b) const {
  auto it = n_.find({a, b});
  return it == n_.end() ? 0 : it->second;
}

const ChevalleyTable& chevalley_table(const std::string& code) {
  static std::mutex mu;
  static std::unordered_map<std::string, std::unique_ptr<ChevalleyTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(code);
  if (it == cache.end()) {
    auto t = std::make_unique<ChevalleyTable>(build_root_system(code));
    it = cache.emplace(code, std::move(t)).first;
  }
  return *it->second;
}

}  // namespace camnet
