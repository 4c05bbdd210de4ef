#pragma once

#include <map>
#include <set>
#include <vector>

#include "camnet/chevalley.hpp"
#include "camnet/matrix.hpp"
#include "camnet/rational.hpp"

namespace camnet {

/// Element of a nilpotent subalgebra u_C, as a sparse root -> scalar map.
/// Scalars are exact (Rat or GaussRat); zero coefficients are never stored.
template <typename K>
struct NilElement {
  const ChevalleyTable* table = nullptr;
  std::map<RootIndex, K> coeffs;

  NilElement() = default;
  explicit NilElement(const ChevalleyTable& t) : table(&t) {}
  NilElement(const ChevalleyTable& t, RootIndex r, K c) : table(&t) { set(r, std::move(c)); }

  bool zero() const { return coeffs.empty(); }
  K coeff(RootIndex r) const {
    auto it = coeffs.find(r);
    return it == coeffs.end() ? K(0) : it->second;
  }
  void set(RootIndex r, K c) {
    if (is_zero(c)) coeffs.erase(r);
    else coeffs[r] = std::move(c);
  }
  void add(RootIndex r, const K& c) {
    auto it = coeffs.find(r);
    if (it == coeffs.end()) {
      if (!is_zero(c)) coeffs[r] = c;
      return;
    }
    it->second += c;
    if (is_zero(it->second)) coeffs.erase(it);
  }
  std::set<RootIndex> support() const {
    std::set<RootIndex> s;
    for (const auto& [r, c] : coeffs) s.insert(r);
    return s;
  }
  uint64_t support_mask() const {
    uint64_t m = 0;
    for (const auto& [r, c] : coeffs) m |= (uint64_t{1} << r);
    return m;
  }

  NilElement& operator+=(const NilElement& o) {
    for (const auto& [r, c] : o.coeffs) add(r, c);
    return *this;
  }
  NilElement& operator-=(const NilElement& o) {
    for (const auto& [r, c] : o.coeffs) add(r, K(0) - c);
    return *this;
  }
  NilElement& operator*=(const K& s) {
    if (is_zero(s)) { coeffs.clear(); return *this; }
    for (auto& [r, c] : coeffs) c *= s;
    return *this;
  }
  friend NilElement operator+(NilElement a, const NilElement& b) { return a += b; }
  friend NilElement operator-(NilElement a, const NilElement& b) { return a -= b; }
  friend NilElement operator*(NilElement a, const K& s) { return a *= s; }
  friend NilElement operator-(const NilElement& a) {
    NilElement r = a;
    for (auto& [k, c] : r.coeffs) c = K(0) - c;
    return r;
  }
  friend bool operator==(const NilElement& a, const NilElement& b) { return a.coeffs == b.coeffs; }
};

namespace detail {

inline void require_jointly_convex(const ChevalleyTable& t, uint64_t mask) {
  if (!t.rootsys().is_convex_mask(mask))
    throw CamnetError("NotConvex", "support is not contained in any polarization");
}

}  // namespace detail

/// [x, y] with coefficient of g equal to sum_{a+b=g} N_{a,b} x_a y_b.
/// Requires the joint support to be convex.
template <typename K>
NilElement<K> bracket_unchecked(const NilElement<K>& x, const NilElement<K>& y) {
  NilElement<K> out(*x.table);
  const RootSystem& rs = x.table->rootsys();
  for (const auto& [a, xa] : x.coeffs)
    for (const auto& [b, yb] : y.coeffs) {
      RootIndex g = rs.sum(a, b);
      if (g < 0) continue;
      int n = x.table->structure_constant(a, b);
      out.add(g, xa * yb * K(n));
    }
  return out;
}

template <typename K>
NilElement<K> bracket(const NilElement<K>& x, const NilElement<K>& y) {
  detail::require_jointly_convex(*x.table, x.support_mask() | y.support_mask());
  return bracket_unchecked(x, y);
}

namespace detail {

/// One term of the Dynkin series: block exponents and the scalar coefficient.
struct DynkinTerm {
  std::vector<std::pair<int, int>> blocks;  // (r_i, s_i)
  Rat coeff;
  int degree;
};

/// All Dynkin terms of total degree <= maxdeg (memoized per maxdeg).
const std::vector<DynkinTerm>& dynkin_terms(int maxdeg);

}  // namespace detail

/// log(exp x * exp y) via Dynkin's commutator series; exact, terminates at
/// the nilpotency class of the ambient positive system.
template <typename K>
NilElement<K> bch_log_pair_unchecked(const NilElement<K>& x, const NilElement<K>& y) {
  const ChevalleyTable& t = *x.table;
  if (x.zero()) return y;
  if (y.zero()) return x;
  const RootSystem& rs = t.rootsys();
  int maxdeg = rs.height_std[rs.num_positive - 1];  // height of the highest root
  NilElement<K> acc(t);
  for (const auto& term : detail::dynkin_terms(maxdeg)) {
    // Right-nested bracket over the word x^{r_1} y^{s_1} ... x^{r_m} y^{s_m}.
    // Build the letter list; structurally zero ends were filtered already.
    NilElement<K> b(t);
    bool first = true;
    for (auto it = term.blocks.rbegin(); it != term.blocks.rend(); ++it) {
      for (int k = 0; k < it->second; ++k) {  // y letters
        if (first) { b = y; first = false; }
        else b = bracket_unchecked(y, b);
        if (b.zero()) break;
      }
      if (!first && b.zero()) break;
      for (int k = 0; k < it->first; ++k) {  // x letters
        if (first) { b = x; first = false; }
        else b = bracket_unchecked(x, b);
        if (b.zero()) break;
      }
      if (!first && b.zero()) break;
    }
    if (b.zero()) continue;
    acc += b * K(term.coeff);
  }
  return acc;
}

template <typename K>
NilElement<K> bch_log_pair(const NilElement<K>& x, const NilElement<K>& y) {
  detail::require_jointly_convex(*x.table, x.support_mask() | y.support_mask());
  return bch_log_pair_unchecked(x, y);
}

/// Ordered tuple of single-root coordinates representing prod exp(X_g e_g).
template <typename K>
struct UnipotentCoords {
  const ChevalleyTable* table = nullptr;
  std::vector<std::pair<RootIndex, K>> factors;  // in product order
};

/// log of the ordered product (left fold of BCH).
template <typename K>
NilElement<K> mult_map(const UnipotentCoords<K>& u) {
  if (!u.table) throw CamnetError("Internal", "mult_map on empty coords");
  const ChevalleyTable& t = *u.table;
  uint64_t mask = 0;
  for (const auto& [r, c] : u.factors) mask |= (uint64_t{1} << r);
  detail::require_jointly_convex(t, mask);
  NilElement<K> acc(t);
  for (const auto& [r, c] : u.factors) {
    NilElement<K> f(t, r, c);
    acc = bch_log_pair_unchecked(acc, f);
  }
  return acc;
}

/// Unique tuple (in the given order) with mult_map(tuple) = u; forward
/// substitution in increasing height.
template <typename K>
UnipotentCoords<K> mult_map_inverse(const NilElement<K>& u, const std::vector<RootIndex>& order) {
  const ChevalleyTable& t = *u.table;
  const RootSystem& rs = t.rootsys();
  std::set<RootIndex> carrier(order.begin(), order.end());
  auto pol = rs.polarization_containing(carrier);
  if (!pol) throw CamnetError("NotConvex", "order carrier is not convex");
  for (const auto& [r, c] : u.coeffs)
    if (!carrier.count(r))
      throw CamnetError("Internal", "element support outside the ordered carrier set");

  UnipotentCoords<K> out;
  out.table = &t;
  for (RootIndex r : order) out.factors.push_back({r, K(0)});

  int hmax = 0;
  for (RootIndex r : order) hmax = std::max(hmax, rs.height(*pol, r));
  for (int h = 1; h <= hmax; ++h) {
    NilElement<K> cur = mult_map(out);
    for (auto& [r, c] : out.factors)
      if (rs.height(*pol, r) == h) c += u.coeff(r) - cur.coeff(r);
  }
  return out;
}

/// Projection onto a face: drops all coefficients off the face.
/// Checks that f is a face of the cone over the (Conv-closed) support carrier.
template <typename K>
NilElement<K> face_project(const NilElement<K>& x, const std::set<RootIndex>& carrier,
                           const std::set<RootIndex>& face) {
  const RootSystem& rs = x.table->rootsys();
  if (!rs.is_face(carrier, face))
    throw CamnetError("NotAFace", "subset is not a face of the support cone");
  NilElement<K> out(*x.table);
  for (const auto& [r, c] : x.coeffs)
    if (face.count(r)) out.set(r, c);
  return out;
}

template <typename K>
NilElement<K> face_project_unchecked(const NilElement<K>& x, const std::set<RootIndex>& face) {
  NilElement<K> out(*x.table);
  for (const auto& [r, c] : x.coeffs)
    if (face.count(r)) out.set(r, c);
  return out;
}

/// Matrix of ad(x) on the Chevalley basis (h_1..h_r, e_{roots}); exact.
template <typename K>
Mat<K> adjoint_matrix(const NilElement<K>& x) {
  const ChevalleyTable& t = *x.table;
  const RootSystem& rs = t.rootsys();
  int r = rs.rank, d = t.dim();
  Mat<K> m(d, d);
  // Column j: image of basis vector j.
  for (int j = 0; j < r; ++j) {
    // [x, h_j] = -sum x_g g(h_j) e_g
    for (const auto& [g, c] : x.coeffs) {
      // g(h_j) = <g, alpha_j^v> = cartan_int(alpha_j-as-root, g); the simple
      // root alpha_j is the root with coordinate vector e_j, positive index j
      // in sorted order only when heights sort it first. Look it up directly.
      RootVec v(rs.rank, 0);
      v[j] = 1;
      RootIndex aj = rs.index_of_or_throw(v);
      int pairing = rs.cartan_int(aj, g);
      m(r + g, j) += K(0) - c * K(pairing);
    }
  }
  for (RootIndex dl = 0; dl < rs.num_roots(); ++dl) {
    int j = r + dl;
    for (const auto& [g, c] : x.coeffs) {
      if (g == rs.negative[dl]) {
        // [e_{-dl}, e_{dl}] = +h_{dl}
        const auto& co = t.coroot(dl);
        for (int i = 0; i < r; ++i) m(i, j) += c * K(co[i]);
        continue;
      }
      RootIndex s = rs.sum(g, dl);
      if (s < 0) continue;
      m(r + s, j) += c * K(t.structure_constant(g, dl));
    }
  }
  return m;
}

/// exp(ad x): exact unipotent matrix; throws if ad x fails to nilpotate
/// (which would mean the support was not convex).
template <typename K>
Mat<K> adjoint_exp(const NilElement<K>& x) {
  const ChevalleyTable& t = *x.table;
  detail::require_jointly_convex(t, x.support_mask());
  int d = t.dim();
  Mat<K> ad = adjoint_matrix(x);
  Mat<K> acc = Mat<K>::identity(d);
  Mat<K> pw = Mat<K>::identity(d);
  Rat fact(1);
  for (int k = 1; k <= d + 1; ++k) {
    pw = pw * ad;
    if (pw.is_zero_matrix()) return acc;
    fact *= k;
    Mat<K> termm = pw;
    termm *= K(Rat(1) / fact);
    acc += termm;
  }
  throw CamnetError("Internal", "ad x is not nilpotent");
}

}  // namespace camnet
