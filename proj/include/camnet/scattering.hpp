#pragma once

#include <string>
#include <vector>

#include "camnet/nilpotent.hpp"

namespace camnet {

enum class RayDir { In, Out };

/// A labeled ray at the origin. Positions are exact fractions of a full
/// clockwise turn; only the cyclic order ever matters.
struct Ray {
  Rat pos;        // in [0,1)
  RayDir dir;
  RootIndex root;
};

class ScatteringDiagram {
 public:
  ScatteringDiagram(const ChevalleyTable& t, std::vector<Ray> rays)
      : table_(&t), rays_(std::move(rays)) {}

  const ChevalleyTable& table() const { return *table_; }
  const std::vector<Ray>& rays() const { return rays_; }

  /// Throws NonConvexIncoming / DuplicateIncomingRoot / OutgoingMismatch /
  /// CoincidentRays when the diagram is malformed.
  void validate() const;

  std::set<RootIndex> incoming_labels() const;
  std::set<RootIndex> outgoing_labels() const;

  /// Ray indices in clockwise order starting from the outgoing ray of
  /// smallest position; exponent -1 for incoming, +1 for outgoing.
  std::vector<std::pair<size_t, int>> cyclic_word() const;

 private:
  const ChevalleyTable* table_;
  std::vector<Ray> rays_;
};

/// Stokes factors: scalar X per ray, the factor being exp(X e_root).
template <typename K>
struct Decoration {
  std::map<size_t, K> coeff;  // ray index -> scalar

  K at(size_t ray) const {
    auto it = coeff.find(ray);
    return it == coeff.end() ? K(0) : it->second;
  }
};

/// BCH-log of the clockwise-ordered product of all decorated factors.
template <typename K>
NilElement<K> log_cyclic_word(const ScatteringDiagram& d, const Decoration<K>& dec) {
  NilElement<K> acc(d.table());
  for (auto [ri, expn] : d.cyclic_word()) {
    K c = dec.at(ri);
    if (expn < 0) c = K(0) - c;
    if (is_zero(c)) continue;
    NilElement<K> f(d.table(), d.rays()[ri].root, c);
    acc = bch_log_pair_unchecked(acc, f);
  }
  return acc;
}

/// Unique outgoing decoration making the cyclic product the identity.
/// Height-forward substitution on the BCH-log of the word.
template <typename K>
Decoration<K> solve(const ScatteringDiagram& d, const Decoration<K>& incoming) {
  d.validate();
  const RootSystem& rs = d.table().rootsys();
  auto out_labels = d.outgoing_labels();
  auto pol = rs.polarization_containing(out_labels);
  if (!pol) throw CamnetError("NonConvexIncoming", "outgoing labels not convex");

  Decoration<K> full;
  for (size_t i = 0; i < d.rays().size(); ++i)
    if (d.rays()[i].dir == RayDir::In) full.coeff[i] = incoming.at(i);

  int hmax = 0;
  for (RootIndex r : out_labels) hmax = std::max(hmax, rs.height(*pol, r));
  for (int h = 1; h <= hmax; ++h) {
    NilElement<K> log = log_cyclic_word(d, full);
    for (size_t i = 0; i < d.rays().size(); ++i) {
      const Ray& ray = d.rays()[i];
      if (ray.dir != RayDir::Out || rs.height(*pol, ray.root) != h) continue;
      auto it = full.coeff.find(i);
      K cur = it == full.coeff.end() ? K(0) : it->second;
      full.coeff[i] = cur - log.coeff(ray.root);
    }
  }
  Decoration<K> outgoing;
  for (size_t i = 0; i < d.rays().size(); ++i)
    if (d.rays()[i].dir == RayDir::Out) outgoing.coeff[i] = full.at(i);
  return outgoing;
}

/// Residual of a fully decorated diagram: zero iff the decoration is valid.
template <typename K>
NilElement<K> verify_solution(const ScatteringDiagram& d, const Decoration<K>& full) {
  return log_cyclic_word(d, full);
}

/// Same check as an exact matrix product in the adjoint oracle.
template <typename K>
bool verify_solution_adjoint(const ScatteringDiagram& d, const Decoration<K>& full) {
  const ChevalleyTable& t = d.table();
  Mat<K> acc = Mat<K>::identity(t.dim());
  for (auto [ri, expn] : d.cyclic_word()) {
    K c = full.at(ri);
    if (expn < 0) c = K(0) - c;
    if (is_zero(c)) continue;
    acc = acc * adjoint_exp(NilElement<K>(t, d.rays()[ri].root, c));
  }
  return acc.is_identity();
}

/// Planar wall-crossing kinds: the closed-form swap of two incoming factors.
enum class PlanarKind { A1xA1, A2, B2, G2, G2Short };

/// The explicit outgoing tuple for exp(x e_a) exp(y e_b) incoming, as
/// single-root elements in clockwise outgoing order; the tuple's ordered
/// product equals e^x e^y.
template <typename K>
std::vector<NilElement<K>> planar_closed_form(PlanarKind kind, const K& xc, const K& yc);

/// Planar root data used by planar_closed_form and the CV identities.
struct PlanarRealization {
  const ChevalleyTable* table;
  RootIndex alpha;  // shorter incoming root (x side)
  RootIndex beta;   // other incoming root (y side)
};
PlanarRealization planar_realization(PlanarKind kind);

/// Cecotti-Vafa wall-crossing identity for A2 / B2 / G2: checks the ordered
/// LHS product against the reversed-order product, exactly, in the adjoint
/// oracle.
/// `coeffs` holds one scalar per root of Conv{alpha,beta} in LHS order.
bool cecotti_vafa_identity_check(PlanarKind kind, const std::vector<Rat>& coeffs);

/// Conjugation data for the N-equivariance of solve: a Weyl word together
/// with invertible scalings per simple root (parametrizing a torus element
/// by its simple-root characters).
template <typename K>
struct AdjointConjugation {
  std::vector<int> weyl_word;
  std::vector<K> simple_scalings;  // alpha_i(t)
};

/// Applies Ad_{n_w t} to every ray label and factor of a decorated diagram.
template <typename K>
std::pair<ScatteringDiagram, Decoration<K>> adjoint_transform(const ScatteringDiagram& d,
                                                              const Decoration<K>& dec,
                                                              const AdjointConjugation<K>& conj);

// --- implementation of templated transforms ---

template <typename K>
std::pair<ScatteringDiagram, Decoration<K>> adjoint_transform(const ScatteringDiagram& d,
                                                              const Decoration<K>& dec,
                                                              const AdjointConjugation<K>& conj) {
  const ChevalleyTable& t = d.table();
  const RootSystem& rs = t.rootsys();
  // Ad matrix of n_w = prod n_{alpha_i} over the word, acting on the algebra.
  Mat<K> ad = Mat<K>::identity(t.dim());
  for (int letter : conj.weyl_word) {
    RootVec v(rs.rank, 0);
    v[letter] = 1;
    RootIndex a = rs.index_of_or_throw(v);
    NilElement<K> ea(t, a, K(1));
    NilElement<K> ema(t, rs.negative[a], K(1));
    ad = ad * (adjoint_exp(ea) * adjoint_exp(ema) * adjoint_exp(ea));
  }
  auto word_perm = rs.apply_word(conj.weyl_word);

  std::vector<Ray> new_rays = d.rays();
  Decoration<K> new_dec;
  for (size_t i = 0; i < new_rays.size(); ++i) {
    RootIndex g = new_rays[i].root;
    RootIndex wg = word_perm[g];
    new_rays[i].root = wg;
    if (dec.coeff.count(i)) {
      K c = dec.coeff.at(i);
      // Ad_{n_w}(e_g) = lambda e_{wg}: the (e_wg, e_g) entry of ad.
      K lambda = ad(rs.rank + wg, rs.rank + g);
      // torus part: alpha_i(t)^{coordinate_i of wg}
      K tor(1);
      for (int k = 0; k < rs.rank; ++k) {
        int e = rs.roots[wg][k];
        for (int q = 0; q < e; ++q) tor *= conj.simple_scalings[k];
        for (int q = 0; q < -e; ++q) tor /= conj.simple_scalings[k];
      }
      new_dec.coeff[i] = c * lambda * tor;
    }
  }
  return {ScatteringDiagram(t, std::move(new_rays)), new_dec};
}

template <typename K>
std::vector<NilElement<K>> planar_closed_form(PlanarKind kind, const K& xc, const K& yc) {
  PlanarRealization pr = planar_realization(kind);
  const ChevalleyTable& t = *pr.table;
  NilElement<K> x(t, pr.alpha, xc), y(t, pr.beta, yc);
  auto br = [](const NilElement<K>& a, const NilElement<K>& b) { return bracket_unchecked(a, b); };
  NilElement<K> xy = br(x, y);            // [x,y]
  NilElement<K> xy2 = br(x, xy);          // [x,y]^{[2]}
  NilElement<K> xy3 = br(x, xy2);         // [x,y]^{[3]}
  std::vector<NilElement<K>> out;
  switch (kind) {
    case PlanarKind::A1xA1:
      out = {y, x};
      break;
    case PlanarKind::A2:
      out = {y, xy, x};
      break;
    case PlanarKind::B2:
      out = {y, xy, xy2 * K(Rat(1, 2)), x};
      break;
    case PlanarKind::G2:
      out = {y, xy, br(xy2, xy) * K(Rat(1, 6)), xy2 * K(Rat(1, 2)), xy3 * K(Rat(1, 6)), x};
      break;
    case PlanarKind::G2Short: {
      // x in u_delta, y in u_gamma with Conv{gamma,delta} in
      // {gamma, 2gamma+delta, gamma+delta, gamma+2delta, delta}.
      NilElement<K> yx2 = br(y, br(y, x));
      out = {y, yx2 * K(Rat(1, 2)), xy, xy2 * K(Rat(1, 2)), x};
      break;
    }
  }
  return out;
}

}  // namespace camnet
