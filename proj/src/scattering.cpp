#include "camnet/scattering.hpp"

#include <algorithm>

namespace camnet {

void ScatteringDiagram::validate() const {
  std::set<Rat> positions;
  for (const auto& r : rays_) {
    if (r.pos < 0 || r.pos >= 1)
      throw CamnetError("CoincidentRays", "ray position out of [0,1)");
    if (!positions.insert(r.pos).second)
      throw CamnetError("CoincidentRays", "two rays share a tangent direction");
  }
  std::set<RootIndex> in;
  for (const auto& r : rays_)
    if (r.dir == RayDir::In && !in.insert(r.root).second)
      throw CamnetError("DuplicateIncomingRoot", "incoming root repeated");
  const RootSystem& rs = table_->rootsys();
  if (!rs.is_convex(in))
    throw CamnetError("NonConvexIncoming", "incoming labels are not a convex set");
  std::set<RootIndex> out;
  for (const auto& r : rays_)
    if (r.dir == RayDir::Out && !out.insert(r.root).second)
      throw CamnetError("OutgoingMismatch", "outgoing root repeated");
  if (out != rs.restricted_convex_hull(in))
    throw CamnetError("OutgoingMismatch", "outgoing labels do not biject with Conv^N(C_in)");
}

std::set<RootIndex> ScatteringDiagram::incoming_labels() const {
  std::set<RootIndex> s;
  for (const auto& r : rays_)
    if (r.dir == RayDir::In) s.insert(r.root);
  return s;
}

std::set<RootIndex> ScatteringDiagram::outgoing_labels() const {
  std::set<RootIndex> s;
  for (const auto& r : rays_)
    if (r.dir == RayDir::Out) s.insert(r.root);
  return s;
}

std::vector<std::pair<size_t, int>> ScatteringDiagram::cyclic_word() const {
  std::vector<size_t> order(rays_.size());
  for (size_t i = 0; i < rays_.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return rays_[a].pos < rays_[b].pos; });
  // Start at the outgoing ray of smallest position (any rotation is
  // equivalent for the zero-residual condition).
  size_t start = 0;
  for (size_t k = 0; k < order.size(); ++k)
    if (rays_[order[k]].dir == RayDir::Out) { start = k; break; }
  std::vector<std::size_t> rotated;
  for (size_t k = 0; k < order.size(); ++k) rotated.push_back(order[(start + k) % order.size()]);
  std::vector<std::pair<size_t, int>> word;
  for (size_t i : rotated) word.push_back({i, rays_[i].dir == RayDir::Out ? 1 : -1});
  return word;
}

PlanarRealization planar_realization(PlanarKind kind) {
  auto simple = [](const ChevalleyTable& t, int i) {
    RootVec v(t.rootsys().rank, 0);
    v[i] = 1;
    return t.rootsys().index_of_or_throw(v);
  };
  switch (kind) {
    case PlanarKind::A1xA1: {
      const ChevalleyTable& t = chevalley_table("A3");
      return {&t, simple(t, 0), simple(t, 2)};
    }
    case PlanarKind::A2: {
      const ChevalleyTable& t = chevalley_table("A2");
      return {&t, simple(t, 0), simple(t, 1)};
    }
    case PlanarKind::B2: {
      const ChevalleyTable& t = chevalley_table("B2");
      // alpha is the shorter simple root
      RootIndex a0 = simple(t, 0), a1 = simple(t, 1);
      bool first_short = t.rootsys().norm2(a0) < t.rootsys().norm2(a1);
      return {&t, first_short ? a0 : a1, first_short ? a1 : a0};
    }
    case PlanarKind::G2: {
      const ChevalleyTable& t = chevalley_table("G2");
      return {&t, simple(t, 0), simple(t, 1)};
    }
    case PlanarKind::G2Short: {
      const ChevalleyTable& t = chevalley_table("G2");
      // x root = alpha (short simple), y root = alpha + beta
      RootIndex d = simple(t, 0);
      RootIndex g = t.rootsys().index_of_or_throw({1, 1});
      return {&t, d, g};
    }
  }
  throw CamnetError("UnsupportedKind", "unknown planar kind");
}

bool cecotti_vafa_identity_check(PlanarKind kind, const std::vector<Rat>& coeffs) {
  if (kind != PlanarKind::A2 && kind != PlanarKind::B2 && kind != PlanarKind::G2)
    throw CamnetError("UnsupportedKind", "CV identities exist for A2, B2, G2");
  PlanarRealization pr = planar_realization(kind);
  const ChevalleyTable& t = *pr.table;
  const RootSystem& rs = t.rootsys();
  using E = NilElement<Rat>;
  auto root_at = [&](int ca, int cb) {
    RootVec v = rs.roots[pr.alpha];
    const RootVec& b = rs.roots[pr.beta];
    for (int i = 0; i < rs.rank; ++i) v[i] = ca * rs.roots[pr.alpha][i] + cb * b[i];
    return rs.index_of_or_throw(v);
  };
  auto br = [](const E& a, const E& b) { return bracket_unchecked(a, b); };

  std::vector<std::pair<int, int>> lhs_order;  // (m,n) for m*alpha + n*beta
  switch (kind) {
    case PlanarKind::A2: lhs_order = {{1, 0}, {1, 1}, {0, 1}}; break;
    case PlanarKind::B2: lhs_order = {{1, 0}, {2, 1}, {1, 1}, {0, 1}}; break;
    default: lhs_order = {{1, 0}, {3, 1}, {2, 1}, {3, 2}, {1, 1}, {0, 1}}; break;
  }
  if (coeffs.size() != lhs_order.size())
    throw CamnetError("UnsupportedKind", "wrong number of coefficients");

  std::map<std::pair<int, int>, E> X;
  for (size_t i = 0; i < lhs_order.size(); ++i)
    X.emplace(lhs_order[i], E(t, root_at(lhs_order[i].first, lhs_order[i].second), coeffs[i]));

  Mat<Rat> lhs = Mat<Rat>::identity(t.dim());
  for (auto mn : lhs_order) lhs = lhs * adjoint_exp(X.at(mn));

  std::vector<E> rhs_factors;
  const E& Xa = X.at({1, 0});
  const E& Xb = X.at({0, 1});
  const E& Xab = X.at({1, 1});
  switch (kind) {
    case PlanarKind::A2:
      rhs_factors = {Xb, Xab + br(Xa, Xb), Xa};
      break;
    case PlanarKind::B2: {
      const E& X2ab = X.at({2, 1});
      rhs_factors = {Xb, Xab + br(Xa, Xb),
                     X2ab + br(Xa, Xab) + br(Xa, br(Xa, Xb)) * Rat(1, 2), Xa};
      break;
    }
    default: {
      const E& X2ab = X.at({2, 1});
      const E& X3ab = X.at({3, 1});
      const E& X3a2b = X.at({3, 2});
      E xy = br(Xa, Xb);
      E xy2 = br(Xa, xy);
      E xy3 = br(Xa, xy2);
      E middle = X3a2b + br(X3ab, Xb) + br(X2ab, Xab) + br(xy2, Xab) * Rat(1, 2) +
                 br(xy2, xy) * Rat(1, 6) + br(Xab, br(Xab, Xa)) * Rat(1, 2);
      E fourth = X2ab + br(Xa, Xab) + xy2 * Rat(1, 2);
      E fifth = X3ab + br(Xa, X2ab) + xy3 * Rat(1, 6) + br(Xa, br(Xa, Xab)) * Rat(1, 2);
      rhs_factors = {Xb, Xab + xy, middle, fourth, fifth, Xa};
      break;
    }
  }
  Mat<Rat> rhs = Mat<Rat>::identity(t.dim());
  for (const auto& f : rhs_factors) rhs = rhs * adjoint_exp(f);
  return lhs == rhs;
}

}  // namespace camnet
