#include "camnet/poly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "camnet/root_system.hpp"

namespace camnet {

GaussRat GPoly::eval(const GaussRat& z) const {
  GaussRat acc(0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Cplx GPoly::eval(Cplx z) const {
  Cplx acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + it->to_complex();
  return acc;
}

GPoly GPoly::derivative() const {
  GPoly d;
  for (size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * GaussRat(Rat(static_cast<long>(k))));
  d.trim();
  return d;
}

std::vector<Cplx> GPoly::to_complex() const {
  std::vector<Cplx> out;
  for (const auto& x : c) out.push_back(x.to_complex());
  return out;
}

GPoly operator+(const GPoly& a, const GPoly& b) {
  GPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), GaussRat(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

GPoly operator-(const GPoly& a, const GPoly& b) {
  GPoly nb = b.scaled(GaussRat(Rat(-1)));
  return a + nb;
}

GPoly operator*(const GPoly& a, const GPoly& b) {
  GPoly r;
  if (a.zero() || b.zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, GaussRat(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

GPoly GPoly::scaled(const GaussRat& s) const {
  GPoly r = *this;
  for (auto& x : r.c) x *= s;
  r.trim();
  return r;
}

GPoly GPoly::divide_linear(const GaussRat& r, GaussRat& rem) const {
  // synthetic division by (z - r)
  GPoly q;
  if (zero()) {
    rem = GaussRat(0);
    return q;
  }
  q.c.assign(c.size() > 1 ? c.size() - 1 : 0, GaussRat(0));
  GaussRat carry(0);
  for (size_t k = c.size(); k-- > 0;) {
    GaussRat cur = c[k] + carry * r;
    if (k == 0) {
      rem = cur;
    } else {
      q.c[k - 1] = cur;
      carry = cur;
    }
  }
  q.trim();
  return q;
}

int GPoly::root_order(const GaussRat& r) const {
  if (zero()) return 0;
  int order = 0;
  GPoly cur = *this;
  while (!cur.zero()) {
    GaussRat rem(0);
    GPoly q = cur.divide_linear(r, rem);
    if (!(rem == GaussRat(0))) break;
    ++order;
    cur = q;
  }
  return order;
}

GRatFun operator+(const GRatFun& a, const GRatFun& b) {
  GRatFun r;
  r.num = a.num * b.den + b.num * a.den;
  r.den = a.den * b.den;
  return r;
}

GRatFun operator*(const GRatFun& a, const GRatFun& b) {
  GRatFun r;
  r.num = a.num * b.num;
  r.den = a.den * b.den;
  return r;
}

GRatFun GRatFun::scaled(const GaussRat& s) const {
  GRatFun r = *this;
  r.num = r.num.scaled(s);
  return r;
}

int GRatFun::pole_order(const GaussRat& r) const {
  if (num.zero()) return 0;
  return den.root_order(r) - num.root_order(r);
}

GaussRat GRatFun::limit_with_factor(const GaussRat& r, int k) const {
  if (num.zero()) return GaussRat(0);
  int p = num.root_order(r), m = den.root_order(r);
  if (m - p > k) throw CamnetError("HigherOrderPole", "pole order exceeds " + std::to_string(k));
  if (m - p < k) return GaussRat(0);
  GPoly n = num, d = den;
  GaussRat rem(0);
  for (int i = 0; i < p; ++i) n = n.divide_linear(r, rem);
  for (int i = 0; i < m; ++i) d = d.divide_linear(r, rem);
  return n.eval(r) / d.eval(r);
}

GaussRat GRatFun::limit_at_infinity_with_factor(int k) const {
  if (num.zero()) return GaussRat(0);
  int d = num.degree() - den.degree() + k;
  if (d > 0) throw CamnetError("HigherOrderPole", "pole order at infinity exceeds " + std::to_string(k));
  if (d < 0) return GaussRat(0);
  return num.c.back() / den.c.back();
}

std::vector<Cplx> poly_roots(const std::vector<Cplx>& ascending) {
  std::vector<Cplx> c = ascending;
  while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
  if (c.size() <= 1) return {};
  int n = static_cast<int>(c.size()) - 1;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<Cplx> roots;
  for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
  return roots;
}

std::vector<std::pair<Cplx, int>> clustered_roots(const std::vector<Cplx>& ascending, double tol) {
  std::vector<Cplx> roots = poly_roots(ascending);
  std::vector<std::pair<Cplx, int>> out;
  std::vector<bool> used(roots.size(), false);
  for (size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    Cplx sum = roots[i];
    int cnt = 1;
    used[i] = true;
    for (size_t j = i + 1; j < roots.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(roots[j] - roots[i]) < tol) {
        sum += roots[j];
        ++cnt;
        used[j] = true;
      }
    }
    out.push_back({sum / static_cast<double>(cnt), cnt});
  }
  return out;
}

}  // namespace camnet
