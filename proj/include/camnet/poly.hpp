#pragma once

#include <complex>
#include <vector>

#include "camnet/rational.hpp"

namespace camnet {

using Cplx = std::complex<double>;

/// Polynomial over exact Gaussian rationals, ascending coefficients.
struct GPoly {
  std::vector<GaussRat> c;

  GPoly() = default;
  explicit GPoly(std::vector<GaussRat> coeffs) : c(std::move(coeffs)) { trim(); }
  static GPoly constant(GaussRat v) { return GPoly({std::move(v)}); }
  static GPoly monic_linear(GaussRat root) { return GPoly({-root, GaussRat(1)}); }

  void trim() {
    while (!c.empty() && is_zero(c.back())) c.pop_back();
  }
  bool zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }

  GaussRat eval(const GaussRat& z) const;
  Cplx eval(Cplx z) const;

  GPoly derivative() const;
  std::vector<Cplx> to_complex() const;

  friend GPoly operator+(const GPoly& a, const GPoly& b);
  friend GPoly operator-(const GPoly& a, const GPoly& b);
  friend GPoly operator*(const GPoly& a, const GPoly& b);
  GPoly scaled(const GaussRat& s) const;

  /// Exact division by (z - r); remainder returned through `rem`.
  GPoly divide_linear(const GaussRat& r, GaussRat& rem) const;
  /// Multiplicity of r as a root (exact).
  int root_order(const GaussRat& r) const;
};

/// Rational function num/den over Gaussian rationals.
struct GRatFun {
  GPoly num;
  GPoly den = GPoly::constant(GaussRat(1));

  bool zero() const { return num.zero(); }
  Cplx eval(Cplx z) const { return num.eval(z) / den.eval(z); }

  friend GRatFun operator+(const GRatFun& a, const GRatFun& b);
  friend GRatFun operator*(const GRatFun& a, const GRatFun& b);
  GRatFun scaled(const GaussRat& s) const;

  /// Order of pole at r (positive), 0 if regular, negative for a zero.
  int pole_order(const GaussRat& r) const;
  /// lim_{z->r} (z-r)^k * f(z); requires pole order <= k.
  GaussRat limit_with_factor(const GaussRat& r, int k) const;
  /// lim_{z->inf} z^k f(z); requires deg num - deg den + k <= 0.
  GaussRat limit_at_infinity_with_factor(int k) const;
  int infinity_pole_order_with_factor(int k) const {  // deg num - deg den + k
    return num.degree() - den.degree() + k;
  }
};

/// All complex roots of a double-coefficient polynomial (companion matrix).
std::vector<Cplx> poly_roots(const std::vector<Cplx>& ascending);

/// Roots of p clustered: groups closer than tol are merged to their mean,
/// returning (location, multiplicity).
std::vector<std::pair<Cplx, int>> clustered_roots(const std::vector<Cplx>& ascending, double tol);

}  // namespace camnet
