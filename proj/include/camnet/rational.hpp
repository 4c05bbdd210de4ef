#pragma once

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace camnet {

/// Exact arbitrary-precision rational scalar.
using Rat = mpq_class;

inline Rat rat_from_long(long n, long d = 1) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

/// mpq_class(n, d) does not canonicalize; use this for possibly
/// unreduced fractions.
inline Rat rat_canon(long n, long d) {
  Rat q(n, d);
  q.canonicalize();
  return q;
}

/// Exact conversion: every IEEE double is a dyadic rational.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite input");
  Rat q(x);
  q.canonicalize();
  return q;
}

inline double rat_to_double(const Rat& q) { return q.get_d(); }

inline bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

/// Parses "p" or "p/q" with optional sign.
inline Rat rat_parse(const std::string& s) {
  std::string body = (!s.empty() && s[0] == '+') ? s.substr(1) : s;
  Rat q;
  if (body.empty() || q.set_str(body, 10) != 0)
    throw std::invalid_argument("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

inline std::string rat_str(const Rat& q) { return q.get_str(); }

/// Gaussian rational a + bi with exact components.
struct GaussRat {
  Rat re{0};
  Rat im{0};

  GaussRat() = default;
  GaussRat(Rat r) : re(std::move(r)) {}
  GaussRat(long n) : re(n) {}
  GaussRat(int n) : re(n) {}
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRat from_complex(std::complex<double> z) {
    return {rat_from_double(z.real()), rat_from_double(z.imag())};
  }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  GaussRat operator-() const { return {-re, -im}; }
  GaussRat& operator+=(const GaussRat& o) { re += o.re; im += o.im; return *this; }
  GaussRat& operator-=(const GaussRat& o) { re -= o.re; im -= o.im; return *this; }
  GaussRat& operator*=(const GaussRat& o) {
    Rat r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  GaussRat& operator/=(const GaussRat& o) {
    Rat n = o.re * o.re + o.im * o.im;
    if (n == 0) throw std::domain_error("GaussRat division by zero");
    Rat r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = r;
    return *this;
  }
  friend GaussRat operator+(GaussRat a, const GaussRat& b) { return a += b; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { return a -= b; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { return a *= b; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { return a /= b; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }
};

inline bool is_zero(const Rat& q) { return q == 0; }
inline bool is_zero(const GaussRat& q) { return q.re == 0 && q.im == 0; }

inline std::string scalar_str(const Rat& q) { return rat_str(q); }
inline std::string scalar_str(const GaussRat& q) {
  if (q.im == 0) return rat_str(q.re);
  return rat_str(q.re) + (q.im < 0 ? "-" : "+") + rat_str(abs(q.im)) + "i";
}

/// Parses "p/q" or "p/q+r/si" (the form used in config files).
inline GaussRat gauss_parse(const std::string& s) {
  auto fail = [&]() -> GaussRat { throw std::invalid_argument("bad Gaussian rational literal: " + s); };
  if (s.empty()) return fail();
  if (s.back() == 'i') {
    std::string body = s.substr(0, s.size() - 1);
    // split at the last +/- that is not the leading sign
    for (size_t k = body.size(); k-- > 1;) {
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != '/') {
        Rat re = rat_parse(body.substr(0, k));
        std::string ims = body.substr(k);
        if (ims == "+" || ims == "-") ims += "1";
        return {re, rat_parse(ims)};
      }
    }
    std::string ims = body;
    if (ims.empty() || ims == "+" || ims == "-") ims += "1";
    return {Rat(0), rat_parse(ims)};
  }
  return {rat_parse(s), Rat(0)};
}

}  // namespace camnet
