#include "camnet/hitchin.hpp"

#include <algorithm>

#include "camnet/root_system.hpp"

namespace camnet {

namespace {

GRatFun rf_const(long v) {
  GRatFun f;
  f.num = GPoly::constant(GaussRat(Rat(v)));
  return f;
}

// Smallest-distance assignment of news to olds (n <= 3: brute force).
std::vector<int> best_assignment(const std::vector<Cplx>& olds, const std::vector<Cplx>& news) {
  int n = static_cast<int>(olds.size());
  std::vector<int> perm(n), best(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  double best_cost = 1e300;
  do {
    double cost = 0;
    for (int i = 0; i < n; ++i) cost += std::abs(news[perm[i]] - olds[i]);
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;  // olds[i] continues as news[best[i]]
}

}  // namespace

std::vector<Cplx> HitchinPoint::char_poly_at(Cplx z) const {
  std::vector<Cplx> c(n + 1, Cplx(0));
  c[n] = 1.0;
  for (int k = 1; k <= n; ++k) c[n - k] = a[k - 1].zero() ? Cplx(0) : a[k - 1].eval(z);
  return c;
}

std::vector<Cplx> HitchinPoint::eigenvalues(Cplx z) const {
  return poly_roots(char_poly_at(z));
}

GRatFun HitchinPoint::discriminant() const {
  const GRatFun& a1 = a[0];
  if (n == 2) {
    const GRatFun& a2 = a[1];
    // a1^2 - 4 a2
    return a1 * a1 + a2.scaled(GaussRat(Rat(-4)));
  }
  if (n == 3) {
    const GRatFun& a2 = a[1];
    const GRatFun& a3 = a[2];
    // 18 a1 a2 a3 - 4 a1^3 a3 + a1^2 a2^2 - 4 a2^3 - 27 a3^2
    GRatFun r = (a1 * a2 * a3).scaled(GaussRat(Rat(18)));
    r = r + (a1 * a1 * a1 * a3).scaled(GaussRat(Rat(-4)));
    r = r + a1 * a1 * a2 * a2;
    r = r + (a2 * a2 * a2).scaled(GaussRat(Rat(-4)));
    r = r + (a3 * a3).scaled(GaussRat(Rat(-27)));
    return r;
  }
  throw CamnetError("UnsupportedSeries", "discriminant only for n <= 3");
}

HitchinPoint make_hitchin_point(const std::string& group, std::vector<GRatFun> coeffs,
                                std::vector<GaussRat> punctures, bool at_infinity) {
  HitchinPoint h;
  h.group = group;
  if (group == "SL2" || group == "GL2") h.n = 2;
  else if (group == "SL3" || group == "GL3") h.n = 3;
  else throw CamnetError("UnsupportedSeries", "group must be SL2/SL3/GL2/GL3");
  if (static_cast<int>(coeffs.size()) != h.n)
    throw CamnetError("UnsupportedSeries", "need a_1..a_n coefficient functions");
  if (group[0] == 'S' && !coeffs[0].zero())
    throw CamnetError("UnsupportedSeries", "a_1 must vanish for SL groups");
  h.a = std::move(coeffs);
  h.punctures = std::move(punctures);
  h.puncture_at_infinity = at_infinity;
  return h;
}

std::vector<Cplx> branch_points(const HitchinPoint& h, double tol) {
  GRatFun disc = h.discriminant();
  if (disc.zero()) throw CamnetError("DegenerateCurve", "discriminant vanishes identically");
  // Zeros of the numerator that are not zeros of the denominator.
  auto clusters = clustered_roots(disc.num.to_complex(), tol * 100);
  std::vector<Cplx> out;
  for (auto [z, mult] : clusters) {
    if (!disc.den.zero() && std::abs(disc.den.eval(z)) < tol) continue;
    // skip punctures
    bool at_puncture = false;
    for (const auto& d : h.punctures)
      if (std::abs(z - d.to_complex()) < tol * 100) at_puncture = true;
    if (at_puncture) continue;
    if (mult > 1)
      throw CamnetError("NonSimpleBranching", "discriminant zero of multiplicity > 1");
    out.push_back(z);
  }
  std::sort(out.begin(), out.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

std::vector<Cplx> residue(const HitchinPoint& h, const PunctureId& d) {
  // Residue characteristic polynomial mu^n + c_1 mu^{n-1} + ... + c_n with
  // c_k = lim (z-d)^k a_k(z), or c_k = lim (-z)^k a_k(z) at infinity.
  std::vector<Cplx> c(h.n + 1, Cplx(0));
  c[h.n] = 1.0;
  for (int k = 1; k <= h.n; ++k) {
    if (h.a[k - 1].zero()) continue;
    GaussRat v;
    if (d.at_infinity) {
      v = h.a[k - 1].limit_at_infinity_with_factor(k);
      if (k % 2 == 1) v = -v;  // (-z)^k
    } else {
      v = h.a[k - 1].limit_with_factor(d.location, k);
    }
    c[h.n - k] = v.to_complex();
  }
  return poly_roots(c);
}

ConditionRReport condition_R(const HitchinPoint& h, double tol) {
  ConditionRReport rep;
  std::vector<PunctureId> ids;
  for (const auto& p : h.punctures) ids.push_back({false, p});
  if (h.puncture_at_infinity) ids.push_back({true, GaussRat(0)});
  for (const auto& id : ids) {
    ConditionRReport::Entry e;
    e.puncture = id;
    try {
      e.residues = residue(h, id);
    } catch (const CamnetError& err) {
      if (err.kind == "HigherOrderPole") {
        e.wild = true;
        rep.entries.push_back(e);
        continue;
      }
      throw;
    }
    e.min_re_gap = 1e300;
    e.min_abs_gap = 1e300;
    for (size_t i = 0; i < e.residues.size(); ++i)
      for (size_t j = i + 1; j < e.residues.size(); ++j) {
        Cplx diff = e.residues[i] - e.residues[j];
        e.min_re_gap = std::min(e.min_re_gap, std::abs(diff.real()));
        e.min_abs_gap = std::min(e.min_abs_gap, std::abs(diff));
      }
    if (e.residues.size() < 2) {
      e.min_re_gap = e.min_abs_gap = 1e300;
    }
    e.pass = e.min_re_gap > tol && e.min_abs_gap > tol;
    rep.pass = rep.pass && e.pass;
    rep.entries.push_back(e);
  }
  return rep;
}

double truncation_disc(const HitchinPoint& h, const PunctureId& d, double r0, double max_dev,
                       int samples, int max_halvings) {
  std::vector<Cplx> res;
  bool wild = false;
  try {
    res = residue(h, d);
  } catch (const CamnetError& err) {
    if (err.kind != "HigherOrderPole") throw;
    wild = true;
  }
  if (wild)
    throw CamnetError("NoValidRadius", "wild puncture has no spiral asymptote");
  Cplx center = d.at_infinity ? Cplx(0) : d.location.to_complex();

  double r = r0;
  for (int k = 0; k < max_halvings; ++k, r /= 2) {
    bool ok = true;
    for (int s = 0; s < samples && ok; ++s) {
      double th = 2 * M_PI * s / samples;
      Cplx z = center + std::polar(r, th);
      Cplx zq = d.at_infinity ? 1.0 / z : z;  // not used; evaluate in the plane
      (void)zq;
      std::vector<Cplx> lam = h.eigenvalues(z);
      // assign eigenvalues to residues via lambda*(z-center) ~ r_i
      std::vector<Cplx> scaled;
      for (Cplx l : lam) scaled.push_back(l * (z - center));
      auto asg = best_assignment(res, scaled);
      for (size_t i = 0; i < lam.size() && ok; ++i)
        for (size_t j = 0; j < lam.size() && ok; ++j) {
          if (i == j) continue;
          Cplx rij = res[i] - res[j];
          Cplx lij = scaled[asg[i]] - scaled[asg[j]];
          if (std::abs(rij) < 1e-14 || std::abs(lij) < 1e-14) continue;
          double dev = std::abs(std::arg(lij / rij));
          if (dev > max_dev) ok = false;
        }
    }
    if (ok) return r;
  }
  throw CamnetError("NoValidRadius", "deviation sweep exhausted");
}

std::vector<Cplx> continue_frame(const HitchinPoint& h, Cplx from, Cplx to,
                                 const std::vector<Cplx>& start) {
  std::vector<Cplx> cur = start;
  Cplx pos = from;
  double total = std::abs(to - from);
  if (total == 0) return cur;
  double step = total / 8;
  const double min_step = total * 1e-9;
  while (std::abs(pos - to) > 1e-15 * (1 + total)) {
    double remaining = std::abs(to - pos);
    double st = std::min(step, remaining);
    Cplx nxt = pos + (to - pos) / remaining * st;
    std::vector<Cplx> lam = h.eigenvalues(nxt);
    auto asg = best_assignment(cur, lam);
    // matching safety: smallest eigenvalue gap must dominate the move
    double min_gap = 1e300, max_move = 0;
    for (size_t i = 0; i < lam.size(); ++i) {
      max_move = std::max(max_move, std::abs(lam[asg[i]] - cur[i]));
      for (size_t j = i + 1; j < lam.size(); ++j)
        min_gap = std::min(min_gap, std::abs(lam[asg[i]] - lam[asg[j]]));
    }
    if (max_move * 10 > min_gap && st > min_step) {
      step = st / 2;
      continue;
    }
    std::vector<Cplx> reordered(lam.size());
    for (size_t i = 0; i < lam.size(); ++i) reordered[i] = lam[asg[i]];
    cur = reordered;
    pos = nxt;
    if (max_move * 40 < min_gap) step = std::min(step * 2, total / 4);
  }
  return cur;
}

SheetFrame::SheetFrame(const HitchinPoint& h, Cplx base_point, double low_imag)
    : h_(&h), base_(base_point), low_imag_(low_imag) {
  base_frame_ = h.eigenvalues(base_point);
  std::sort(base_frame_.begin(), base_frame_.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

std::vector<Cplx> SheetFrame::at(Cplx z) const {
  // base -> (Re base, low) -> (Re z, low) -> z, avoiding all upward cuts.
  std::vector<Cplx> f = base_frame_;
  Cplx p0 = base_;
  Cplx p1(base_.real(), low_imag_);
  Cplx p2(z.real(), low_imag_);
  f = continue_frame(*h_, p0, p1, f);
  f = continue_frame(*h_, p1, p2, f);
  f = continue_frame(*h_, p2, z, f);
  return f;
}

}  // namespace camnet
