#pragma once

#include <optional>
#include <string>
#include <vector>

#include "camnet/poly.hpp"
#include "camnet/root_system.hpp"

namespace camnet {

/// A point of the Hitchin base for GL(n)/SL(n), n <= 3, on the punctured
/// sphere: the characteristic polynomial
///   lambda^n + a_1 lambda^{n-1} + ... + a_n
/// with exact rational-function coefficients, plus the puncture divisor.
struct HitchinPoint {
  std::string group;  // SL2, SL3, GL2, GL3
  int n = 2;
  std::vector<GRatFun> a;  // a[k] is a_{k+1}; a_1 identically 0 for SL groups
  std::vector<GaussRat> punctures;  // finite punctures (simple poles of the eigenvalue form)
  bool puncture_at_infinity = false;

  /// Eigenvalues at z (unsorted).
  std::vector<Cplx> eigenvalues(Cplx z) const;
  /// Characteristic-polynomial coefficients at z: [a_n, ..., a_1, 1].
  std::vector<Cplx> char_poly_at(Cplx z) const;
  /// Discriminant in lambda, as an exact rational function of z (n <= 3).
  GRatFun discriminant() const;
};

HitchinPoint make_hitchin_point(const std::string& group, std::vector<GRatFun> coeffs,
                                std::vector<GaussRat> punctures, bool at_infinity);

/// Simple branch points (zeros of the discriminant). Throws DegenerateCurve
/// when the discriminant vanishes identically and NonSimpleBranching when a
/// zero has multiplicity > 1.
std::vector<Cplx> branch_points(const HitchinPoint& h, double tol = 1e-9);

/// Eigenvalue residues at a puncture: roots of the residue characteristic
/// polynomial. Throws HigherOrderPole for a pole of order > 1 of the
/// eigenvalue form.
struct PunctureId {
  bool at_infinity = false;
  GaussRat location;  // meaningful when !at_infinity
};
std::vector<Cplx> residue(const HitchinPoint& h, const PunctureId& d);

/// Condition R report: every pairwise difference of residue eigenvalues has
/// nonzero real part. Wild (higher-order) poles at infinity are recorded
/// separately; trajectories there are trapped by the working-radius circle.
struct ConditionRReport {
  struct Entry {
    PunctureId puncture;
    bool wild = false;          // pole order > 1: not subject to the test
    bool pass = true;
    std::vector<Cplx> residues;
    double min_re_gap = 0.0;
    double min_abs_gap = 0.0;
  };
  std::vector<Entry> entries;
  bool pass = true;  // all simple-pole punctures pass
};
ConditionRReport condition_R(const HitchinPoint& h, double tol = 1e-9);

/// Largest radius in a geometric sweep within which every pair-direction
/// field deviates from its log-spiral asymptote by less than max_dev.
/// Throws NoValidRadius if the sweep exhausts.
double truncation_disc(const HitchinPoint& h, const PunctureId& d, double r0, double max_dev = 0.1,
                       int samples = 48, int max_halvings = 40);

/// Eigenvalue frame continuation along a straight segment; the returned
/// vector matches `start` index-by-index.
std::vector<Cplx> continue_frame(const HitchinPoint& h, Cplx from, Cplx to,
                                 const std::vector<Cplx>& start);

/// Globally indexed sheet frame at z: eigenvalues ordered by continuation
/// from the base point along a path that dodges all vertical branch cuts
/// (down from the base point, across below everything, and up to z).
class SheetFrame {
 public:
  SheetFrame(const HitchinPoint& h, Cplx base_point, double low_imag);
  std::vector<Cplx> at(Cplx z) const;
  Cplx base_point() const { return base_; }
  const std::vector<Cplx>& base_frame() const { return base_frame_; }

 private:
  const HitchinPoint* h_;
  Cplx base_;
  double low_imag_;
  std::vector<Cplx> base_frame_;
};

}  // namespace camnet
