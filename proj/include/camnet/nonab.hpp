#pragma once

#include "camnet/local_system.hpp"

namespace camnet {

/// Stokes factors per segment: the matrix is the factor's value at the
/// segment's first polyline point, in the cut-complement trivialization.
struct StokesAssignment {
  std::map<int, Eigen::MatrixXcd> factor;

  /// Factor value transported along the segment to arc parameter `arc`.
  Eigen::MatrixXcd at_arc(const CutSystem& sys, const CurveSegment& seg, double arc) const;
};

struct SMonodromyReport {
  struct Entry {
    int branch = -1;
    bool pass = false;
    int sheet_i = -1, sheet_j = -1;  // colliding pair (global frame)
    Cplx a;                         // block entry: [[0, a], [-1/a, 0]]
    double worst = 0;               // worst shape deviation
  };
  std::vector<Entry> entries;
  bool pass = true;
};

/// S-monodromy shape check: each branch generator is the identity on
/// non-colliding sheets and an anti-diagonal [[0,a],[-1/a,0]] block on the
/// colliding pair matching the cover's cut transposition.
SMonodromyReport check_S_monodromy(const CutSystem& sys, const Network& net, double tol = 1e-8);

/// The factor triple for a branch monodromy n_alpha t_alpha, as in the
/// construction: u_{+-alpha} = Ad_{t^{-1/2}} exp(-e_{+-alpha}) embedded in
/// the colliding 2x2 block. `sqrt_branch` = +-1 selects the square root (the
/// output is branch-independent).
struct PrimaryTriple {
  Eigen::MatrixXcd u_alpha, u_minus_alpha;
};
PrimaryTriple primary_factors(const Eigen::MatrixXcd& branch_monodromy, int sheet_i, int sheet_j,
                              int sqrt_branch = +1);

enum class PrimaryRule { FromMonodromy, PathDetour };

/// Full Stokes-factor assignment: primary factors per branch point, then the
/// unique scattering solution at each joint in topological order.
StokesAssignment assign_all_factors(const CutSystem& sys, const Network& net,
                                    PrimaryRule rule = PrimaryRule::FromMonodromy);

/// Modified parallel transport: ordinary transport interleaved with
/// factor^{+-1} at every transversal crossing of a network curve.
Eigen::MatrixXcd reglue_transport(const CutSystem& sys, const Network& net,
                                  const StokesAssignment& sf, const std::vector<Cplx>& path);

/// Reglued monodromy around a circle, with the seam kept away from every
/// crossing event.
Eigen::MatrixXcd reglue_loop(const CutSystem& sys, const Network& net,
                             const StokesAssignment& sf, Cplx center, double radius,
                             int samples = 256);

/// Closed small loops for the flatness report.
struct FlatnessReport {
  struct Entry {
    std::string name;
    double deviation;  // ||M - I||_max
  };
  std::vector<Entry> entries;
  double worst = 0;
  bool pass(double tol) const { return worst < tol; }
};
FlatnessReport flatness_report(const CutSystem& sys, const Network& net,
                               const StokesAssignment& sf);

/// End-to-end non-abelianization: reglued monodromies around the punctures
/// (and the chart circle) with the flatness report attached.
struct NonabResult {
  LocalSystemData output;
  FlatnessReport flatness;
  double relation_residual = 0;  // product of puncture loops vs chart loop
};
NonabResult nonabelianize(const CutSystem& sys, const Network& net,
                          PrimaryRule rule = PrimaryRule::FromMonodromy);

/// Path-detour factor for one primary segment: I + (clockwise-loop
/// transport)[pair] E_pair, read at the segment's first point.
Eigen::MatrixXcd path_detour_factor(const CutSystem& sys, const Network& net, int segment_id);

/// Deviation between nonab and the path-detour variant after the best global
/// conjugation (the two pipelines share base point and frames, so the
/// conjugation is the identity; the deviation is reported directly).
struct PdComparison {
  double max_deviation = 0;
  NonabResult nonab, nonab_pd;
};
PdComparison pd_equivalence_check(const CutSystem& sys, const Network& net);

/// Circle polyline helper (closed when sweep is 2 pi).
std::vector<Cplx> circle_path(Cplx center, double radius, double a0 = -M_PI / 2,
                              double sweep = 2 * M_PI, int samples = 256);

}  // namespace camnet
