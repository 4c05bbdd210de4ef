#pragma once

#include <map>
#include <string>
#include <vector>

#include "camnet/hitchin.hpp"

namespace camnet {

/// One traced Stokes curve on the punctured plane. The oriented label is the
/// pair of tracked eigenvalues; their values are stored per polyline point so
/// the label can be read in any local frame without cut bookkeeping.
struct CurveSegment {
  enum class Status {
    Active,
    EndedAtDisc,
    ErrorRanIntoBranchPoint,
    ErrorDense,
    ErrorLeftChart,
    SheetTrackingLost,
  };

  int id = -1;
  int origin_branch = -1;  // index into Network::branch, or -1
  int origin_joint = -1;   // index into Network::joints, or -1
  int birth_iteration = 0;
  Status status = Status::Active;
  int end_disc = -1;  // index into Network::discs when EndedAtDisc

  std::vector<Cplx> points;
  std::vector<Cplx> lam_i;  // first tracked eigenvalue, per point
  std::vector<Cplx> lam_j;  // second tracked eigenvalue, per point
  double arc_length = 0;
  double max_phase_residual = 0;  // |Im(lambda_ij zdot)| / |lambda_ij|

  Cplx end_point() const { return points.back(); }
  Cplx tangent_at(size_t k) const;  // unit tangent of the polyline near point k
};

/// A curve incident to a joint, with the geometry the scattering step needs.
struct JointIncidence {
  int segment = -1;
  bool incoming = false;   // arrives at the joint (every passing curve also leaves)
  bool new_curve = false;  // born at this joint
  double angle = 0;        // tangent-ray angle (incoming rays point backwards)
  Cplx lam_i, lam_j;       // tracked pair values at the joint
  double arc_param = 0;    // arc length along the segment at the joint
};

struct JointRecord {
  int id = -1;
  Cplx position;
  int iteration = 0;
  std::vector<JointIncidence> rays;
  bool spawned = false;
  bool nonconvex_error = false;
};

struct DiscRecord {
  PunctureId puncture;
  Cplx center;      // for the infinity puncture this is 0
  double radius;    // for infinity: trajectories are trapped OUTSIDE this radius
  bool outside = false;
};

struct Network {
  HitchinPoint hitchin;
  Cplx base_point;
  double working_radius = 0;
  double domain_scale = 1;

  std::vector<Cplx> branch;
  std::vector<DiscRecord> discs;
  std::vector<CurveSegment> segments;
  std::vector<JointRecord> joints;
  std::vector<std::string> errors;

  bool acyclic = false;
  std::vector<int> joint_order;  // joint ids in topological order

  /// Events (joints) along a segment, ordered by arc parameter.
  std::vector<std::pair<double, int>> joints_on_segment(int seg) const;
};

/// Directed-graph acyclicity via Kahn; fills joint_order on success.
bool topological_order(Network& net);

/// End classification per the trajectory taxonomy.
enum class EndClass { BranchToPuncture, JointToPuncture, JointToBranch, Other };
std::vector<EndClass> classify_ends(const Network& net);
std::map<EndClass, int> end_census(const Network& net);

/// Graph JSON (vertices/edges/labels/statuses) and a loader for round trips.
std::string network_graph_json(const Network& net);
struct GraphSummary {
  int n_branch = 0, n_joints = 0, n_segments = 0, n_discs = 0;
  bool acyclic = false;
  std::vector<std::string> statuses;
};
GraphSummary load_graph_summary(const std::string& json_text);
Network load_network_json(const std::string& json_text);

}  // namespace camnet
