#pragma once

#include "camnet/network.hpp"
#include "camnet/root_system.hpp"

namespace camnet {

struct TraceConfig {
  double rel_tol = 1e-8;
  double max_dev_disc = 0.1;      // truncation-disc angular threshold
  double eps_merge_factor = 1e-5; // joint merge radius, times domain scale
  double eps_bp_factor = 1e-4;    // branch proximity abort, times domain scale
  double length_cap_factor = 50;  // times domain diameter
  int max_iterations = 8;
  double working_radius = 0;      // 0: derive from the special points
  double seed_radius_factor = 2e-3;
  double max_step_factor = 0.02;
};

/// Seeds the three primary curves at branch point b (untraced).
std::vector<CurveSegment> primary_curves(const Network& net, int branch_index,
                                         const TraceConfig& cfg);

/// Extends an active segment until it terminates.
void trace_trajectory(const Network& net, CurveSegment& seg, const TraceConfig& cfg);

/// Full WKB loop: discs, primaries, trace/detect/spawn iterations, ordering.
Network build_network(const HitchinPoint& h, const TraceConfig& cfg);

/// Pairwise polyline intersections of the current segments, coalesced.
struct RawIntersection {
  Cplx position;
  int seg_a, seg_b;
  double arc_a, arc_b;
};
std::vector<RawIntersection> polyline_intersections(const Network& net, double eps_merge);

/// Root of the A_{n-1} system for the ordered sheet pair (i, j).
RootIndex root_of_pair(const RootSystem& rs_a, int i, int j);

}  // namespace camnet
