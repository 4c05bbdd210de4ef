#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "camnet/group_rep.hpp"
#include "camnet/network.hpp"

namespace camnet {

/// Branch-cut presentation of a local system on the punctured plane: the
/// complement of the vertical cuts is simply connected and carries a fixed
/// trivialization; crossing the cut of anchor x westward multiplies by M_x
/// (so M_x is the counterclockwise monodromy around x, based anywhere
/// strictly below x).
struct CutSystem {
  int n = 2;
  struct Cut {
    Cplx anchor;
    std::string name;  // "branch:i", "puncture:i"
    Eigen::MatrixXcd monodromy;
  };
  std::vector<Cut> cuts;

  /// Plain parallel transport along a polyline (in the cut trivialization).
  Eigen::MatrixXcd transport(const std::vector<Cplx>& path) const;
  /// Monodromy around the counterclockwise circle of radius r centered at c,
  /// starting at angle a0.
  Eigen::MatrixXcd loop_monodromy(Cplx c, double r, double a0 = -M_PI / 2,
                                  bool ccw = true, int samples = 256) const;
};

/// Monodromy data in a fixed faithful representation, one matrix per
/// fundamental-group generator, plus the loop convention tag.
struct LocalSystemData {
  std::string rep;  // SL2/SL3/GL2/GL3
  struct Generator {
    std::string name;
    Eigen::MatrixXcd matrix;
  };
  std::vector<Generator> generators;
  double relation_tolerance = 1e-8;
  std::string convention = "cuts-vertical-up;ccw-loops;base-below";
};

CutSystem cut_system_from_data(const LocalSystemData& data, const Network& net);
LocalSystemData data_from_cut_system(const CutSystem& sys, const std::string& rep);

/// Sheet permutation induced by crossing the cut of `anchor` westward, in
/// the global frame (continuation matched just east/west of the cut).
std::vector<int> cut_sheet_permutation(const Network& net, Cplx anchor);

/// One-dimensional data on the punctured spectral cover: the S-block scalar
/// per branch point and a per-sheet scalar per finite puncture (read in the
/// global frame just below the puncture). Ramification monodromy is -1.
struct AbelianData {
  std::vector<Cplx> branch_a;                 // one per net.branch
  std::vector<std::vector<Cplx>> puncture_s;  // one vector per finite puncture
};

/// Pushforward to the rank-n system in the cut presentation; permutation
/// parts come from the cover, scalars from the abelian data. Throws
/// InconsistentCoverData when sizes do not match the network.
CutSystem pushforward(const Network& net, const AbelianData& data);

/// Crossing events of a path against the cuts and the network curves.
struct PathEvent {
  double arc;         // along the path
  bool is_cut;
  int cut_index = -1;
  int direction = 0;  // +1 westward, -1 eastward (cut crossings)
  int segment = -1;
  double seg_arc = 0;
  int sign = 0;       // +1 when crossing along the curve co-orientation
  Cplx position;
};
std::vector<PathEvent> path_events(const CutSystem& sys, const Network& net,
                                   const std::vector<Cplx>& path, bool include_segments);

/// JSON (canonical schema) for local-system data.
std::string local_system_json(const LocalSystemData& data);
LocalSystemData load_local_system_json(const std::string& text);

}  // namespace camnet
