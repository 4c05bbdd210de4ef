#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "camnet/root_system.hpp"

namespace camnet {

/// Structure constants of a Chevalley basis with the sign convention
/// [e_a, e_{-a}] = -h_a. Signs for sums of positive roots are fixed by the
/// extraspecial-pair normalization; everything else follows from the
/// standard relations, and the table is checked against them exactly.
class ChevalleyTable {
 public:
  explicit ChevalleyTable(RootSystem rs);

  const RootSystem& rootsys() const { return rs_; }

  /// N_{a,b} with [e_a, e_b] = N_{a,b} e_{a+b}; 0 when a+b is not a root.
  /// a+b = 0 is not handled here (that bracket lands in the Cartan).
  int structure_constant(RootIndex a, RootIndex b) const;

  /// Coroot h_g = g^v in the simple-coroot basis; [e_g, e_{-g}] = -h_g.
  const std::vector<int>& coroot(RootIndex g) const { return coroots_[g]; }

  /// cartanPairing(a, g) = 2(a,g)/(a,a) = g(h_a).
  int cartan_pairing(RootIndex a, RootIndex g) const { return rs_.cartan_int(a, g); }

  /// dim g = rank + #roots (basis order: h_1..h_r, then e_{root 0..}).
  int dim() const { return rs_.rank + rs_.num_roots(); }

 private:
  RootSystem rs_;
  std::map<std::pair<RootIndex, RootIndex>, int> n_;
  std::vector<std::vector<int>> coroots_;

  void build();
};

/// Shared, memoized tables per root-system code.
const ChevalleyTable& chevalley_table(const std::string& code);

}  // namespace camnet
