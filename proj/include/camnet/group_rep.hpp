#pragma once

#include <Eigen/Dense>

#include "camnet/chevalley.hpp"
#include "camnet/matrix.hpp"
#include "camnet/poly.hpp"

namespace camnet {

/// Defining representation of GL(n)/SL(n), n <= 3, tied to the A_{n-1}
/// Chevalley table: images of the root vectors, the lifts n_alpha, and the
/// sheet-pair dictionary.
class GroupRep {
 public:
  explicit GroupRep(const std::string& group);

  const std::string& group() const { return group_; }
  int n() const { return n_; }
  const ChevalleyTable& table() const { return *table_; }
  const RootSystem& rootsys() const { return table_->rootsys(); }

  /// Ordered sheet pair (i, j), 0-based, of a root of A_{n-1}.
  std::pair<int, int> pair_of_root(RootIndex g) const;
  RootIndex root_of_pair(int i, int j) const;

  /// rho(e_g): +E_{ij} for positive roots, -E_{ij} for negative ones.
  Mat<Rat> e_matrix(RootIndex g) const;
  /// n_alpha = exp(e_a) exp(e_{-a}) exp(e_a), exact.
  Mat<Rat> n_matrix(RootIndex g) const;

  Eigen::MatrixXcd e_matrix_c(RootIndex g) const;
  /// exp(c e_g) = I + c rho(e_g) (rank-one nilpotent).
  Eigen::MatrixXcd exp_root(RootIndex g, Cplx c) const;

 private:
  std::string group_;
  int n_;
  const ChevalleyTable* table_;
};

}  // namespace camnet
