#include "camnet/group_rep.hpp"

namespace camnet {

GroupRep::GroupRep(const std::string& group) : group_(group) {
  if (group == "SL2" || group == "GL2") n_ = 2;
  else if (group == "SL3" || group == "GL3") n_ = 3;
  else throw CamnetError("UnsupportedSeries", "group must be SL2/SL3/GL2/GL3");
  table_ = &chevalley_table("A" + std::to_string(n_ - 1));
}

std::pair<int, int> GroupRep::pair_of_root(RootIndex g) const {
  const RootSystem& rs = table_->rootsys();
  // eps_i - eps_j has coordinates sum_{k=i..j-1} alpha_k (or negatives).
  const RootVec& v = rs.roots[g];
  int first = -1, last = -1, sign = 0;
  for (int k = 0; k < rs.rank; ++k) {
    if (v[k] == 0) continue;
    if (first < 0) {
      first = k;
      sign = v[k];
    }
    last = k;
  }
  if (sign > 0) return {first, last + 1};
  return {last + 1, first};
}

RootIndex GroupRep::root_of_pair(int i, int j) const {
  const RootSystem& rs = table_->rootsys();
  RootVec v(rs.rank, 0);
  if (i < j)
    for (int k = i; k < j; ++k) v[k] += 1;
  else
    for (int k = j; k < i; ++k) v[k] -= 1;
  return rs.index_of_or_throw(v);
}

Mat<Rat> GroupRep::e_matrix(RootIndex g) const {
  auto [i, j] = pair_of_root(g);
  Mat<Rat> m(n_, n_);
  m(i, j) = table_->rootsys().is_positive(g) ? Rat(1) : Rat(-1);
  return m;
}

Mat<Rat> GroupRep::n_matrix(RootIndex g) const {
  auto expm = [&](const Mat<Rat>& x) {
    // rank-one nilpotent: exp = I + x
    return Mat<Rat>::identity(n_) + x;
  };
  Mat<Rat> e = e_matrix(g);
  Mat<Rat> f = e_matrix(table_->rootsys().negative[g]);
  return expm(e) * expm(f) * expm(e);
}

Eigen::MatrixXcd GroupRep::e_matrix_c(RootIndex g) const {
  Mat<Rat> m = e_matrix(g);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out(i, j) = rat_to_double(m(i, j));
  return out;
}

Eigen::MatrixXcd GroupRep::exp_root(RootIndex g, Cplx c) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(n_, n_);
  auto [i, j] = pair_of_root(g);
  out(i, j) += c * (table_->rootsys().is_positive(g) ? 1.0 : -1.0);
  return out;
}

}  // namespace camnet
