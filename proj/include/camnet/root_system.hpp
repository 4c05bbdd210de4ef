#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "camnet/rational.hpp"

namespace camnet {

/// Error with a machine-readable kind ("NotConvex", "UnsupportedSeries", ...).
struct CamnetError : std::runtime_error {
  std::string kind;
  CamnetError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

enum class Series { A, B, C, D, G };

/// Root coordinates in the simple-root integer basis of the fixed
/// (standard) polarization.
using RootVec = std::vector<int>;

using RootIndex = int;

/// A Weyl group element stored as a permutation of root indices, together
/// with a reduced-ish word in simple reflections that produces it.
struct WeylElement {
  std::vector<int> word;        // simple reflection indices, applied left to right
  std::vector<RootIndex> perm;  // perm[r] = image of root r
};

/// A polarization is a choice of positive system w(Phi+). `to_standard` maps
/// a root to its w^{-1}-image, so heights/simple-coordinates can be read in
/// standard coordinates.
struct Polarization {
  std::vector<RootIndex> to_standard;
  std::vector<bool> positive;  // membership of each root in this positive system
};

class RootSystem {
 public:
  Series series;
  int rank = 0;
  std::string code;  // "A1".."A4","B2","C2","D4","G2"

  std::vector<RootVec> roots;                // positives first (by height, then lex)
  std::vector<std::vector<int>> cartan;      // cartan[i][j] = 2(a_i,a_j)/(a_j,a_j)
  std::vector<Rat> simple_norm2;             // (a_i,a_i)
  int num_positive = 0;

  // Derived tables.
  std::vector<RootIndex> negative;                 // index of -root
  std::vector<int> height_std;                     // signed coordinate sum
  std::vector<std::vector<RootIndex>> simple_refl; // permutation per simple reflection
  std::vector<WeylElement> weyl;                   // full Weyl group, weyl[0] = id
  std::vector<uint64_t> pos_system_masks;          // positive system of weyl[i], as bitmask
  std::vector<std::vector<RootIndex>> sum_table;   // sum_table[a][b] = index of a+b, or -1

  bool is_positive(RootIndex r) const { return r < num_positive; }
  int num_roots() const { return static_cast<int>(roots.size()); }

  /// Exact symmetric bilinear form on root coordinates.
  Rat pairing(const RootVec& a, const RootVec& b) const;
  Rat pairing(RootIndex a, RootIndex b) const { return pairing(roots[a], roots[b]); }
  Rat norm2(RootIndex a) const { return pairing(a, a); }

  /// 2(a,b)/(a,a) = <b, a^v>; always an integer in {0,+-1,+-2,+-3}.
  int cartan_int(RootIndex a, RootIndex b) const;

  /// s_a(b) as a root index.
  RootIndex reflect(RootIndex a, RootIndex b) const;

  std::optional<RootIndex> index_of(const RootVec& v) const;
  RootIndex index_of_or_throw(const RootVec& v) const;

  /// Largest p >= 0 with a - p*b a root.
  int p_string(RootIndex a, RootIndex b) const;

  /// Coroot gamma^v as integer coordinates in the simple-coroot basis.
  std::vector<int> coroot(RootIndex g) const;

  std::vector<RootIndex> apply_word(const std::vector<int>& word) const;  // as permutation
  RootIndex apply_word(const std::vector<int>& word, RootIndex r) const;

  /// Some polarization whose positive half contains `s`, if one exists.
  std::optional<Polarization> polarization_containing(const std::set<RootIndex>& s) const;
  bool is_convex(const std::set<RootIndex>& s) const;
  uint64_t mask_of(const std::set<RootIndex>& s) const;
  bool is_convex_mask(uint64_t m) const;
  /// Index of a+b, or -1 when the sum is not a root.
  RootIndex sum(RootIndex a, RootIndex b) const { return sum_table[a][b]; }

  /// Conv^N: all roots expressible as nonnegative integer combinations of s.
  /// Throws NotConvex when s is not convex.
  std::set<RootIndex> restricted_convex_hull(const std::set<RootIndex>& s) const;

  /// Height of g in the given polarization; throws NegativeRoot when g is not
  /// positive for it.
  int height(const Polarization& p, RootIndex g) const;
  const Polarization& standard_polarization() const { return std_polarization_; }

  /// Proper faces (all dimensions) of the cone spanned by the Conv^N-closed
  /// set C, each as a subset of C, plus the leftover interior set.
  struct FaceDecomposition {
    std::vector<std::set<RootIndex>> faces;
    std::set<RootIndex> interior;
  };
  FaceDecomposition faces_of_cone(const std::set<RootIndex>& c) const;

  /// True when f = C cap (supporting hyperplane) for the cone over c.
  bool is_face(const std::set<RootIndex>& c, const std::set<RootIndex>& f) const;

 private:
  friend RootSystem build_root_system(Series, int);
  friend RootSystem build_root_system(const std::string&);
  void finalize();

  std::map<RootVec, RootIndex> index_;
  Polarization std_polarization_;
};

RootSystem build_root_system(Series series, int rank);
RootSystem build_root_system(const std::string& code);

std::string series_name(Series s);

}  // namespace camnet
