#include "camnet/root_system.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace camnet {

std::string series_name(Series s) {
  switch (s) {
    case Series::A: return "A";
    case Series::B: return "B";
    case Series::C: return "C";
    case Series::D: return "D";
    case Series::G: return "G";
  }
  return "?";
}

namespace {

struct CartanData {
  std::vector<std::vector<int>> cartan;  // cartan[i][j] = 2(a_i,a_j)/(a_j,a_j)
  std::vector<Rat> norm2;                // (a_i,a_i)
};

CartanData cartan_data(Series series, int rank) {
  CartanData d;
  auto supported = [&]() {
    switch (series) {
      case Series::A: return rank >= 1 && rank <= 4;
      case Series::B: return rank == 2;
      case Series::C: return rank == 2;
      case Series::D: return rank == 4;
      case Series::G: return rank == 2;
    }
    return false;
  };
  if (!supported())
    throw CamnetError("UnsupportedSeries",
                      series_name(series) + std::to_string(rank) + " is not in the supported set");

  d.cartan.assign(rank, std::vector<int>(rank, 0));
  for (int i = 0; i < rank; ++i) d.cartan[i][i] = 2;

  switch (series) {
    case Series::A:
      for (int i = 0; i + 1 < rank; ++i) d.cartan[i][i + 1] = d.cartan[i + 1][i] = -1;
      d.norm2.assign(rank, Rat(2));
      break;
    case Series::B:  // a1 long, a2 short
      d.cartan[0][1] = -2;
      d.cartan[1][0] = -1;
      d.norm2 = {Rat(4), Rat(2)};
      break;
    case Series::C:  // a1 short, a2 long
      d.cartan[0][1] = -1;
      d.cartan[1][0] = -2;
      d.norm2 = {Rat(2), Rat(4)};
      break;
    case Series::D: {
      // Simple roots (a, b, c, d) with b the central node.
      int hub = 1;
      for (int i = 0; i < rank; ++i)
        if (i != hub) d.cartan[i][hub] = d.cartan[hub][i] = -1;
      d.norm2.assign(rank, Rat(2));
      break;
    }
    case Series::G:  // a short, b long
      d.cartan[0][1] = -1;
      d.cartan[1][0] = -3;
      d.norm2 = {Rat(2), Rat(6)};
      break;
  }
  return d;
}

// Tie-break so that alpha_1 < alpha_2 < ... among equal heights; with this
// order the extraspecial normalization reproduces the usual matrix signs
// (e.g. [E12, E23] = +E13 in type A).
bool lex_less(const RootVec& a, const RootVec& b) { return a > b; }

}  // namespace

Rat RootSystem::pairing(const RootVec& a, const RootVec& b) const {
  // (a_i, a_j) = cartan[i][j] * (a_j,a_j)/2
  Rat s(0);
  for (int i = 0; i < rank; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < rank; ++j) {
      if (b[j] == 0) continue;
      s += Rat(a[i]) * Rat(b[j]) * Rat(cartan[i][j]) * simple_norm2[j] / 2;
    }
  }
  return s;
}

int RootSystem::cartan_int(RootIndex a, RootIndex b) const {
  Rat v = 2 * pairing(a, b) / norm2(a);
  if (!rat_is_integer(v)) throw CamnetError("Internal", "Cartan pairing not integral");
  long n = v.get_num().get_si();
  return static_cast<int>(n);
}

RootIndex RootSystem::reflect(RootIndex a, RootIndex b) const {
  // s_a(b) = b - <b, a^v> a
  int c = cartan_int(a, b);
  RootVec v = roots[b];
  for (int i = 0; i < rank; ++i) v[i] -= c * roots[a][i];
  return index_of_or_throw(v);
}

std::optional<RootIndex> RootSystem::index_of(const RootVec& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

RootIndex RootSystem::index_of_or_throw(const RootVec& v) const {
  auto r = index_of(v);
  if (!r) throw CamnetError("Internal", "vector is not a root");
  return *r;
}

int RootSystem::p_string(RootIndex a, RootIndex b) const {
  int p = 0;
  RootVec v = roots[a];
  while (true) {
    for (int i = 0; i < rank; ++i) v[i] -= roots[b][i];
    if (!index_of(v)) break;
    ++p;
  }
  return p;
}

std::vector<int> RootSystem::coroot(RootIndex g) const {
  // g^v = sum_i a_i (a_i,a_i)/(g,g) alpha_i^v  for g = sum_i a_i alpha_i.
  std::vector<int> out(rank, 0);
  Rat n2 = norm2(g);
  for (int i = 0; i < rank; ++i) {
    Rat c = Rat(roots[g][i]) * simple_norm2[i] / n2;
    if (!rat_is_integer(c)) throw CamnetError("Internal", "coroot not integral");
    out[i] = static_cast<int>(c.get_num().get_si());
  }
  return out;
}

std::vector<RootIndex> RootSystem::apply_word(const std::vector<int>& word) const {
  std::vector<RootIndex> perm(roots.size());
  for (size_t r = 0; r < roots.size(); ++r) perm[r] = static_cast<RootIndex>(r);
  // word applied left to right: w = s_{w1} s_{w2} ... acting as w(x) = s_{w1}(s_{w2}(...x))
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    for (auto& r : perm) r = simple_refl[*it][r];
  return perm;
}

RootIndex RootSystem::apply_word(const std::vector<int>& word, RootIndex r) const {
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = simple_refl[*it][r];
  return r;
}

uint64_t RootSystem::mask_of(const std::set<RootIndex>& s) const {
  uint64_t m = 0;
  for (RootIndex r : s) m |= (uint64_t{1} << r);
  return m;
}

bool RootSystem::is_convex_mask(uint64_t m) const {
  for (uint64_t sys : pos_system_masks)
    if ((m & ~sys) == 0) return true;
  return false;
}

std::optional<Polarization> RootSystem::polarization_containing(const std::set<RootIndex>& s) const {
  uint64_t m = mask_of(s);
  for (size_t wi = 0; wi < weyl.size(); ++wi) {
    if ((m & ~pos_system_masks[wi]) != 0) continue;
    const auto& w = weyl[wi];
    Polarization p;
    p.to_standard.resize(roots.size());
    p.positive.assign(roots.size(), false);
    for (RootIndex q = 0; q < num_roots(); ++q) {
      p.to_standard[w.perm[q]] = q;
      if (is_positive(q)) p.positive[w.perm[q]] = true;
    }
    return p;
  }
  return std::nullopt;
}

bool RootSystem::is_convex(const std::set<RootIndex>& s) const {
  return is_convex_mask(mask_of(s));
}

std::set<RootIndex> RootSystem::restricted_convex_hull(const std::set<RootIndex>& s) const {
  if (!is_convex(s))
    throw CamnetError("NotConvex", "no polarization contains the input set");
  // Additive closure inside Phi equals Conv^N for convex sets.
  std::set<RootIndex> cl = s;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<RootIndex> cur(cl.begin(), cl.end());
    for (size_t i = 0; i < cur.size(); ++i)
      for (size_t j = i; j < cur.size(); ++j) {
        RootVec v = roots[cur[i]];
        for (int k = 0; k < rank; ++k) v[k] += roots[cur[j]][k];
        auto idx = index_of(v);
        if (idx && !cl.count(*idx)) {
          cl.insert(*idx);
          grew = true;
        }
      }
  }
  return cl;
}

int RootSystem::height(const Polarization& p, RootIndex g) const {
  if (!p.positive[g]) throw CamnetError("NegativeRoot", "root is not positive for the polarization");
  return height_std[p.to_standard[g]];
}

namespace {

// Rank of a set of root vectors over Q (fraction-free elimination on ints via Rat).
int rat_rank(std::vector<std::vector<Rat>> m) {
  int rows = static_cast<int>(m.size());
  if (rows == 0) return 0;
  int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][c] != 0) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Rat f = m[r][c] / m[rank][c];
      for (int k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Null space basis of m (columns = rank variables).
std::vector<std::vector<Rat>> rat_nullspace(std::vector<std::vector<Rat>> m, int cols) {
  int rows = static_cast<int>(m.size());
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[i][c] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(m[r], m[piv]);
    Rat d = m[r][c];
    for (int k = 0; k < cols; ++k) m[r][k] /= d;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (int k = 0; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_piv(cols, false);
  for (int c : pivot_col) is_piv[c] = true;
  std::vector<std::vector<Rat>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<Rat> v(cols, Rat(0));
    v[free] = 1;
    for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i) v[pivot_col[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

bool RootSystem::is_face(const std::set<RootIndex>& c, const std::set<RootIndex>& f) const {
  auto d = faces_of_cone(c);
  for (const auto& face : d.faces)
    if (face == f) return true;
  return false;
}

RootSystem::FaceDecomposition RootSystem::faces_of_cone(const std::set<RootIndex>& c) const {
  FaceDecomposition out;
  std::set<std::set<RootIndex>> seen;
  std::vector<std::set<RootIndex>> stack{c};
  std::set<std::set<RootIndex>> proper_of_c;

  while (!stack.empty()) {
    std::set<RootIndex> cur = stack.back();
    stack.pop_back();
    std::vector<RootIndex> v(cur.begin(), cur.end());
    int n = static_cast<int>(v.size());
    if (n == 0) continue;

    // Dimension of span(cur).
    std::vector<std::vector<Rat>> m;
    for (RootIndex r : v) {
      std::vector<Rat> row(rank);
      for (int k = 0; k < rank; ++k) row[k] = Rat(roots[r][k]);
      m.push_back(std::move(row));
    }
    int dim = rat_rank(m);
    if (dim <= 1) continue;  // a ray has no proper nonempty faces

    // Enumerate candidate supporting hyperplanes through (dim-1)-subsets.
    std::vector<int> idx(dim - 1);
    std::vector<bool> select(n, false);
    std::fill(select.begin(), select.begin() + (dim - 1), true);
    std::vector<bool> mask(n, false);
    // iterate over combinations of size dim-1
    std::vector<int> comb;
    std::function<void(int)> rec = [&](int start) {
      if (static_cast<int>(comb.size()) == dim - 1) {
        // normal functionals vanishing on comb within ambient coordinates.
        std::vector<std::vector<Rat>> rows;
        for (int ci : comb) {
          std::vector<Rat> row(rank);
          for (int k = 0; k < rank; ++k) row[k] = Rat(roots[v[ci]][k]);
          rows.push_back(std::move(row));
        }
        auto normals = rat_nullspace(rows, rank);
        for (const auto& phi : normals) {
          // Evaluate phi on all of cur; require one-signed with a zero set != cur.
          int pos = 0, negc = 0;
          std::set<RootIndex> zero;
          for (int i = 0; i < n; ++i) {
            Rat val(0);
            for (int k = 0; k < rank; ++k) val += phi[k] * Rat(roots[v[i]][k]);
            if (val > 0) ++pos;
            else if (val < 0) ++negc;
            else zero.insert(v[i]);
          }
          if (zero.empty() || zero.size() == cur.size()) continue;
          if (pos > 0 && negc > 0) continue;
          if (!seen.count(zero)) {
            seen.insert(zero);
            stack.push_back(zero);
          }
          proper_of_c.insert(zero);
        }
        return;
      }
      for (int i = start; i < n; ++i) {
        comb.push_back(i);
        rec(i + 1);
        comb.pop_back();
      }
    };
    rec(0);
  }

  // proper_of_c currently holds faces found at every recursion level; faces of
  // faces are faces of c, so collect them all (excluding c itself).
  for (const auto& f : proper_of_c)
    if (f != c) out.faces.push_back(f);
  std::sort(out.faces.begin(), out.faces.end(),
            [](const auto& a, const auto& b) { return a.size() < b.size() || (a.size() == b.size() && a < b); });
  out.interior = c;
  for (const auto& f : out.faces)
    for (RootIndex r : f) out.interior.erase(r);
  return out;
}

void RootSystem::finalize() {
  // Generate all roots from the simple ones by reflection closure.
  std::set<RootVec> all;
  std::vector<RootVec> frontier;
  for (int i = 0; i < rank; ++i) {
    RootVec e(rank, 0);
    e[i] = 1;
    all.insert(e);
    frontier.push_back(e);
  }
  auto reflect_vec = [&](const RootVec& b, int i) {
    // s_i(b) = b - (sum_j b_j cartan[j][i]) a_i
    int c = 0;
    for (int j = 0; j < rank; ++j) c += b[j] * cartan[j][i];
    RootVec v = b;
    v[i] -= c;
    return v;
  };
  while (!frontier.empty()) {
    std::vector<RootVec> next;
    for (const auto& b : frontier)
      for (int i = 0; i < rank; ++i) {
        RootVec v = reflect_vec(b, i);
        if (!all.count(v)) {
          all.insert(v);
          next.push_back(v);
        }
      }
    frontier = std::move(next);
  }

  std::vector<RootVec> pos, negv;
  for (const auto& v : all) {
    int h = 0;
    for (int x : v) h += x;
    (h > 0 ? pos : negv).push_back(v);
  }
  auto by_height_lex = [](const RootVec& a, const RootVec& b) {
    int ha = 0, hb = 0;
    for (int x : a) ha += x;
    for (int x : b) hb += x;
    if (ha != hb) return ha < hb;
    return lex_less(a, b);
  };
  std::sort(pos.begin(), pos.end(), by_height_lex);
  roots = pos;
  num_positive = static_cast<int>(pos.size());
  for (const auto& v : pos) {
    RootVec n = v;
    for (auto& x : n) x = -x;
    roots.push_back(n);
  }
  for (RootIndex i = 0; i < num_roots(); ++i) index_[roots[i]] = i;

  negative.resize(roots.size());
  height_std.resize(roots.size());
  for (RootIndex i = 0; i < num_roots(); ++i) {
    RootVec n = roots[i];
    for (auto& x : n) x = -x;
    negative[i] = index_of_or_throw(n);
    int h = 0;
    for (int x : roots[i]) h += x;
    height_std[i] = h;
  }

  simple_refl.assign(rank, {});
  for (int i = 0; i < rank; ++i) {
    simple_refl[i].resize(roots.size());
    for (RootIndex r = 0; r < num_roots(); ++r) {
      RootVec v = reflect_vec(roots[r], i);
      simple_refl[i][r] = index_of_or_throw(v);
    }
  }

  // Full Weyl group by BFS.
  std::map<std::vector<RootIndex>, int> perm_seen;
  WeylElement id;
  id.perm.resize(roots.size());
  for (RootIndex r = 0; r < num_roots(); ++r) id.perm[r] = r;
  weyl.push_back(id);
  perm_seen[id.perm] = 0;
  std::queue<int> bfs;
  bfs.push(0);
  while (!bfs.empty()) {
    int cur = bfs.front();
    bfs.pop();
    for (int i = 0; i < rank; ++i) {
      WeylElement nxt;
      nxt.word = weyl[cur].word;
      nxt.word.push_back(i);
      nxt.perm.resize(roots.size());
      // (w * s_i)(x) = w(s_i(x))
      for (RootIndex r = 0; r < num_roots(); ++r) nxt.perm[r] = weyl[cur].perm[simple_refl[i][r]];
      if (!perm_seen.count(nxt.perm)) {
        perm_seen[nxt.perm] = static_cast<int>(weyl.size());
        bfs.push(static_cast<int>(weyl.size()));
        weyl.push_back(std::move(nxt));
      }
    }
  }

  std_polarization_.to_standard.resize(roots.size());
  std_polarization_.positive.assign(roots.size(), false);
  for (RootIndex r = 0; r < num_roots(); ++r) {
    std_polarization_.to_standard[r] = r;
    std_polarization_.positive[r] = is_positive(r);
  }

  pos_system_masks.resize(weyl.size());
  for (size_t wi = 0; wi < weyl.size(); ++wi) {
    uint64_t m = 0;
    for (RootIndex q = 0; q < num_positive; ++q) m |= (uint64_t{1} << weyl[wi].perm[q]);
    pos_system_masks[wi] = m;
  }

  sum_table.assign(roots.size(), std::vector<RootIndex>(roots.size(), -1));
  for (RootIndex a = 0; a < num_roots(); ++a)
    for (RootIndex b = 0; b < num_roots(); ++b) {
      RootVec v = roots[a];
      for (int i = 0; i < rank; ++i) v[i] += roots[b][i];
      auto idx = index_of(v);
      if (idx) sum_table[a][b] = *idx;
    }
}

RootSystem build_root_system(Series series, int rank) {
  CartanData cd = cartan_data(series, rank);
  RootSystem rs;
  rs.series = series;
  rs.rank = rank;
  rs.code = series_name(series) + std::to_string(rank);
  rs.cartan = cd.cartan;
  rs.simple_norm2 = cd.norm2;
  rs.finalize();
  return rs;
}

RootSystem build_root_system(const std::string& code) {
  if (code.size() != 2) throw CamnetError("UnsupportedSeries", "bad code " + code);
  Series s;
  switch (code[0]) {
    case 'A': s = Series::A; break;
    case 'B': s = Series::B; break;
    case 'C': s = Series::C; break;
    case 'D': s = Series::D; break;
    case 'G': s = Series::G; break;
    default: throw CamnetError("UnsupportedSeries", "bad code " + code);
  }
  return build_root_system(s, code[1] - '0');
}

}  // namespace camnet
