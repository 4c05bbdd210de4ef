#include "camnet/local_system.hpp"

#include <algorithm>

#include "json.hpp"

namespace camnet {

using nlohmann::json;

namespace {

// Crossing parameter of segment (a,b) against the vertical ray up from x:
// returns t in [0,1) with the crossing point, or nothing.
bool crosses_cut(Cplx a, Cplx b, Cplx anchor, double& t, int& dir) {
  double xa = a.real() - anchor.real(), xb = b.real() - anchor.real();
  if ((xa > 0) == (xb > 0)) return false;
  if (xa == xb) return false;
  t = xa / (xa - xb);
  double y = a.imag() + t * (b.imag() - a.imag());
  if (y <= anchor.imag()) return false;
  dir = xb < xa ? +1 : -1;  // westward when Re decreases
  return true;
}

}  // namespace

Eigen::MatrixXcd CutSystem::transport(const std::vector<Cplx>& path) const {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(n, n);
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    // collect crossings on this edge ordered by t
    std::vector<std::pair<double, int>> hits;  // (t, signed cut index+1)
    for (size_t c = 0; c < cuts.size(); ++c) {
      double t;
      int dir;
      if (crosses_cut(path[k], path[k + 1], cuts[c].anchor, t, dir))
        hits.push_back({t, dir * (static_cast<int>(c) + 1)});
    }
    std::sort(hits.begin(), hits.end());
    for (auto [t, s] : hits) {
      int c = std::abs(s) - 1;
      if (s > 0)
        acc = cuts[c].monodromy * acc;
      else
        acc = cuts[c].monodromy.inverse() * acc;
    }
  }
  return acc;
}

Eigen::MatrixXcd CutSystem::loop_monodromy(Cplx c, double r, double a0, bool ccw,
                                           int samples) const {
  std::vector<Cplx> path;
  for (int k = 0; k <= samples; ++k) {
    double th = a0 + (ccw ? 1 : -1) * 2 * M_PI * k / samples;
    path.push_back(c + std::polar(r, th));
  }
  return transport(path);
}

CutSystem cut_system_from_data(const LocalSystemData& data, const Network& net) {
  CutSystem sys;
  GroupRep rep(data.rep);
  sys.n = rep.n();
  auto add = [&](const std::string& name, Cplx anchor) {
    for (const auto& g : data.generators)
      if (g.name == name) {
        if (g.matrix.rows() != sys.n || g.matrix.cols() != sys.n)
          throw CamnetError("InconsistentCoverData", "generator " + name + " has wrong size");
        sys.cuts.push_back({anchor, name, g.matrix});
        return;
      }
    throw CamnetError("InconsistentCoverData", "missing generator " + name);
  };
  for (size_t b = 0; b < net.branch.size(); ++b)
    add("branch:" + std::to_string(b), net.branch[b]);
  size_t pi = 0;
  for (const auto& d : net.discs) {
    if (d.puncture.at_infinity) continue;
    add("puncture:" + std::to_string(pi), d.center);
    ++pi;
  }
  return sys;
}

LocalSystemData data_from_cut_system(const CutSystem& sys, const std::string& rep) {
  LocalSystemData data;
  data.rep = rep;
  for (const auto& c : sys.cuts) data.generators.push_back({c.name, c.monodromy});
  return data;
}

std::vector<int> cut_sheet_permutation(const Network& net, Cplx anchor) {
  const HitchinPoint& h = net.hitchin;
  SheetFrame frame(h, net.base_point, -2.5 * net.working_radius);
  // points just east/west of the cut, above the anchor, clear of other cuts
  double minsep = 1e300;
  for (Cplx b : net.branch)
    if (std::abs(b - anchor) > 1e-12) minsep = std::min(minsep, std::abs(b.real() - anchor.real()));
  for (const auto& d : net.discs)
    if (!d.outside && std::abs(d.center - anchor) > 1e-12)
      minsep = std::min(minsep, std::abs(d.center.real() - anchor.real()));
  double dx = std::min(0.02 * net.domain_scale, 0.3 * minsep);
  double u = 0.3 * net.domain_scale;
  Cplx qe = anchor + Cplx(dx, u), qw = anchor + Cplx(-dx, u);
  std::vector<Cplx> fe = frame.at(qe);
  std::vector<Cplx> fw = frame.at(qw);
  // physical continuation straight across the cut
  std::vector<Cplx> cont = continue_frame(h, qe, qw, fe);
  std::vector<int> perm(fe.size());
  for (size_t k = 0; k < cont.size(); ++k) {
    int best = -1;
    double bd = 1e300;
    for (size_t m = 0; m < fw.size(); ++m)
      if (std::abs(fw[m] - cont[k]) < bd) {
        bd = std::abs(fw[m] - cont[k]);
        best = static_cast<int>(m);
      }
    perm[k] = best;  // sheet k (east frame) becomes sheet perm[k] (west frame)
  }
  return perm;
}

CutSystem pushforward(const Network& net, const AbelianData& data) {
  GroupRep rep(net.hitchin.group);
  int n = rep.n();
  if (data.branch_a.size() != net.branch.size())
    throw CamnetError("InconsistentCoverData", "branch scalar count mismatch");

  CutSystem sys;
  sys.n = n;
  for (size_t b = 0; b < net.branch.size(); ++b) {
    auto perm = cut_sheet_permutation(net, net.branch[b]);
    // must be a transposition of the colliding pair
    int i = -1, j = -1;
    for (int k = 0; k < n; ++k)
      if (perm[k] != k) {
        if (i < 0) i = k;
        else j = k;
      }
    if (i < 0 || j < 0 || perm[i] != j || perm[j] != i)
      throw CamnetError("InconsistentCoverData", "branch cut is not a simple transposition");
    Cplx a = data.branch_a[b];
    if (std::abs(a) == 0.0)
      throw CamnetError("InconsistentCoverData", "branch scalar must be nonzero");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    // crossing westward: sheet i continues into slot j and vice versa;
    // scalars satisfy s_i s_j = -1 so the ramification monodromy is -1.
    m(i, i) = 0;
    m(j, j) = 0;
    m(i, j) = a;           // slot j feeds slot i with scalar a
    m(j, i) = -1.0 / a;
    sys.cuts.push_back({net.branch[b], "branch:" + std::to_string(b), m});
  }
  size_t pi = 0;
  for (const auto& d : net.discs) {
    if (d.puncture.at_infinity) continue;
    if (pi >= data.puncture_s.size())
      throw CamnetError("InconsistentCoverData", "missing puncture scalars");
    const auto& s = data.puncture_s[pi];
    if (static_cast<int>(s.size()) != n)
      throw CamnetError("InconsistentCoverData", "puncture scalar count mismatch");
    auto perm = cut_sheet_permutation(net, d.center);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
      if (std::abs(s[k]) == 0.0)
        throw CamnetError("InconsistentCoverData", "puncture scalar must be nonzero");
      m(perm[k], k) = s[k];
    }
    sys.cuts.push_back({d.center, "puncture:" + std::to_string(pi), m});
    ++pi;
  }
  return sys;
}

std::vector<PathEvent> path_events(const CutSystem& sys, const Network& net,
                                   const std::vector<Cplx>& path, bool include_segments) {
  std::vector<PathEvent> events;
  double arc = 0;
  auto cross2 = [](Cplx a, Cplx b) { return a.real() * b.imag() - a.imag() * b.real(); };
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    Cplx pa = path[k], pb = path[k + 1];
    double elen = std::abs(pb - pa);
    for (size_t c = 0; c < sys.cuts.size(); ++c) {
      double t;
      int dir;
      if (crosses_cut(pa, pb, sys.cuts[c].anchor, t, dir)) {
        PathEvent e;
        e.arc = arc + t * elen;
        e.is_cut = true;
        e.cut_index = static_cast<int>(c);
        e.direction = dir;
        e.position = pa + t * (pb - pa);
        events.push_back(e);
      }
    }
    if (include_segments) {
      for (const auto& seg : net.segments) {
        double sarc = 0;
        for (size_t m = 0; m + 1 < seg.points.size(); ++m) {
          Cplx sa = seg.points[m], sb = seg.points[m + 1];
          double slen = std::abs(sb - sa);
          // bbox reject
          if (std::max(sa.real(), sb.real()) < std::min(pa.real(), pb.real()) ||
              std::max(pa.real(), pb.real()) < std::min(sa.real(), sb.real()) ||
              std::max(sa.imag(), sb.imag()) < std::min(pa.imag(), pb.imag()) ||
              std::max(pa.imag(), pb.imag()) < std::min(sa.imag(), sb.imag())) {
            sarc += slen;
            continue;
          }
          Cplx r = pb - pa, s = sb - sa;
          double den = cross2(r, s);
          if (std::abs(den) > 1e-15) {
            double t = cross2(sa - pa, s) / den;
            double u = cross2(sa - pa, r) / den;
            if (t >= 0 && t < 1 && u >= 0 && u < 1) {
              PathEvent e;
              e.arc = arc + t * elen;
              e.is_cut = false;
              e.segment = seg.id;
              e.seg_arc = sarc + u * slen;
              e.sign = cross2(s, r) > 0 ? +1 : -1;
              e.position = pa + t * r;
              events.push_back(e);
            }
          }
          sarc += slen;
        }
      }
    }
    arc += elen;
  }
  std::sort(events.begin(), events.end(),
            [](const PathEvent& a, const PathEvent& b) { return a.arc < b.arc; });
  return events;
}

namespace {

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd matrix_from(const json& j) {
  int rows = static_cast<int>(j.size());
  int cols = rows ? static_cast<int>(j.at(0).size()) : 0;
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k)
      m(i, k) = Cplx(j.at(i).at(k).at(0).get<double>(), j.at(i).at(k).at(1).get<double>());
  return m;
}

}  // namespace

std::string local_system_json(const LocalSystemData& data) {
  json root;
  root["schema"] = "camnet/1";
  root["rep"] = data.rep;
  root["relationTolerance"] = data.relation_tolerance;
  root["convention"] = data.convention;
  json gens = json::array();
  for (const auto& g : data.generators)
    gens.push_back(json{{"name", g.name}, {"matrix", matrix_json(g.matrix)}});
  root["generators"] = gens;
  return root.dump(1);
}

LocalSystemData load_local_system_json(const std::string& text) {
  json root = json::parse(text);
  LocalSystemData data;
  data.rep = root.at("rep").get<std::string>();
  if (root.contains("relationTolerance"))
    data.relation_tolerance = root.at("relationTolerance").get<double>();
  if (root.contains("convention")) data.convention = root.at("convention").get<std::string>();
  for (const auto& g : root.at("generators"))
    data.generators.push_back(
        {g.at("name").get<std::string>(), matrix_from(g.at("matrix"))});
  return data;
}

}  // namespace camnet
