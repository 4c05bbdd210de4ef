#include "camnet/tracer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace camnet {

namespace {

// Dormand-Prince 5(4) coefficients.
const double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
const double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
const double kB5[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
const double kB4[7] = {5179.0 / 57600, 0,           7571.0 / 16695, 393.0 / 640,
                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct PairTracker {
  Cplx li, lj;

  // Continue the tracked pair to the eigenvalues at z; false when matching
  // is ambiguous (gap does not dominate the move).
  bool advance(const HitchinPoint& h, Cplx z, Cplx& oli, Cplx& olj) const {
    std::vector<Cplx> lam = h.eigenvalues(z);
    int bi = -1, bj = -1;
    double di = 1e300, dj = 1e300;
    for (size_t k = 0; k < lam.size(); ++k) {
      double d = std::abs(lam[k] - li);
      if (d < di) { di = d; bi = static_cast<int>(k); }
    }
    for (size_t k = 0; k < lam.size(); ++k) {
      if (static_cast<int>(k) == bi) continue;
      double d = std::abs(lam[k] - lj);
      if (d < dj) { dj = d; bj = static_cast<int>(k); }
    }
    if (bi < 0 || bj < 0) return false;
    double gap = std::abs(lam[bi] - lam[bj]);
    if (10 * std::max(di, dj) > gap) return false;
    oli = lam[bi];
    olj = lam[bj];
    return true;
  }
};

}  // namespace

RootIndex root_of_pair(const RootSystem& rs_a, int i, int j) {
  // eps_i - eps_j in A_{n-1}: coordinates are e_i - e_j partial sums.
  int rank = rs_a.rank;
  RootVec v(rank, 0);
  // eps_i - eps_j = sum_{k=min}^{max-1} +-alpha_k  (1-based sheets)
  if (i < j)
    for (int k = i; k < j; ++k) v[k - 1] += 1;
  else
    for (int k = j; k < i; ++k) v[k - 1] -= 1;
  return rs_a.index_of_or_throw(v);
}

std::vector<CurveSegment> primary_curves(const Network& net, int branch_index,
                                         const TraceConfig& cfg) {
  const HitchinPoint& h = net.hitchin;
  Cplx b = net.branch[branch_index];
  double r_seed = cfg.seed_radius_factor * net.domain_scale;

  // Identify the colliding pair and the cube-root phase from a probe point.
  auto probe_pair = [&](Cplx z) -> std::pair<Cplx, Cplx> {
    std::vector<Cplx> lam = h.eigenvalues(z);
    size_t pi = 0, pj = 1;
    double best = 1e300;
    for (size_t x = 0; x < lam.size(); ++x)
      for (size_t y = x + 1; y < lam.size(); ++y)
        if (std::abs(lam[x] - lam[y]) < best) {
          best = std::abs(lam[x] - lam[y]);
          pi = x;
          pj = y;
        }
    return {lam[pi], lam[pj]};
  };

  auto [l1, l2] = probe_pair(b + r_seed);
  Cplx c_est = (l1 - l2) / std::sqrt(Cplx(r_seed));
  double A = std::arg(c_est);

  std::vector<CurveSegment> out;
  for (int k = 0; k < 3; ++k) {
    double theta = (-2.0 * A / 3.0) + 2.0 * M_PI * k / 3.0;
    Cplx z0 = b + std::polar(r_seed, theta);
    auto [m1, m2] = probe_pair(z0);
    // Orient the pair so that (lam_i - lam_j) dz is real-positive outward.
    Cplx dir = std::polar(1.0, theta);
    if (((m1 - m2) * dir).real() < 0) std::swap(m1, m2);
    CurveSegment seg;
    seg.origin_branch = branch_index;
    seg.points = {z0};
    seg.lam_i = {m1};
    seg.lam_j = {m2};
    out.push_back(std::move(seg));
  }
  return out;
}

void trace_trajectory(const Network& net, CurveSegment& seg, const TraceConfig& cfg) {
  const HitchinPoint& h = net.hitchin;
  if (seg.status != CurveSegment::Status::Active) return;

  double scale = net.domain_scale;
  double eps_bp = cfg.eps_bp_factor * scale;
  double len_cap = cfg.length_cap_factor * 2 * net.working_radius;
  double h_max_base = cfg.max_step_factor * scale;

  Cplx z = seg.points.back();
  PairTracker trk{seg.lam_i.back(), seg.lam_j.back()};
  double step = h_max_base / 8;
  double guard = seg.origin_branch >= 0 ? 3 * std::abs(z - net.branch[seg.origin_branch]) : 0;

  auto field = [&](Cplx at, const PairTracker& t, Cplx& f, PairTracker& tn) -> bool {
    Cplx li, lj;
    if (!t.advance(h, at, li, lj)) return false;
    Cplx d = li - lj;
    double n = std::abs(d);
    if (n == 0) return false;
    f = std::conj(d) / n;
    tn.li = li;
    tn.lj = lj;
    return true;
  };

  int retries = 0;
  while (seg.status == CurveSegment::Status::Active) {
    // step-size ceiling near branch points and discs
    double ceil_step = h_max_base;
    for (Cplx b : net.branch) ceil_step = std::min(ceil_step, 0.3 * std::abs(z - b) + eps_bp / 4);
    step = std::min(step, ceil_step);

    Cplx kst[7];
    PairTracker tcur = trk, tk;
    bool ok = true;
    Cplx f0;
    if (!field(z, trk, f0, tcur)) ok = false;
    kst[0] = f0;
    Cplx z5 = z, z4 = z;
    if (ok) {
      for (int s = 1; s < 7 && ok; ++s) {
        Cplx zs = z;
        for (int q = 0; q < s; ++q) zs += step * kA[s][q] * kst[q];
        Cplx fs;
        if (!field(zs, trk, fs, tk)) { ok = false; break; }
        kst[s] = fs;
      }
      if (ok) {
        for (int s = 0; s < 7; ++s) {
          z5 += step * kB5[s] * kst[s];
          z4 += step * kB4[s] * kst[s];
        }
      }
    }
    double err = ok ? std::abs(z5 - z4) : 1e300;
    double tol = cfg.rel_tol * (scale + std::abs(z));
    if (!ok || err > tol) {
      step /= 2;
      if (++retries > 60) {
        seg.status = CurveSegment::Status::SheetTrackingLost;
        return;
      }
      continue;
    }
    retries = 0;

    // accept
    PairTracker tnew;
    Cplx fend;
    if (!field(z5, trk, fend, tnew)) {
      step /= 2;
      continue;
    }
    // phase residual |Im(lambda_ij zdot)| / |lambda_ij| at the accepted point
    Cplx lij = tnew.li - tnew.lj;
    double resid = std::abs((lij * fend).imag()) / std::abs(lij);
    seg.max_phase_residual = std::max(seg.max_phase_residual, resid);

    seg.arc_length += std::abs(z5 - z);
    z = z5;
    trk = tnew;
    seg.points.push_back(z);
    seg.lam_i.push_back(trk.li);
    seg.lam_j.push_back(trk.lj);
    if (err < tol / 16) step = std::min(step * 2, h_max_base);

    // termination checks
    if (seg.arc_length > guard) {
      for (size_t b = 0; b < net.branch.size(); ++b) {
        if (std::abs(z - net.branch[b]) < eps_bp) {
          seg.status = CurveSegment::Status::ErrorRanIntoBranchPoint;
          return;
        }
      }
    }
    for (size_t d = 0; d < net.discs.size(); ++d) {
      const auto& disc = net.discs[d];
      bool inside = disc.outside ? std::abs(z) > disc.radius
                                 : std::abs(z - disc.center) < disc.radius;
      if (inside) {
        seg.status = CurveSegment::Status::EndedAtDisc;
        seg.end_disc = static_cast<int>(d);
        return;
      }
    }
    if (std::abs(z) > net.working_radius) {
      seg.status = CurveSegment::Status::ErrorLeftChart;
      return;
    }
    if (seg.arc_length > len_cap) {
      seg.status = CurveSegment::Status::ErrorDense;
      return;
    }
  }
}

std::vector<RawIntersection> polyline_intersections(const Network& net, double eps_merge) {
  std::vector<RawIntersection> raw;
  // bounding-box chunked edge tests
  struct Edge {
    int seg;
    size_t k;
    Cplx a, b;
    double arc0;
  };
  std::vector<Edge> edges;
  for (const auto& s : net.segments) {
    double arc = 0;
    for (size_t k = 0; k + 1 < s.points.size(); ++k) {
      edges.push_back({s.id, k, s.points[k], s.points[k + 1], arc});
      arc += std::abs(s.points[k + 1] - s.points[k]);
    }
  }
  auto cross = [](Cplx a, Cplx b) { return a.real() * b.imag() - a.imag() * b.real(); };
  for (size_t e1 = 0; e1 < edges.size(); ++e1)
    for (size_t e2 = e1 + 1; e2 < edges.size(); ++e2) {
      const Edge& A = edges[e1];
      const Edge& B = edges[e2];
      if (A.seg == B.seg) continue;  // self-intersections happen only inside discs
      // bbox reject
      if (std::max(A.a.real(), A.b.real()) < std::min(B.a.real(), B.b.real())) continue;
      if (std::max(B.a.real(), B.b.real()) < std::min(A.a.real(), A.b.real())) continue;
      if (std::max(A.a.imag(), A.b.imag()) < std::min(B.a.imag(), B.b.imag())) continue;
      if (std::max(B.a.imag(), B.b.imag()) < std::min(A.a.imag(), A.b.imag())) continue;
      Cplx r = A.b - A.a, s = B.b - B.a;
      double den = cross(r, s);
      if (std::abs(den) < 1e-14 * std::abs(r) * std::abs(s)) continue;  // near-parallel
      double t = cross(B.a - A.a, s) / den;
      double u = cross(B.a - A.a, r) / den;
      if (t < -1e-9 || t > 1 + 1e-9 || u < -1e-9 || u > 1 + 1e-9) continue;
      RawIntersection hit;
      hit.position = A.a + t * r;
      hit.seg_a = A.seg;
      hit.seg_b = B.seg;
      hit.arc_a = A.arc0 + t * std::abs(r);
      hit.arc_b = B.arc0 + u * std::abs(s);
      raw.push_back(hit);
    }
  (void)eps_merge;
  return raw;
}

namespace {

// Eigenpair values of a segment at arc parameter `arc` (nearest point).
void pair_at_arc(const CurveSegment& s, double arc, Cplx& li, Cplx& lj, Cplx& tangent) {
  size_t best = 0;
  double bestd = 1e300;
  double a = 0;
  for (size_t k = 0; k + 1 < s.points.size(); ++k) {
    double len = std::abs(s.points[k + 1] - s.points[k]);
    double mid = a + len / 2;
    if (std::abs(mid - arc) < bestd) {
      bestd = std::abs(mid - arc);
      best = k;
    }
    a += len;
  }
  li = s.lam_i[best];
  lj = s.lam_j[best];
  tangent = s.tangent_at(best);
}

}  // namespace

Network build_network(const HitchinPoint& h, const TraceConfig& cfg) {
  Network net;
  net.hitchin = h;

  // domain scale and working radius from the special points
  double sc = 1.0;
  net.branch = branch_points(h);
  for (Cplx b : net.branch) sc = std::max(sc, std::abs(b));
  for (const auto& p : h.punctures) sc = std::max(sc, std::abs(p.to_complex()));
  net.domain_scale = sc;
  net.working_radius = cfg.working_radius > 0 ? cfg.working_radius : 4.0 * sc;
  net.base_point = Cplx(1.25 * net.working_radius, 0);

  // truncation discs at finite punctures; infinity handled by the chart circle
  for (const auto& p : h.punctures) {
    PunctureId id{false, p};
    double r0 = net.working_radius;
    Cplx c = p.to_complex();
    for (const auto& q : h.punctures)
      if (std::abs(q.to_complex() - c) > 1e-12)
        r0 = std::min(r0, std::abs(q.to_complex() - c) / 2);
    for (Cplx b : net.branch) r0 = std::min(r0, std::abs(b - c) / 2);
    DiscRecord d;
    d.puncture = id;
    d.center = c;
    d.radius = truncation_disc(h, id, r0, cfg.max_dev_disc);
    net.discs.push_back(d);
  }
  if (h.puncture_at_infinity) {
    DiscRecord d;
    d.puncture.at_infinity = true;
    d.center = 0;
    d.radius = net.working_radius;
    d.outside = true;
    net.discs.push_back(d);
  }

  // primaries
  for (size_t b = 0; b < net.branch.size(); ++b) {
    auto prim = primary_curves(net, static_cast<int>(b), cfg);
    for (auto& s : prim) {
      s.id = static_cast<int>(net.segments.size());
      s.birth_iteration = 0;
      net.segments.push_back(std::move(s));
    }
  }

  double eps_merge = cfg.eps_merge_factor * net.domain_scale;
  double seed_off = 4 * eps_merge;

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    for (auto& s : net.segments) trace_trajectory(net, s, cfg);

    auto raw = polyline_intersections(net, eps_merge);
    // drop hits at curve origins and inside discs
    std::vector<RawIntersection> hits;
    for (const auto& r : raw) {
      if (r.arc_a < seed_off || r.arc_b < seed_off) continue;
      bool indisc = false;
      for (const auto& d : net.discs) {
        bool inside = d.outside ? std::abs(r.position) > d.radius * 0.999
                                : std::abs(r.position - d.center) < d.radius * 1.001;
        if (inside) indisc = true;
      }
      if (indisc) continue;
      hits.push_back(r);
    }

    // coalesce into joints (existing ones included)
    bool any_new = false;
    for (const auto& hit : hits) {
      int jid = -1;
      for (auto& j : net.joints)
        if (std::abs(j.position - hit.position) < eps_merge) jid = j.id;
      if (jid < 0) {
        JointRecord j;
        j.id = static_cast<int>(net.joints.size());
        j.position = hit.position;
        j.iteration = iter;
        net.joints.push_back(j);
        jid = j.id;
        any_new = true;
      }
      JointRecord& j = net.joints[jid];
      for (int which = 0; which < 2; ++which) {
        int segid = which == 0 ? hit.seg_a : hit.seg_b;
        double arc = which == 0 ? hit.arc_a : hit.arc_b;
        bool seen = false;
        for (const auto& inc : j.rays)
          if (inc.segment == segid && !inc.new_curve) seen = true;
        if (seen) continue;
        const CurveSegment& s = net.segments[segid];
        Cplx li, lj, tang;
        pair_at_arc(s, arc, li, lj, tang);
        JointIncidence in_ray;
        in_ray.segment = segid;
        in_ray.incoming = true;
        in_ray.angle = std::arg(-tang);
        in_ray.lam_i = li;
        in_ray.lam_j = lj;
        in_ray.arc_param = arc;
        j.rays.push_back(in_ray);
        JointIncidence out_ray = in_ray;
        out_ray.incoming = false;
        out_ray.angle = std::arg(tang);
        j.rays.push_back(out_ray);
        j.spawned = false;
      }
    }

    // spawn new curves at joints
    for (auto& j : net.joints) {
      if (j.spawned) continue;
      j.spawned = true;
      std::vector<Cplx> frame = h.eigenvalues(j.position);
      auto sheet_of = [&](Cplx v) {
        int best = -1;
        double bd = 1e300;
        for (size_t k = 0; k < frame.size(); ++k)
          if (std::abs(frame[k] - v) < bd) {
            bd = std::abs(frame[k] - v);
            best = static_cast<int>(k);
          }
        return best;
      };
      // incoming index pairs in the local frame
      std::set<std::pair<int, int>> in_pairs, present;
      std::vector<Cplx> in_tangents;
      for (const auto& inc : j.rays)
        if (inc.incoming) {
          in_pairs.insert({sheet_of(inc.lam_i), sheet_of(inc.lam_j)});
          in_tangents.push_back(std::polar(1.0, inc.angle + M_PI));
        }
      present = in_pairs;
      // convexity in A_{n-1}
      const RootSystem& rs_a = build_root_system("A" + std::to_string(h.n - 1));
      std::set<RootIndex> in_roots;
      for (auto [i, jj] : in_pairs) in_roots.insert(root_of_pair(rs_a, i + 1, jj + 1));
      if (!rs_a.is_convex(in_roots)) {
        j.nonconvex_error = true;
        net.errors.push_back("NonConvexJoint at joint " + std::to_string(j.id));
        continue;
      }
      auto hull = rs_a.restricted_convex_hull(in_roots);
      for (RootIndex r : hull) {
        if (in_roots.count(r)) continue;
        // recover the sheet pair of this root: eps_i - eps_j
        int i = -1, jj = -1;
        for (int x = 0; x < h.n && i < 0; ++x)
          for (int y = 0; y < h.n; ++y)
            if (x != y && root_of_pair(rs_a, x + 1, y + 1) == r) {
              i = x;
              jj = y;
              break;
            }
        Cplx lij = frame[i] - frame[jj];
        if (std::abs(lij) < 1e-14) continue;
        Cplx dir = std::conj(lij) / std::abs(lij);
        CurveSegment seg;
        seg.id = static_cast<int>(net.segments.size());
        seg.origin_joint = j.id;
        seg.birth_iteration = iter;
        Cplx z0 = j.position + dir * (seed_off / 2);
        std::vector<Cplx> lam0 = h.eigenvalues(z0);
        auto s0 = [&](Cplx v) {
          int best = 0;
          double bd = 1e300;
          for (size_t k = 0; k < lam0.size(); ++k)
            if (std::abs(lam0[k] - v) < bd) {
              bd = std::abs(lam0[k] - v);
              best = static_cast<int>(k);
            }
          return lam0[best];
        };
        seg.points = {z0};
        seg.lam_i = {s0(frame[i])};
        seg.lam_j = {s0(frame[jj])};
        JointIncidence born;
        born.segment = seg.id;
        born.incoming = false;
        born.new_curve = true;
        born.angle = std::arg(dir);
        born.lam_i = frame[i];
        born.lam_j = frame[jj];
        born.arc_param = 0;
        j.rays.push_back(born);
        net.segments.push_back(std::move(seg));
        any_new = true;
      }
    }

    bool active_left = false;
    for (const auto& s : net.segments)
      if (s.status == CurveSegment::Status::Active) active_left = true;
    if (!any_new && !active_left) break;
    if (iter == cfg.max_iterations && (any_new || active_left))
      net.errors.push_back("iteration cap reached");
  }

  for (const auto& s : net.segments) {
    switch (s.status) {
      case CurveSegment::Status::ErrorRanIntoBranchPoint:
        net.errors.push_back("segment " + std::to_string(s.id) + " ran into a branch point");
        break;
      case CurveSegment::Status::ErrorDense:
        net.errors.push_back("segment " + std::to_string(s.id) + " hit the length cap");
        break;
      case CurveSegment::Status::SheetTrackingLost:
        net.errors.push_back("segment " + std::to_string(s.id) + " lost sheet tracking");
        break;
      default:
        break;
    }
  }

  if (!topological_order(net)) net.errors.push_back("network graph has an oriented cycle");
  return net;
}

}  // namespace camnet
