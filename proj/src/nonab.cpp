#include "camnet/nonab.hpp"

#include <algorithm>

#include "camnet/scattering.hpp"

namespace camnet {

namespace {

double mat_dev(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& ref) {
  return (m - ref).cwiseAbs().maxCoeff();
}

// Sub-polyline of a segment from arc a0 to arc a1 (a0 <= a1).
std::vector<Cplx> sub_polyline(const CurveSegment& seg, double a0, double a1) {
  std::vector<Cplx> out;
  double arc = 0;
  for (size_t k = 0; k + 1 < seg.points.size(); ++k) {
    Cplx pa = seg.points[k], pb = seg.points[k + 1];
    double len = std::abs(pb - pa);
    double lo = arc, hi = arc + len;
    if (hi >= a0 && lo <= a1 && len > 0) {
      double t0 = std::clamp((a0 - lo) / len, 0.0, 1.0);
      double t1 = std::clamp((a1 - lo) / len, 0.0, 1.0);
      Cplx q0 = pa + t0 * (pb - pa), q1 = pa + t1 * (pb - pa);
      if (out.empty()) out.push_back(q0);
      out.push_back(q1);
    }
    arc += len;
  }
  if (out.empty()) out.push_back(seg.points.front());
  return out;
}

double segment_length(const CurveSegment& seg) {
  double arc = 0;
  for (size_t k = 0; k + 1 < seg.points.size(); ++k) arc += std::abs(seg.points[k + 1] - seg.points[k]);
  return arc;
}

// Global sheet frame at z.
std::vector<Cplx> global_frame(const Network& net, Cplx z) {
  SheetFrame frame(net.hitchin, net.base_point, -2.5 * net.working_radius);
  return frame.at(z);
}

int nearest_index(const std::vector<Cplx>& frame, Cplx v) {
  int best = -1;
  double bd = 1e300;
  for (size_t k = 0; k < frame.size(); ++k)
    if (std::abs(frame[k] - v) < bd) {
      bd = std::abs(frame[k] - v);
      best = static_cast<int>(k);
    }
  return best;
}

}  // namespace

std::vector<Cplx> circle_path(Cplx center, double radius, double a0, double sweep, int samples) {
  std::vector<Cplx> out;
  for (int k = 0; k <= samples; ++k)
    out.push_back(center + std::polar(radius, a0 + sweep * k / samples));
  return out;
}

Eigen::MatrixXcd StokesAssignment::at_arc(const CutSystem& sys, const CurveSegment& seg,
                                          double arc) const {
  auto it = factor.find(seg.id);
  if (it == factor.end())
    throw CamnetError("Internal", "no factor for segment " + std::to_string(seg.id));
  Eigen::MatrixXcd t = sys.transport(sub_polyline(seg, 0, arc));
  return t * it->second * t.inverse();
}

SMonodromyReport check_S_monodromy(const CutSystem& sys, const Network& net, double tol) {
  SMonodromyReport rep;
  for (size_t b = 0; b < net.branch.size(); ++b) {
    SMonodromyReport::Entry e;
    e.branch = static_cast<int>(b);
    const Eigen::MatrixXcd* m = nullptr;
    for (const auto& c : sys.cuts)
      if (c.name == "branch:" + std::to_string(b)) m = &c.monodromy;
    if (!m) {
      e.pass = false;
      rep.entries.push_back(e);
      rep.pass = false;
      continue;
    }
    auto perm = cut_sheet_permutation(net, net.branch[b]);
    int i = -1, j = -1;
    for (int k = 0; k < sys.n; ++k)
      if (perm[k] != k) {
        if (i < 0) i = k;
        else j = k;
      }
    if (i < 0 || j < 0 || perm[i] != j || perm[j] != i) {
      e.pass = false;
      rep.entries.push_back(e);
      rep.pass = false;
      continue;
    }
    e.sheet_i = i;
    e.sheet_j = j;
    // expected shape: identity off the pair, [[0,a],[-1/a,0]] on it
    double worst = 0;
    for (int r = 0; r < sys.n; ++r)
      for (int c = 0; c < sys.n; ++c) {
        bool in_block = (r == i || r == j) && (c == i || c == j);
        if (!in_block) {
          Cplx want = (r == c) ? 1.0 : 0.0;
          worst = std::max(worst, std::abs((*m)(r, c) - want));
        }
      }
    worst = std::max(worst, std::abs((*m)(i, i)));
    worst = std::max(worst, std::abs((*m)(j, j)));
    Cplx a = (*m)(i, j);
    if (std::abs(a) < tol) {
      e.pass = false;
      e.worst = 1;
      rep.entries.push_back(e);
      rep.pass = false;
      continue;
    }
    worst = std::max(worst, std::abs((*m)(j, i) + 1.0 / a));
    e.a = a;
    e.worst = worst;
    e.pass = worst < tol;
    rep.entries.push_back(e);
    rep.pass = rep.pass && e.pass;
  }
  return rep;
}

PrimaryTriple primary_factors(const Eigen::MatrixXcd& m, int i, int j, int sqrt_branch) {
  int n = static_cast<int>(m.rows());
  Cplx a = m(i, j);
  if (std::abs(a) == 0.0) throw CamnetError("BadShape", "vanishing block entry");
  // In the block, m = n_alpha t with t = diag(1/a, a); the factors are
  // Ad_{t^{-1/2}} exp(-e_{+-alpha}).
  Cplx t = 1.0 / a;
  Cplx sq = std::sqrt(t);
  if (sqrt_branch < 0) sq = -sq;
  PrimaryTriple out;
  out.u_alpha = Eigen::MatrixXcd::Identity(n, n);
  out.u_minus_alpha = Eigen::MatrixXcd::Identity(n, n);
  // Ad_{diag(sq,1/sq)^{-1}} exp(-E_ij) = I - (1/sq^2)^{-1}... explicitly:
  // conj by diag(1/sq, sq): E_ij scales by (1/sq)/sq = 1/sq^2 = 1/t = a...
  // u_alpha = I - (1/t) * t-scaling: keep the direct form I - a E_ij? The
  // scaling: diag(d_i, d_j) E_ij diag(d_i,d_j)^{-1} = (d_i/d_j) E_ij with
  // d = (sq^{-1}, sq): d_i/d_j = 1/sq^2 = 1/t = a.
  out.u_alpha(i, j) = -a;
  out.u_minus_alpha(j, i) = 1.0 / a;
  return out;
}

namespace {

struct JointRayData {
  double angle;
  bool incoming;
  int segment;
  double seg_arc;
  RootIndex root;   // in A_{n-1}, via the global frame at the joint
  bool new_curve;
};

// The clockwise scattering diagram of a joint, with factor extraction and
// attachment handled by the caller.
std::vector<JointRayData> joint_rays(const GroupRep& rep, const Network& net,
                                     const JointRecord& joint) {
  std::vector<Cplx> frame = global_frame(net, joint.position);
  std::vector<JointRayData> out;
  for (const auto& inc : joint.rays) {
    JointRayData r;
    r.angle = inc.angle;
    r.incoming = inc.incoming;
    r.segment = inc.segment;
    r.seg_arc = inc.arc_param;
    r.new_curve = inc.new_curve;
    int i = nearest_index(frame, inc.lam_i);
    int j = nearest_index(frame, inc.lam_j);
    if (i == j) throw CamnetError("SheetTrackingLost", "degenerate pair at a joint");
    r.root = rep.root_of_pair(i, j);
    out.push_back(r);
  }
  // clockwise order: descending standard angle
  std::sort(out.begin(), out.end(),
            [](const JointRayData& a, const JointRayData& b) { return a.angle > b.angle; });
  return out;
}

}  // namespace

StokesAssignment assign_all_factors(const CutSystem& sys, const Network& net, PrimaryRule rule) {
  GroupRep rep(net.hitchin.group);
  StokesAssignment sf;

  // F0: primaries per branch point.
  for (size_t b = 0; b < net.branch.size(); ++b) {
    std::vector<const CurveSegment*> prim;
    for (const auto& s : net.segments)
      if (s.origin_branch == static_cast<int>(b)) prim.push_back(&s);
    if (prim.size() != 3)
      throw CamnetError("BadShape", "branch point without three primary curves");

    if (rule == PrimaryRule::PathDetour) {
      for (const auto* s : prim) sf.factor[s->id] = path_detour_factor(sys, net, s->id);
      continue;
    }

    Cplx p = net.branch[b];
    double r_seed = std::abs(prim[0]->points[0] - p);
    // crossing order counterclockwise from the marked point at the bottom
    std::vector<std::pair<double, const CurveSegment*>> order;
    for (const auto* s : prim) {
      double phi = std::arg(s->points[0] - p) + M_PI / 2;  // 0 at the marked point
      while (phi < 0) phi += 2 * M_PI;
      while (phi >= 2 * M_PI) phi -= 2 * M_PI;
      order.push_back({phi, s});
    }
    std::sort(order.begin(), order.end());

    const Eigen::MatrixXcd* m = nullptr;
    for (const auto& c : sys.cuts)
      if (c.name == "branch:" + std::to_string(b)) m = &c.monodromy;
    if (!m) throw CamnetError("BadShape", "missing branch generator");

    // the first crossed curve fixes alpha through its own oriented pair
    const CurveSegment* first = order[0].second;
    std::vector<Cplx> frame = global_frame(net, first->points[0]);
    int fi = nearest_index(frame, first->lam_i[0]);
    int fj = nearest_index(frame, first->lam_j[0]);
    if (std::abs((*m)(fi, fj)) == 0.0)
      throw CamnetError("BadShape", "branch block does not match the first curve's pair");
    PrimaryTriple triple = primary_factors(*m, fi, fj);

    for (int k = 0; k < 3; ++k) {
      const CurveSegment* s = order[k].second;
      Eigen::MatrixXcd u = (k == 1) ? triple.u_minus_alpha : triple.u_alpha;
      // express the factor at the curve's seed: conjugate by the transport
      // along the circle arc from the marked point
      std::vector<Cplx> arc = circle_path(p, r_seed, -M_PI / 2, order[k].first, 64);
      Eigen::MatrixXcd t = sys.transport(arc);
      sf.factor[s->id] = t * u * t.inverse();
    }
  }

  // joints in topological order
  for (int jid : net.joint_order) {
    const JointRecord& joint = net.joints[jid];
    if (joint.nonconvex_error)
      throw CamnetError("NonConvexJoint", "joint " + std::to_string(jid));
    auto rays = joint_rays(rep, net, joint);

    // distinct tangent directions
    for (size_t x = 0; x < rays.size(); ++x)
      for (size_t y = x + 1; y < rays.size(); ++y) {
        double d = std::abs(std::fmod(rays[x].angle - rays[y].angle + 3 * M_PI, 2 * M_PI) - M_PI);
        if (d < 1e-7)
          throw CamnetError("NonConvexJoint", "coincident tangent rays at a joint");
      }

    std::vector<Ray> drays;
    Decoration<GaussRat> incoming;
    std::vector<Cplx> frame = global_frame(net, joint.position);
    for (size_t k = 0; k < rays.size(); ++k) {
      Ray r;
      r.pos = rat_canon(static_cast<long>(k), static_cast<long>(rays.size()));
      r.dir = rays[k].incoming ? RayDir::In : RayDir::Out;
      r.root = rays[k].root;
      drays.push_back(r);
      if (rays[k].incoming) {
        const CurveSegment& seg = net.segments[rays[k].segment];
        Eigen::MatrixXcd f = sf.at_arc(sys, seg, rays[k].seg_arc);
        // transport from the crossing point to the joint is trivial along
        // the curve's own tail; read the single root coefficient
        auto [pi, pj] = rep.pair_of_root(rays[k].root);
        Cplx coeff = f(pi, pj);
        double off = mat_dev(rep.exp_root(rays[k].root, coeff * (rep.rootsys().is_positive(rays[k].root) ? 1.0 : -1.0)), f);
        if (off > 1e-6)
          throw CamnetError("TransportInconsistent",
                            "incoming factor is not a single-root unipotent");
        // exp_root multiplies by the sign; store the root-space coordinate
        Cplx x = rep.rootsys().is_positive(rays[k].root) ? coeff : -coeff;
        incoming.coeff[k] = GaussRat::from_complex(x);
      }
    }
    ScatteringDiagram diagram(rep.table(), drays);
    auto solved = solve(diagram, incoming);

    for (size_t k = 0; k < rays.size(); ++k) {
      if (rays[k].incoming) continue;
      GaussRat x = solved.coeff.count(k) ? solved.coeff.at(k) : GaussRat(0);
      if (rays[k].new_curve) {
        const CurveSegment& seg = net.segments[rays[k].segment];
        Eigen::MatrixXcd f = rep.exp_root(rays[k].root, x.to_complex());
        // re-reference from the joint to the segment's first point
        std::vector<Cplx> hop = {joint.position, seg.points[0]};
        Eigen::MatrixXcd t = sys.transport(hop);
        sf.factor[seg.id] = t * f * t.inverse();
      } else {
        // continuation: the unique solution keeps the incoming factor
        for (size_t q = 0; q < rays.size(); ++q)
          if (rays[q].incoming && rays[q].segment == rays[k].segment) {
            GaussRat in_x = incoming.coeff.count(q) ? incoming.coeff.at(q) : GaussRat(0);
            if (!(in_x == x))
              throw CamnetError("Internal", "continuation factor changed across a joint");
          }
      }
    }
  }
  return sf;
}

Eigen::MatrixXcd reglue_loop(const CutSystem& sys, const Network& net,
                             const StokesAssignment& sf, Cplx center, double radius,
                             int samples) {
  // keep the seam of the loop away from the curves and from every crossing
  auto dist_to_network = [&](Cplx z) {
    double best = 1e300;
    for (const auto& seg : net.segments)
      for (size_t k = 0; k + 1 < seg.points.size(); ++k) {
        Cplx a = seg.points[k], b = seg.points[k + 1];
        Cplx ab = b - a;
        double len2 = std::norm(ab);
        double t = len2 > 0 ? std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, std::abs(z - (a + t * ab)));
      }
    for (const auto& c : sys.cuts) {
      if (z.imag() > c.anchor.imag()) best = std::min(best, std::abs(z.real() - c.anchor.real()));
      best = std::min(best, std::abs(z - c.anchor));
    }
    return best;
  };
  for (int attempt = 0; attempt < 32; ++attempt) {
    double a0 = -M_PI / 2 + 0.39 * attempt;
    Cplx seam = center + std::polar(radius, a0);
    if (dist_to_network(seam) < 1e-3 * radius) continue;
    auto loop = circle_path(center, radius, a0, 2 * M_PI, samples);
    auto events = path_events(sys, net, loop, true);
    double total = 0;
    for (size_t k = 0; k + 1 < loop.size(); ++k) total += std::abs(loop[k + 1] - loop[k]);
    bool bad = false;
    for (const auto& e : events)
      if (e.arc < 1e-3 * total || e.arc > (1 - 1e-3) * total) bad = true;
    if (!bad) return reglue_transport(sys, net, sf, loop);
  }
  throw CamnetError("PathTouchesNetworkVertex", "no seam-safe loop start found");
}

Eigen::MatrixXcd reglue_transport(const CutSystem& sys, const Network& net,
                                  const StokesAssignment& sf, const std::vector<Cplx>& path) {
  // guard: path must avoid joints and branch points
  double eps = 1e-7 * (net.domain_scale > 0 ? net.domain_scale : 1.0);
  for (Cplx z : path) {
    for (Cplx b : net.branch)
      if (std::abs(z - b) < eps)
        throw CamnetError("PathTouchesNetworkVertex", "path touches a branch point");
    for (const auto& j : net.joints)
      if (std::abs(z - j.position) < eps)
        throw CamnetError("PathTouchesNetworkVertex", "path touches a joint");
  }
  auto events = path_events(sys, net, path, true);
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(sys.n, sys.n);
  for (const auto& e : events) {
    if (e.is_cut) {
      if (e.direction > 0)
        acc = sys.cuts[e.cut_index].monodromy * acc;
      else
        acc = sys.cuts[e.cut_index].monodromy.inverse() * acc;
    } else {
      Eigen::MatrixXcd f = sf.at_arc(sys, net.segments[e.segment], e.seg_arc);
      if (e.sign > 0)
        acc = f * acc;
      else
        acc = f.inverse() * acc;
    }
  }
  return acc;
}

FlatnessReport flatness_report(const CutSystem& sys, const Network& net,
                               const StokesAssignment& sf) {
  FlatnessReport rep;
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(sys.n, sys.n);
  for (size_t b = 0; b < net.branch.size(); ++b) {
    double r_seed = 0;
    for (const auto& s : net.segments)
      if (s.origin_branch == static_cast<int>(b)) r_seed = std::abs(s.points[0] - net.branch[b]);
    Eigen::MatrixXcd m = reglue_loop(sys, net, sf, net.branch[b], 1.5 * r_seed, 256);
    FlatnessReport::Entry e{"branch:" + std::to_string(b), mat_dev(m, id)};
    rep.worst = std::max(rep.worst, e.deviation);
    rep.entries.push_back(e);
  }
  for (const auto& j : net.joints) {
    // radius: below the factor reference offsets and clear of specials
    double r = 1e300;
    for (Cplx b : net.branch) r = std::min(r, 0.3 * std::abs(j.position - b));
    for (const auto& d : net.discs)
      if (!d.outside) r = std::min(r, 0.3 * std::abs(j.position - d.center));
    for (const auto& j2 : net.joints)
      if (j2.id != j.id) r = std::min(r, 0.3 * std::abs(j.position - j2.position));
    r = std::min(r, 0.05 * net.domain_scale);
    Eigen::MatrixXcd m = reglue_loop(sys, net, sf, j.position, r, 256);
    FlatnessReport::Entry e{"joint:" + std::to_string(j.id), mat_dev(m, id)};
    rep.worst = std::max(rep.worst, e.deviation);
    rep.entries.push_back(e);
  }
  return rep;
}

NonabResult nonabelianize(const CutSystem& sys, const Network& net, PrimaryRule rule) {
  NonabResult out;
  StokesAssignment sf = assign_all_factors(sys, net, rule);
  out.flatness = flatness_report(sys, net, sf);

  out.output.rep = net.hitchin.group;
  std::vector<Eigen::MatrixXcd> finite_loops;
  std::vector<double> finite_re;
  size_t pi = 0;
  for (const auto& d : net.discs) {
    if (d.puncture.at_infinity) continue;
    Eigen::MatrixXcd m = reglue_loop(sys, net, sf, d.center, 1.12 * d.radius, 256);
    out.output.generators.push_back({"puncture:" + std::to_string(pi), m});
    finite_loops.push_back(m);
    finite_re.push_back(d.center.real());
    ++pi;
  }
  // chart circle just inside the truncation boundary, so that every curve
  // running to infinity crosses it
  Eigen::MatrixXcd minf = reglue_loop(sys, net, sf, 0, 0.98 * net.working_radius, 512);
  out.output.generators.push_back({"infinity", minf});

  // relation: the big counterclockwise circle equals the ordered product of
  // the finite loops, rightmost real part first
  std::vector<size_t> order(finite_loops.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return finite_re[x] > finite_re[y]; });
  Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(sys.n, sys.n);
  for (size_t k : order) prod = finite_loops[k] * prod;
  out.relation_residual = mat_dev(prod, minf);
  return out;
}

Eigen::MatrixXcd path_detour_factor(const CutSystem& sys, const Network& net, int segment_id) {
  const CurveSegment& seg = net.segments[segment_id];
  if (seg.origin_branch < 0)
    throw CamnetError("WrongRamificationMonodromy", "path detour factor is for primary curves");
  Cplx p = net.branch[seg.origin_branch];
  Cplx y = seg.points[0];
  double r = std::abs(y - p);
  // ramification monodromy must be -1: the clockwise loop squared acts as
  // -1 on the colliding block; checked through the S-shape elsewhere.
  std::vector<Cplx> loop = circle_path(p, r, std::arg(y - p), -2 * M_PI, 256);
  Eigen::MatrixXcd t_cw = sys.transport(loop);
  std::vector<Cplx> frame = global_frame(net, y);
  int i = nearest_index(frame, seg.lam_i[0]);
  int j = nearest_index(frame, seg.lam_j[0]);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(sys.n, sys.n);
  out(i, j) += t_cw(i, j);
  return out;
}

PdComparison pd_equivalence_check(const CutSystem& sys, const Network& net) {
  PdComparison cmp;
  cmp.nonab = nonabelianize(sys, net, PrimaryRule::FromMonodromy);
  cmp.nonab_pd = nonabelianize(sys, net, PrimaryRule::PathDetour);
  for (size_t k = 0; k < cmp.nonab.output.generators.size(); ++k) {
    cmp.max_deviation = std::max(
        cmp.max_deviation, mat_dev(cmp.nonab.output.generators[k].matrix,
                                   cmp.nonab_pd.output.generators[k].matrix));
  }
  return cmp;
}

}  // namespace camnet
