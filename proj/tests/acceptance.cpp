// Acceptance suite: one criterion per check, each printed as a PASS/FAIL
// line with its tolerance pinned in code. Exit 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "camnet/nonab.hpp"
#include "camnet/scattering.hpp"
#include "camnet/tracer.hpp"

using namespace camnet;

namespace {

std::mt19937 rng(20260810);

Rat rand_rat() {
  int num = static_cast<int>(rng() % 19) - 9;
  int den = 1 + static_cast<int>(rng() % 7);
  return rat_canon(num, den);
}

Cplx rand_box() {
  return Cplx(0.35 + 1.3 * (rng() % 1000) / 1000.0, -0.65 + 1.3 * (rng() % 1000) / 1000.0);
}

int failures = 0;

struct Criterion {
  const char* name;
  double limit_s;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  Criterion(const char* n, double lim) : name(n), limit_s(lim) {}
  void fail(const std::string& why) {
    ok = false;
    if (detail.empty()) detail = why;
  }
  void finish() {
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (dt > limit_s) fail("runtime " + std::to_string(dt) + "s over budget");
    std::printf("%s %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", name, dt,
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

GRatFun poly_fun(std::vector<GaussRat> c) {
  GRatFun f;
  f.num = GPoly(std::move(c));
  return f;
}
GaussRat gr(long n, long d = 1) { return GaussRat(rat_canon(n, d)); }
GaussRat gi(long n, long d = 1) { return GaussRat(Rat(0), rat_canon(n, d)); }

RootIndex simple_root(const RootSystem& rs, int i) {
  RootVec v(rs.rank, 0);
  v[i] = 1;
  return rs.index_of_or_throw(v);
}

// dense basis bracket for the Jacobi check
std::vector<Rat> basis_bracket(const ChevalleyTable& t, int a, int b) {
  const RootSystem& rs = t.rootsys();
  int r = rs.rank;
  std::vector<Rat> out(t.dim(), Rat(0));
  if (a < r && b < r) return out;
  if (a < r) {
    RootIndex g = b - r;
    out[b] = rs.cartan_int(simple_root(rs, a), g);
    return out;
  }
  if (b < r) {
    auto m = basis_bracket(t, b, a);
    for (auto& x : m) x = -x;
    return m;
  }
  RootIndex g = a - r, d = b - r;
  if (d == rs.negative[g]) {
    auto co = t.coroot(g);
    for (int i = 0; i < r; ++i) out[i] = -Rat(co[i]);
    return out;
  }
  RootIndex s = rs.sum(g, d);
  if (s >= 0) out[r + s] = t.structure_constant(g, d);
  return out;
}

void criterion1_chevalley() {
  Criterion c("criterion 1: chevalley relations + jacobi (A1-A4,B2,C2,D4,G2)", 10.0);
  for (const char* code : {"A1", "A2", "A3", "A4", "B2", "C2", "D4", "G2"}) {
    const ChevalleyTable& t = chevalley_table(code);
    const RootSystem& rs = t.rootsys();
    bool ade = code[0] == 'A' || code[0] == 'D';
    for (RootIndex a = 0; a < rs.num_roots() && c.ok; ++a)
      for (RootIndex b = 0; b < rs.num_roots(); ++b) {
        if (a == b || b == rs.negative[a]) continue;
        int n = t.structure_constant(a, b);
        RootIndex s = rs.sum(a, b);
        if (s < 0) {
          if (n != 0) c.fail(std::string(code) + ": nonzero constant off a root sum");
          continue;
        }
        if (std::abs(n) != rs.p_string(a, b) + 1)
          c.fail(std::string(code) + ": |N| != p+1");
        if (n != -t.structure_constant(b, a)) c.fail(std::string(code) + ": antisymmetry");
        bool shortshort = rs.norm2(a) == rs.norm2(b) && rs.norm2(a) < rs.norm2(s);
        if (ade && std::abs(n) != 1) c.fail(std::string(code) + ": ADE magnitude");
        if ((code[0] == 'B' || code[0] == 'C') && shortshort && std::abs(n) != 2)
          c.fail(std::string(code) + ": BC short-short magnitude");
        if (std::string(code) == "G2" && std::abs(n) > 3) c.fail("G2 magnitude > 3");
      }
    // [h_a, e_g] eigenvalues are the Cartan integers by construction; check
    // the whole bracket table via Jacobi, exactly.
    int d = t.dim();
    auto br = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
      std::vector<Rat> out(d, Rat(0));
      for (int p = 0; p < d; ++p) {
        if (x[p] == 0) continue;
        for (int q = 0; q < d; ++q) {
          if (y[q] == 0) continue;
          auto e = basis_bracket(t, p, q);
          for (int k = 0; k < d; ++k) out[k] += x[p] * y[q] * e[k];
        }
      }
      return out;
    };
    for (int a = 0; a < d && c.ok; ++a)
      for (int b = a; b < d && c.ok; ++b)
        for (int e = b; e < d && c.ok; ++e) {
          std::vector<Rat> ea(d, Rat(0)), eb(d, Rat(0)), ec(d, Rat(0));
          ea[a] = 1;
          eb[b] = 1;
          ec[e] = 1;
          auto j1 = br(ea, br(eb, ec));
          auto j2 = br(eb, br(ec, ea));
          auto j3 = br(ec, br(ea, eb));
          for (int k = 0; k < d; ++k)
            if (j1[k] + j2[k] + j3[k] != 0) {
              c.fail(std::string(code) + ": jacobi");
              break;
            }
        }
  }
  c.finish();
}

void criterion2_wall_crossing() {
  Criterion c("criterion 2: Cecotti-Vafa identities A2/B2/G2, 200 random sets each", 30.0);
  struct Kind {
    PlanarKind kind;
    size_t m;
  };
  for (auto [kind, m] : {Kind{PlanarKind::A2, 3}, Kind{PlanarKind::B2, 4}, Kind{PlanarKind::G2, 6}})
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Rat> coeffs;
      for (size_t k = 0; k < m; ++k) coeffs.push_back(rand_rat());
      if (!cecotti_vafa_identity_check(kind, coeffs)) {
        c.fail("identity violated");
        break;
      }
    }
  c.finish();
}

struct DiagramFixture {
  const ChevalleyTable* table;
  std::vector<Ray> rays;  // positions randomized per trial
  std::vector<size_t> incoming;
};

DiagramFixture planar_fixture(const std::string& code) {
  DiagramFixture f;
  f.table = &chevalley_table(code);
  const RootSystem& rs = f.table->rootsys();
  std::set<RootIndex> in;
  for (int i = 0; i < rs.rank; ++i) in.insert(simple_root(rs, i));
  auto hull = rs.restricted_convex_hull(in);
  long m = static_cast<long>(in.size() + hull.size());
  long k = 0;
  for (RootIndex r : in) {
    f.incoming.push_back(f.rays.size());
    f.rays.push_back({rat_canon(k++, m), RayDir::In, r});
  }
  for (RootIndex r : hull) f.rays.push_back({rat_canon(k++, m), RayDir::Out, r});
  return f;
}

DiagramFixture a3_interleaved_fixture() {
  DiagramFixture f;
  f.table = &chevalley_table("A3");
  const RootSystem& rs = f.table->rootsys();
  RootIndex a = simple_root(rs, 0), b = simple_root(rs, 1), cc = simple_root(rs, 2);
  RootIndex ab = rs.sum(a, b), bc = rs.sum(b, cc), abc = rs.sum(ab, cc);
  std::vector<std::pair<RayDir, RootIndex>> order = {
      {RayDir::In, a},  {RayDir::Out, cc},  {RayDir::In, b},
      {RayDir::Out, a}, {RayDir::Out, abc}, {RayDir::Out, ab},
      {RayDir::In, cc}, {RayDir::Out, b},   {RayDir::Out, bc}};
  for (long k = 0; k < static_cast<long>(order.size()); ++k) {
    if (order[k].first == RayDir::In) f.incoming.push_back(k);
    f.rays.push_back({rat_canon(k, 9), order[k].first, order[k].second});
  }
  return f;
}

void criterion3_scattering() {
  Criterion c("criterion 3: scattering solver, 200 diagrams x {A2,B2,G2,A3,D4}", 120.0);
  std::vector<DiagramFixture> fixtures = {planar_fixture("A2"), planar_fixture("B2"),
                                          planar_fixture("G2"), a3_interleaved_fixture(),
                                          planar_fixture("D4")};
  for (auto& fix : fixtures) {
    const ChevalleyTable& t = *fix.table;
    const RootSystem& rs = t.rootsys();
    bool planar = rs.rank == 2;
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
      std::vector<Ray> rays = fix.rays;
      if (planar) {
        // shuffle the cyclic positions (any interleaving is a valid diagram)
        std::vector<long> slots(rays.size());
        for (size_t k = 0; k < slots.size(); ++k) slots[k] = static_cast<long>(k);
        std::shuffle(slots.begin(), slots.end(), rng);
        for (size_t k = 0; k < rays.size(); ++k)
          rays[k].pos = rat_canon(slots[k], static_cast<long>(rays.size()));
      }
      ScatteringDiagram d(t, rays);
      Decoration<Rat> in;
      for (size_t i : fix.incoming) in.coeff[i] = rand_rat();
      auto out = solve(d, in);
      Decoration<Rat> full = out;
      for (auto& [i, x] : in.coeff) full.coeff[i] = x;
      if (!verify_solution(d, full).zero()) {
        c.fail("nonzero residual");
        break;
      }

      // start-ray independence: rotate all positions
      {
        std::vector<Ray> rot = rays;
        long shift = 1 + static_cast<long>(rng() % (rays.size() - 1));
        for (auto& r : rot) {
          r.pos += rat_canon(shift, static_cast<long>(rays.size()));
          if (r.pos >= 1) r.pos -= 1;
        }
        ScatteringDiagram d2(t, rot);
        if (!(solve(d2, in).coeff == out.coeff)) {
          c.fail("start-ray dependence");
          break;
        }
      }

      // N-equivariance: solve commutes with a random adjoint conjugation
      {
        AdjointConjugation<Rat> conj;
        int len = static_cast<int>(rng() % 3);
        for (int k = 0; k < len; ++k) conj.weyl_word.push_back(static_cast<int>(rng() % rs.rank));
        for (int k = 0; k < rs.rank; ++k) {
          Rat s = rand_rat();
          conj.simple_scalings.push_back(s == 0 ? Rat(1) : s);
        }
        auto [d2, in2] = adjoint_transform(d, in, conj);
        auto lhs = adjoint_transform(d, out, conj).second;
        auto rhs = solve(d2, in2);
        if (!(lhs.coeff == rhs.coeff)) {
          c.fail("equivariance violated");
          break;
        }
      }

      // A3 closed forms, reproduced symbolically
      if (&fix == &fixtures[3]) {
        const RootSystem& rsa = rs;
        RootIndex a = simple_root(rsa, 0), b = simple_root(rsa, 1), g = simple_root(rsa, 2);
        RootIndex ab = rsa.sum(a, b), abc = rsa.sum(ab, g);
        auto coeff_of = [&](RootIndex r) {
          for (auto& [i, x] : out.coeff)
            if (d.rays()[i].root == r) return x;
          return Rat(0);
        };
        auto in_of = [&](RootIndex r) {
          for (auto& [i, x] : in.coeff)
            if (d.rays()[i].root == r) return x;
          return Rat(0);
        };
        using E = NilElement<Rat>;
        E ua(t, a, in_of(a)), ub(t, b, in_of(b)), uc(t, g, in_of(g));
        auto wl = [&](std::vector<std::pair<E, int>> w) {
          E acc(t);
          for (auto& [f, e] : w) acc = bch_log_pair_unchecked(acc, e > 0 ? f : -f);
          return acc;
        };
        // u'_{a+b} = u_a^{-1} u_b u_a u_b^{-1}
        E comm = wl({{ua, -1}, {ub, 1}, {ua, 1}, {ub, -1}});
        if (!(comm.coeff(ab) == coeff_of(ab))) c.fail("A3 u'_{a+b} closed form");
        // u'_{a+b+c} as the unique solution of the bulk relation
        E last = wl({{ua, -1}, {ub, 1}, {uc, -1}, {ua, 1},
                     {uc, 1}, {ub, -1}, {uc, -1}, {ub, 1},
                     {ub, -1}, {uc, 1},
                     {ub, 1}, {ua, -1}, {ub, -1}, {ua, 1}});
        if (!(last.coeff(abc) == coeff_of(abc))) c.fail("A3 u'_{a+b+c} closed form");
      }
    }
  }
  c.finish();
}

void criterion4_mult_roundtrip() {
  Criterion c("criterion 4: mult_map inverse round trip, 500 tuples x 2 orders per system", 30.0);
  for (const char* code : {"A1", "A2", "A3", "A4", "B2", "C2", "D4", "G2"}) {
    const ChevalleyTable& t = chevalley_table(code);
    const RootSystem& rs = t.rootsys();
    std::vector<RootIndex> order1, order2;
    for (RootIndex r = 0; r < rs.num_positive; ++r) order1.push_back(r);
    order2 = order1;
    std::reverse(order2.begin(), order2.end());  // a second, distinct order
    for (const auto& order : {order1, order2}) {
      for (int trial = 0; trial < 500 && c.ok; ++trial) {
        UnipotentCoords<Rat> u;
        u.table = &t;
        for (RootIndex r : order) u.factors.push_back({r, rand_rat()});
        if (!(mult_map_inverse(mult_map(u), order).factors == u.factors)) {
          c.fail(std::string(code) + ": round trip failed");
          break;
        }
      }
      if (!c.ok) break;
    }
    if (!c.ok) break;
  }
  c.finish();
}

void criterion5_branch_flatness() {
  Criterion c("criterion 5: n_a t u_a u_{-a} u_a = id (100 random S-blocks, 1e-12)", 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    Cplx a = std::polar(0.1 + 4.0 * (rng() % 1000) / 1000.0, 2 * M_PI * (rng() % 1000) / 1000.0);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = a;
    m(1, 0) = -1.0 / a;
    PrimaryTriple plus = primary_factors(m, 0, 1, +1);
    PrimaryTriple minus = primary_factors(m, 0, 1, -1);
    if ((plus.u_alpha - minus.u_alpha).cwiseAbs().maxCoeff() != 0.0 ||
        (plus.u_minus_alpha - minus.u_minus_alpha).cwiseAbs().maxCoeff() != 0.0)
      c.fail("square-root branch dependence");
    Eigen::MatrixXcd prod = m * plus.u_alpha * plus.u_minus_alpha * plus.u_alpha;
    if ((prod - Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() >= 1e-12)
      c.fail("monodromy cancellation above 1e-12");
  }
  c.finish();
}

Network bnr_network() {
  auto h = make_hitchin_point("SL3", {GRatFun{}, poly_fun({gr(3)}), poly_fun({gr(0), gi(2)})},
                              {}, true);
  return build_network(h, TraceConfig{});
}

void criterion6_bnr(Network& net) {
  Criterion c("criterion 6: BNR topology (branch 1e-10, joints conjugate 1e-4, acyclic)", 60.0);
  net = bnr_network();
  if (net.branch.size() != 2 || std::abs(net.branch[0] - Cplx(-1, 0)) > 1e-10 ||
      std::abs(net.branch[1] - Cplx(1, 0)) > 1e-10)
    c.fail("branch points not at +-1");
  int prim = 0, spawned = 0;
  for (const auto& s : net.segments) {
    if (s.origin_branch >= 0) ++prim;
    if (s.origin_joint >= 0) ++spawned;
  }
  if (prim != 6) c.fail("expected 3 primaries per branch point");
  if (net.joints.size() != 2) c.fail("expected exactly 2 joints");
  else if (std::abs(net.joints[0].position - std::conj(net.joints[1].position)) > 1e-4)
    c.fail("joints are not a conjugate pair");
  if (spawned != 2) c.fail("expected exactly 1 new curve per joint");
  if (!net.acyclic) c.fail("graph not acyclic");
  // each new curve is labeled by the remaining sheet pair
  GroupRep rep("SL3");
  for (const auto& j : net.joints) {
    std::set<int> in_sheets, new_sheets;
    std::vector<Cplx> frame = net.hitchin.eigenvalues(j.position);
    auto nearest = [&](Cplx v) {
      int best = 0;
      double bd = 1e300;
      for (size_t k = 0; k < frame.size(); ++k)
        if (std::abs(frame[k] - v) < bd) {
          bd = std::abs(frame[k] - v);
          best = static_cast<int>(k);
        }
      return best;
    };
    for (const auto& r : j.rays) {
      if (r.incoming) {
        in_sheets.insert(nearest(r.lam_i));
        in_sheets.insert(nearest(r.lam_j));
      }
      if (r.new_curve) {
        new_sheets.insert(nearest(r.lam_i));
        new_sheets.insert(nearest(r.lam_j));
      }
    }
    if (in_sheets.size() != 3 || new_sheets.size() != 2)
      c.fail("joint sheet structure wrong");
    // the new pair is the symmetric difference of the two incoming pairs
    for (int s : new_sheets)
      if (!in_sheets.count(s)) c.fail("new label uses an unseen sheet");
  }
  c.finish();
}

void criterion7_trapping() {
  Criterion c("criterion 7: 50 trajectories trapped in a condition-R disc (10x arc)", 60.0);
  GaussRat c2 = (gr(1) + gi(3, 10)) * (gr(1) + gi(3, 10));
  GPoly num = GPoly::monic_linear(gr(2)) * GPoly::monic_linear(gr(3));
  GRatFun a2;
  a2.num = num.scaled(GaussRat(Rat(-1)) * c2);
  a2.den = GPoly({gr(0), gr(0), gr(1)});
  auto h = make_hitchin_point("SL2", {GRatFun{}, a2}, {GaussRat(0)}, false);
  if (!condition_R(h).pass) c.fail("fixture violates condition R");
  double rd = truncation_disc(h, {false, GaussRat(0)}, 0.9);

  Network net;
  net.hitchin = h;
  net.domain_scale = 1;
  net.working_radius = 100;  // no chart kill: exits are detected directly
  DiscRecord core;           // tiny core so trapped trajectories terminate
  core.puncture = {false, GaussRat(0)};
  core.center = 0;
  core.radius = 0.02 * rd;
  net.discs = {core};
  TraceConfig cfg;
  cfg.length_cap_factor = 1.0;

  int trapped = 0;
  for (int k = 0; k < 200 && trapped < 50; ++k) {
    double phi = 2 * M_PI * k / 200.0;
    Cplx z0 = std::polar(1.25 * rd, phi);
    auto lam = h.eigenvalues(z0);
    for (int ori = 0; ori < 2 && trapped < 50; ++ori) {
      Cplx li = lam[ori], lj = lam[1 - ori];
      Cplx dir = std::conj(li - lj) / std::abs(li - lj);
      if ((std::conj(z0) * dir).real() > -0.1 * rd) continue;  // not heading inward
      CurveSegment seg;
      seg.points = {z0};
      seg.lam_i = {li};
      seg.lam_j = {lj};
      trace_trajectory(net, seg, cfg);
      // locate the disc entry
      double arc = 0, entry = -1;
      for (size_t m = 0; m + 1 < seg.points.size(); ++m) {
        arc += std::abs(seg.points[m + 1] - seg.points[m]);
        if (entry < 0 && std::abs(seg.points[m + 1]) < rd) entry = arc;
      }
      if (entry < 0) continue;  // never entered; not part of the 50
      ++trapped;
      // after entry, it must stay inside for 10x the entry arc
      arc = 0;
      for (size_t m = 0; m + 1 < seg.points.size(); ++m) {
        arc += std::abs(seg.points[m + 1] - seg.points[m]);
        if (arc > entry && arc < 11 * entry && std::abs(seg.points[m + 1]) > rd * 1.0001)
          c.fail("trajectory escaped the disc");
      }
      if (seg.arc_length < 11 * entry && seg.status != CurveSegment::Status::EndedAtDisc)
        c.fail("trajectory stopped early without reaching the puncture core");
    }
  }
  if (trapped < 50) c.fail("fewer than 50 entering trajectories found");
  c.finish();
}

void criterion8_nonab_bnr(const Network& net) {
  Criterion c("criterion 8: BNR nonabelianization, 20 random inputs, 1e-8", 120.0);
  for (int trial = 0; trial < 20 && c.ok; ++trial) {
    AbelianData ad;
    ad.branch_a = {rand_box(), rand_box()};
    CutSystem sys = pushforward(net, ad);
    if (!check_S_monodromy(sys, net).pass) {
      c.fail("S-check failed on pushforward data");
      break;
    }
    auto res = nonabelianize(sys, net);
    if (res.flatness.worst >= 1e-8) c.fail("flatness above 1e-8");
    if (res.relation_residual >= 1e-8) c.fail("surface relation above 1e-8");
  }
  c.finish();
}

void criterion9_pd(const Network& bnr) {
  Criterion c("criterion 9: path-detour equivalence on GL2 and GL3, 1e-8", 120.0);
  // GL3: the BNR curve
  for (int trial = 0; trial < 10 && c.ok; ++trial) {
    AbelianData ad;
    ad.branch_a = {rand_box(), rand_box()};
    CutSystem sys = pushforward(bnr, ad);
    if (pd_equivalence_check(sys, bnr).max_deviation >= 1e-8) c.fail("GL3 deviation");
  }
  // GL2: rotated two-branch-point curve
  GaussRat rot = gr(4, 5) + gi(3, 5);
  auto h2 = make_hitchin_point(
      "GL2", {GRatFun{}, poly_fun({gr(1), gr(0), gr(-1)}).scaled(rot)}, {}, true);
  Network net2 = build_network(h2, TraceConfig{});
  for (int trial = 0; trial < 10 && c.ok; ++trial) {
    AbelianData ad;
    ad.branch_a = {rand_box(), rand_box()};
    CutSystem sys = pushforward(net2, ad);
    if (pd_equivalence_check(sys, net2).max_deviation >= 1e-8) c.fail("GL2 deviation");
  }
  c.finish();
}

void criterion10_census() {
  Criterion c("criterion 10: three-pole SL2 census: all primaries branch->puncture", 60.0);
  GaussRat rot = gr(-4, 5) + gi(-3, 5);
  GPoly num = GPoly({gr(0), gr(-4), gr(1)}).scaled(rot);  // -c x(x-4) with c = 4/5+3/5i
  GPoly den1 = GPoly::monic_linear(gr(1)) * GPoly::monic_linear(gr(2)) * GPoly::monic_linear(gr(3));
  GRatFun a2;
  a2.num = num;
  a2.den = den1 * den1;
  auto h = make_hitchin_point("SL2", {GRatFun{}, a2},
                              {GaussRat(gr(1)), GaussRat(gr(2)), GaussRat(gr(3))}, false);
  if (!condition_R(h).pass) c.fail("fixture violates condition R");
  Network net = build_network(h, TraceConfig{});
  if (net.branch.size() != 2) c.fail("expected the two zeros as branch points");
  auto census = end_census(net);
  int prim = 0;
  for (const auto& s : net.segments)
    if (s.origin_branch >= 0) ++prim;
  if (census[EndClass::BranchToPuncture] != prim) c.fail("a primary does not end at a puncture");
  for (const auto& s : net.segments)
    if (s.status == CurveSegment::Status::ErrorDense) c.fail("dense-trajectory error");
  c.finish();
}

}  // namespace

int main() {
  criterion1_chevalley();
  criterion2_wall_crossing();
  criterion3_scattering();
  criterion4_mult_roundtrip();
  criterion5_branch_flatness();
  Network bnr;
  criterion6_bnr(bnr);
  criterion7_trapping();
  criterion8_nonab_bnr(bnr);
  criterion9_pd(bnr);
  criterion10_census();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
