// camnet: spectral-network tracing, exact Stokes-factor algebra, and
// non-abelianization on the punctured sphere.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "camnet/nonab.hpp"
#include "camnet/scattering.hpp"
#include "camnet/serialize.hpp"
#include "camnet/svg.hpp"
#include "camnet/tracer.hpp"

using namespace camnet;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitInputError = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CamnetError("IOError", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Rat rand_rat(std::mt19937& rng) {
  int num = static_cast<int>(rng() % 19) - 9;
  int den = 1 + static_cast<int>(rng() % 7);
  return rat_canon(num, den);
}

// ---------------------------------------------------------------------------
// verify-lie: identity families over the supported root systems
// ---------------------------------------------------------------------------

struct FamilyResult {
  std::string name;
  std::string system;
  long checks = 0;
  long failed = 0;
};

// Dense basis bracket against a (possibly corrupted) constant table.
std::vector<Rat> basis_bracket(const ChevalleyTable& t,
                               const std::map<std::pair<RootIndex, RootIndex>, int>& njk, int a,
                               int b) {
  const RootSystem& rs = t.rootsys();
  int r = rs.rank;
  std::vector<Rat> out(t.dim(), Rat(0));
  if (a < r && b < r) return out;
  if (a < r) {
    RootIndex g = b - r;
    RootVec v(r, 0);
    v[a] = 1;
    out[b] = rs.cartan_int(rs.index_of_or_throw(v), g);
    return out;
  }
  if (b < r) {
    auto m = basis_bracket(t, njk, b, a);
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
  if (s >= 0) {
    auto it = njk.find({g, d});
    out[r + s] = it == njk.end() ? 0 : it->second;
  }
  return out;
}

FamilyResult run_jacobi_family(const std::string& code, bool corrupt) {
  const ChevalleyTable& t = chevalley_table(code);
  const RootSystem& rs = t.rootsys();
  std::map<std::pair<RootIndex, RootIndex>, int> njk;
  for (RootIndex a = 0; a < rs.num_roots(); ++a)
    for (RootIndex b = 0; b < rs.num_roots(); ++b) {
      if (a == b || b == rs.negative[a] || rs.sum(a, b) < 0) continue;
      njk[{a, b}] = t.structure_constant(a, b);
    }
  if (corrupt && !njk.empty()) njk.begin()->second += 1;

  FamilyResult res{"chevalley-jacobi", code};
  auto br = [&](const std::vector<Rat>& x, const std::vector<Rat>& y) {
    std::vector<Rat> out(t.dim(), Rat(0));
    for (int a = 0; a < t.dim(); ++a) {
      if (x[a] == 0) continue;
      for (int b = 0; b < t.dim(); ++b) {
        if (y[b] == 0) continue;
        auto e = basis_bracket(t, njk, a, b);
        for (int k = 0; k < t.dim(); ++k) out[k] += x[a] * y[b] * e[k];
      }
    }
    return out;
  };
  int d = t.dim();
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b)
      for (int c = b; c < d; ++c) {
        std::vector<Rat> ea(d, Rat(0)), eb(d, Rat(0)), ec(d, Rat(0));
        ea[a] = 1;
        eb[b] = 1;
        ec[c] = 1;
        auto j1 = br(ea, br(eb, ec));
        auto j2 = br(eb, br(ec, ea));
        auto j3 = br(ec, br(ea, eb));
        ++res.checks;
        for (int k = 0; k < d; ++k)
          if (j1[k] + j2[k] + j3[k] != 0) {
            ++res.failed;
            break;
          }
      }
  return res;
}

FamilyResult run_magnitude_family(const std::string& code) {
  const ChevalleyTable& t = chevalley_table(code);
  const RootSystem& rs = t.rootsys();
  FamilyResult res{"chevalley-magnitudes", code};
  bool ade = code[0] == 'A' || code[0] == 'D';
  for (RootIndex a = 0; a < rs.num_roots(); ++a)
    for (RootIndex b = 0; b < rs.num_roots(); ++b) {
      if (a == b || b == rs.negative[a]) continue;
      ++res.checks;
      int n = t.structure_constant(a, b);
      RootIndex s = rs.sum(a, b);
      if (s < 0) {
        if (n != 0) ++res.failed;
        continue;
      }
      bool ok = std::abs(n) == rs.p_string(a, b) + 1 && n == -t.structure_constant(b, a);
      if (ade && std::abs(n) != 1) ok = false;
      if (!ok) ++res.failed;
    }
  return res;
}

FamilyResult run_bch_oracle_family(const std::string& code, std::mt19937& rng, int count) {
  const ChevalleyTable& t = chevalley_table(code);
  const RootSystem& rs = t.rootsys();
  FamilyResult res{"bch-adjoint-oracle", code};
  for (int trial = 0; trial < count; ++trial) {
    size_t wi = rng() % rs.weyl.size();
    NilElement<Rat> x(t), y(t);
    for (int k = 0; k < 2; ++k) {
      x.add(rs.weyl[wi].perm[rng() % rs.num_positive], rand_rat(rng));
      y.add(rs.weyl[wi].perm[rng() % rs.num_positive], rand_rat(rng));
    }
    ++res.checks;
    if (!(adjoint_exp(bch_log_pair(x, y)) == adjoint_exp(x) * adjoint_exp(y))) ++res.failed;
  }
  return res;
}

FamilyResult run_mult_roundtrip_family(const std::string& code, std::mt19937& rng, int count) {
  const ChevalleyTable& t = chevalley_table(code);
  const RootSystem& rs = t.rootsys();
  FamilyResult res{"mult-map-roundtrip", code};
  std::vector<RootIndex> order;
  for (RootIndex r = 0; r < rs.num_positive; ++r) order.push_back(r);
  for (int trial = 0; trial < count; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    UnipotentCoords<Rat> u;
    u.table = &t;
    for (RootIndex r : order) u.factors.push_back({r, rand_rat(rng)});
    ++res.checks;
    if (!(mult_map_inverse(mult_map(u), order).factors == u.factors)) ++res.failed;
  }
  return res;
}

FamilyResult run_cv_family(const std::string& code, std::mt19937& rng, int count) {
  FamilyResult res{"cecotti-vafa", code};
  PlanarKind kind;
  size_t m;
  if (code == "A2") { kind = PlanarKind::A2; m = 3; }
  else if (code == "B2") { kind = PlanarKind::B2; m = 4; }
  else if (code == "G2") { kind = PlanarKind::G2; m = 6; }
  else return res;
  for (int trial = 0; trial < count; ++trial) {
    std::vector<Rat> c;
    for (size_t k = 0; k < m; ++k) c.push_back(rand_rat(rng));
    ++res.checks;
    if (!cecotti_vafa_identity_check(kind, c)) ++res.failed;
  }
  return res;
}

int cmd_verify_lie(const std::vector<std::string>& systems, const std::string& out_path,
                   unsigned seed, int count, bool corrupt) {
  std::mt19937 rng(seed);
  std::vector<FamilyResult> results;
  for (const auto& code : systems) {
    results.push_back(run_magnitude_family(code));
    results.push_back(run_jacobi_family(code, corrupt));
    results.push_back(run_bch_oracle_family(code, rng, count));
    results.push_back(run_mult_roundtrip_family(code, rng, count));
    if (code == "A2" || code == "B2" || code == "G2")
      results.push_back(run_cv_family(code, rng, count));
  }
  bool all_ok = true;
  json rep;
  rep["schema"] = "camnet/1";
  rep["seed"] = seed;
  json fams = json::array();
  for (const auto& r : results) {
    if (!r.checks) continue;
    fams.push_back(json{{"family", r.name},
                        {"system", r.system},
                        {"checks", r.checks},
                        {"failed", r.failed},
                        {"pass", r.failed == 0}});
    std::cout << (r.failed == 0 ? "PASS " : "FAIL ") << r.system << " " << r.name << " ("
              << r.checks << " checks)\n";
    all_ok = all_ok && r.failed == 0;
  }
  rep["families"] = fams;
  rep["pass"] = all_ok;
  json tables = json::object();
  for (const auto& code : systems) tables[code] = json::parse(chevalley_table_json(code));
  rep["structure_constants"] = tables;
  if (!out_path.empty()) write_file(out_path, rep.dump(1));
  return all_ok ? kExitOk : kExitVerifyFailure;
}

// ---------------------------------------------------------------------------
// trace
// ---------------------------------------------------------------------------

GRatFun ratfun_from_config(const json& j) {
  GRatFun f;
  auto fill = [](GPoly& p, const json& arr) {
    p.c.clear();
    for (const auto& s : arr) p.c.push_back(gauss_parse(s.get<std::string>()));
    p.trim();
  };
  if (j.is_array()) {
    fill(f.num, j);
  } else {
    fill(f.num, j.at("num"));
    if (j.contains("den")) fill(f.den, j.at("den"));
  }
  if (f.den.zero()) f.den = GPoly::constant(GaussRat(1));
  return f;
}

HitchinPoint hitchin_from_config(const json& root) {
  std::string group = root.at("group").get<std::string>();
  int n = (group == "SL2" || group == "GL2") ? 2 : 3;
  const json& cp = root.at("char_poly");
  std::vector<GRatFun> coeffs(n);
  for (int k = 1; k <= n; ++k) {
    std::string key = "a" + std::to_string(k);
    if (cp.contains(key)) coeffs[k - 1] = ratfun_from_config(cp.at(key));
  }
  std::vector<GaussRat> punct;
  bool at_inf = root.value("puncture_at_infinity", false);
  if (root.contains("punctures"))
    for (const auto& p : root.at("punctures")) {
      if (p.is_string() && p.get<std::string>() == "infinity") at_inf = true;
      else punct.push_back(gauss_parse(p.get<std::string>()));
    }
  return make_hitchin_point(group, std::move(coeffs), std::move(punct), at_inf);
}

TraceConfig trace_config_from(const json& root) {
  TraceConfig cfg;
  if (root.contains("max_iterations")) cfg.max_iterations = root.at("max_iterations").get<int>();
  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    if (t.contains("rel_tol")) cfg.rel_tol = t.at("rel_tol").get<double>();
    if (t.contains("disc_deviation")) cfg.max_dev_disc = t.at("disc_deviation").get<double>();
    if (t.contains("eps_merge")) cfg.eps_merge_factor = t.at("eps_merge").get<double>();
    if (t.contains("eps_bp")) cfg.eps_bp_factor = t.at("eps_bp").get<double>();
    if (t.contains("length_cap")) cfg.length_cap_factor = t.at("length_cap").get<double>();
  }
  if (root.contains("working_radius")) cfg.working_radius = root.at("working_radius").get<double>();
  return cfg;
}

int cmd_trace(const std::string& config_path, const std::string& svg_path,
              const std::string& graph_path) {
  json root = json::parse(slurp(config_path));
  HitchinPoint h = hitchin_from_config(root);
  auto crep = condition_R(h);
  for (const auto& e : crep.entries) {
    if (e.wild) {
      std::cout << "note: wild puncture handled by the chart circle\n";
      continue;
    }
    if (!e.pass) {
      std::cerr << "condition R fails at a puncture: min |Re| gap " << e.min_re_gap
                << "; refusing to trace\n";
      return kExitVerifyFailure;
    }
  }
  Network net = build_network(h, trace_config_from(root));
  std::cout << "branch points: " << net.branch.size() << ", joints: " << net.joints.size()
            << ", segments: " << net.segments.size() << ", acyclic: " << (net.acyclic ? "yes" : "no")
            << "\n";
  auto census = end_census(net);
  std::cout << "ends: branch->puncture " << census[EndClass::BranchToPuncture]
            << ", joint->puncture " << census[EndClass::JointToPuncture] << ", joint->branch "
            << census[EndClass::JointToBranch] << ", other " << census[EndClass::Other] << "\n";
  for (const auto& e : net.errors) std::cout << "error: " << e << "\n";
  if (!svg_path.empty()) write_file(svg_path, network_svg(net));
  if (!graph_path.empty()) write_file(graph_path, network_graph_json(net));
  return net.errors.empty() ? kExitOk : kExitVerifyFailure;
}

// ---------------------------------------------------------------------------
// scatter
// ---------------------------------------------------------------------------

int cmd_scatter(const std::string& config_path, const std::string& out_path) {
  json root = json::parse(slurp(config_path));
  const ChevalleyTable& t = chevalley_table(root.at("system").get<std::string>());
  std::vector<Ray> rays;
  Decoration<Rat> incoming;
  for (const auto& rj : root.at("rays")) {
    Ray r;
    r.pos = rat_parse(rj.at("pos").get<std::string>());
    r.dir = rj.at("dir").get<std::string>() == "in" ? RayDir::In : RayDir::Out;
    r.root = rj.at("root").get<int>();
    if (rj.contains("coeff")) incoming.coeff[rays.size()] = rat_parse(rj.at("coeff").get<std::string>());
    rays.push_back(r);
  }
  ScatteringDiagram d(t, rays);
  auto solved = solve(d, incoming);
  Decoration<Rat> full = solved;
  for (auto& [i, c] : incoming.coeff) full.coeff[i] = c;
  NilElement<Rat> residual = verify_solution(d, full);

  json out;
  out["schema"] = "camnet/1";
  out["system"] = root.at("system");
  json factors = json::array();
  for (auto& [i, c] : solved.coeff)
    factors.push_back(json{{"ray", i}, {"root", d.rays()[i].root}, {"coeff", rat_str(c)}});
  out["outgoing"] = factors;
  out["residual_zero"] = residual.zero();
  double norm = 0;
  for (auto& [r, c] : residual.coeffs) norm = std::max(norm, std::abs(rat_to_double(c)));
  out["residual_norm"] = norm;
  std::string text = out.dump(1);
  if (!out_path.empty()) write_file(out_path, text);
  else std::cout << text << "\n";
  return residual.zero() ? kExitOk : kExitVerifyFailure;
}

// ---------------------------------------------------------------------------
// nonab / pd-check
// ---------------------------------------------------------------------------

CutSystem system_from_file(const std::string& path, const Network& net) {
  json root = json::parse(slurp(path));
  if (root.contains("rep") && root.at("rep").get<std::string>() != net.hitchin.group)
    throw CamnetError("InconsistentCoverData",
                      "system rep " + root.at("rep").get<std::string>() +
                          " does not match the network group " + net.hitchin.group);
  if (root.contains("abelian")) {
    AbelianData ad;
    const json& ab = root.at("abelian");
    if (ab.contains("branch_a"))
      for (const auto& v : ab.at("branch_a"))
        ad.branch_a.push_back(gauss_parse(v.get<std::string>()).to_complex());
    if (ab.contains("puncture_s"))
      for (const auto& row : ab.at("puncture_s")) {
        std::vector<Cplx> s;
        for (const auto& v : row) s.push_back(gauss_parse(v.get<std::string>()).to_complex());
        ad.puncture_s.push_back(std::move(s));
      }
    return pushforward(net, ad);
  }
  return cut_system_from_data(load_local_system_json(slurp(path)), net);
}

json flatness_json(const FlatnessReport& rep, double tol) {
  json out;
  out["schema"] = "camnet/1";
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back(json{{"loop", e.name}, {"deviation", e.deviation}});
  out["loops"] = entries;
  out["worst"] = rep.worst;
  out["tolerance"] = tol;
  out["pass"] = rep.pass(tol);
  return out;
}

int cmd_nonab(const std::string& network_path, const std::string& system_path,
              const std::string& out_path, const std::string& report_path, double tol) {
  Network net = load_network_json(slurp(network_path));
  CutSystem sys = system_from_file(system_path, net);
  auto srep = check_S_monodromy(sys, net);
  if (!srep.pass) {
    std::cerr << "S-monodromy condition fails\n";
    return kExitVerifyFailure;
  }
  NonabResult res = nonabelianize(sys, net);
  std::cout << "flatness worst " << res.flatness.worst << ", relation residual "
            << res.relation_residual << "\n";
  if (!out_path.empty()) write_file(out_path, local_system_json(res.output));
  if (!report_path.empty()) write_file(report_path, flatness_json(res.flatness, tol).dump(1));
  return (res.flatness.pass(tol) && res.relation_residual < tol) ? kExitOk : kExitVerifyFailure;
}

int cmd_pd_check(const std::string& network_path, const std::string& system_path,
                 const std::string& out_path, double tol) {
  Network net = load_network_json(slurp(network_path));
  CutSystem sys = system_from_file(system_path, net);
  auto cmp = pd_equivalence_check(sys, net);
  std::cout << "path-detour deviation " << cmp.max_deviation << "\n";
  json out;
  out["schema"] = "camnet/1";
  out["deviation"] = cmp.max_deviation;
  out["flatness_nonab"] = cmp.nonab.flatness.worst;
  out["flatness_pd"] = cmp.nonab_pd.flatness.worst;
  out["pass"] = cmp.max_deviation < tol;
  if (!out_path.empty()) write_file(out_path, out.dump(1));
  return cmp.max_deviation < tol ? kExitOk : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral networks, exact Stokes algebra, non-abelianization"};
  app.require_subcommand(1);

  // verify-lie
  auto* verify = app.add_subcommand("verify-lie", "run the Lie-theoretic identity suites");
  std::vector<std::string> systems = {"A1", "A2", "A3", "A4", "B2", "C2", "D4", "G2"};
  std::string out_path, svg_path, graph_path, config_path, network_path, system_path, report_path;
  unsigned seed = 7;
  int count = 25;
  bool corrupt = false;
  double tol_flat = 1e-8;
  verify->add_option("--systems", systems, "root system codes");
  verify->add_option("--out", out_path, "JSON report path");
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_option("--count", count, "randomized checks per family");
  verify->add_flag("--corrupt-fixture", corrupt,
                   "corrupt one structure constant (negative control)");

  auto* trace = app.add_subcommand("trace", "trace a WKB spectral network");
  trace->add_option("--config", config_path, "Hitchin-point config JSON")->required();
  trace->add_option("--svg", svg_path, "SVG output path");
  trace->add_option("--graph", graph_path, "network graph JSON output path");

  auto* scatter = app.add_subcommand("scatter", "solve a 2D scattering diagram");
  scatter->add_option("--config", config_path, "diagram JSON")->required();
  scatter->add_option("--out", out_path, "solved decoration output path");

  auto* nonab = app.add_subcommand("nonab", "non-abelianize monodromy data over a network");
  nonab->add_option("--network", network_path, "network graph JSON")->required();
  nonab->add_option("--system", system_path, "local-system JSON (matrices or abelian data)")
      ->required();
  nonab->add_option("--out", out_path, "output monodromies path");
  nonab->add_option("--report", report_path, "flatness report path");
  nonab->add_option("--tol.flatness", tol_flat, "flatness tolerance");

  auto* pd = app.add_subcommand("pd-check", "compare nonab with the path-detour variant");
  pd->add_option("--network", network_path, "network graph JSON")->required();
  pd->add_option("--system", system_path, "local-system JSON")->required();
  pd->add_option("--out", out_path, "report output path");
  pd->add_option("--tol.flatness", tol_flat, "agreement tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (verify->parsed()) return cmd_verify_lie(systems, out_path, seed, count, corrupt);
    if (trace->parsed()) return cmd_trace(config_path, svg_path, graph_path);
    if (scatter->parsed()) return cmd_scatter(config_path, out_path);
    if (nonab->parsed())
      return cmd_nonab(network_path, system_path, out_path, report_path, tol_flat);
    if (pd->parsed()) return cmd_pd_check(network_path, system_path, out_path, tol_flat);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const CamnetError& e) {
    if (e.kind == "IOError" || e.kind == "BadSchema" || e.kind == "UnsupportedSeries" ||
        e.kind == "InconsistentCoverData") {
      std::cerr << "input error: " << e.what() << "\n";
      return kExitInputError;
    }
    std::cerr << "verification error: " << e.what() << "\n";
    return kExitVerifyFailure;
  }
  return kExitInputError;
}
