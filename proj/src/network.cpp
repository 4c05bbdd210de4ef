#include "camnet/network.hpp"

#include <algorithm>
#include <queue>

#include "json.hpp"

namespace camnet {

using nlohmann::json;

Cplx CurveSegment::tangent_at(size_t k) const {
  if (points.size() < 2) return {1, 0};
  size_t a = k, b = k + 1;
  if (b >= points.size()) {
    b = points.size() - 1;
    a = b - 1;
  }
  Cplx d = points[b] - points[a];
  double n = std::abs(d);
  return n > 0 ? d / n : Cplx{1, 0};
}

std::vector<std::pair<double, int>> Network::joints_on_segment(int seg) const {
  std::vector<std::pair<double, int>> out;
  for (const auto& j : joints)
    for (const auto& inc : j.rays)
      if (inc.segment == seg && !inc.new_curve && inc.incoming)
        out.push_back({inc.arc_param, j.id});
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct SplitGraph {
  // vertex ids: 0..B-1 branch, B..B+J-1 joints, then discs, then one "other"
  int n_branch, n_joint, n_disc;
  int other;
  std::vector<std::pair<int, int>> edges;

  int v_branch(int b) const { return b; }
  int v_joint(int j) const { return n_branch + j; }
  int v_disc(int d) const { return n_branch + n_joint + d; }
  int total() const { return n_branch + n_joint + n_disc + 1; }
};

SplitGraph split_graph(const Network& net) {
  SplitGraph g;
  g.n_branch = static_cast<int>(net.branch.size());
  g.n_joint = static_cast<int>(net.joints.size());
  g.n_disc = static_cast<int>(net.discs.size());
  g.other = g.n_branch + g.n_joint + g.n_disc;
  for (const auto& seg : net.segments) {
    int cur = seg.origin_branch >= 0 ? g.v_branch(seg.origin_branch) : g.v_joint(seg.origin_joint);
    for (auto [arc, jid] : net.joints_on_segment(seg.id)) {
      g.edges.push_back({cur, g.v_joint(jid)});
      cur = g.v_joint(jid);
    }
    int tail = g.other;
    if (seg.status == CurveSegment::Status::EndedAtDisc && seg.end_disc >= 0)
      tail = g.v_disc(seg.end_disc);
    g.edges.push_back({cur, tail});
  }
  return g;
}

}  // namespace

bool topological_order(Network& net) {
  SplitGraph g = split_graph(net);
  std::vector<int> indeg(g.total(), 0);
  std::vector<std::vector<int>> adj(g.total());
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    indeg[b]++;
  }
  std::queue<int> q;
  for (int v = 0; v < g.total(); ++v)
    if (indeg[v] == 0) q.push(v);
  std::vector<int> topo;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    topo.push_back(v);
    for (int w : adj[v])
      if (--indeg[w] == 0) q.push(w);
  }
  net.acyclic = static_cast<int>(topo.size()) == g.total();
  net.joint_order.clear();
  if (net.acyclic) {
    for (int v : topo)
      if (v >= g.n_branch && v < g.n_branch + g.n_joint) net.joint_order.push_back(v - g.n_branch);
  }
  return net.acyclic;
}

std::vector<EndClass> classify_ends(const Network& net) {
  std::vector<EndClass> out;
  for (const auto& seg : net.segments) {
    bool from_branch = seg.origin_branch >= 0;
    if (seg.status == CurveSegment::Status::EndedAtDisc)
      out.push_back(from_branch ? EndClass::BranchToPuncture : EndClass::JointToPuncture);
    else if (seg.status == CurveSegment::Status::ErrorRanIntoBranchPoint && !from_branch)
      out.push_back(EndClass::JointToBranch);
    else
      out.push_back(EndClass::Other);
  }
  return out;
}

std::map<EndClass, int> end_census(const Network& net) {
  std::map<EndClass, int> c;
  for (EndClass e : classify_ends(net)) c[e]++;
  return c;
}

namespace {

json cplx_json(Cplx z) { return json::array({z.real(), z.imag()}); }
Cplx cplx_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

const char* status_name(CurveSegment::Status s) {
  switch (s) {
    case CurveSegment::Status::Active: return "active";
    case CurveSegment::Status::EndedAtDisc: return "ended-at-disc";
    case CurveSegment::Status::ErrorRanIntoBranchPoint: return "error-ran-into-branch-point";
    case CurveSegment::Status::ErrorDense: return "error-dense";
    case CurveSegment::Status::ErrorLeftChart: return "error-left-chart";
    case CurveSegment::Status::SheetTrackingLost: return "error-sheet-tracking-lost";
  }
  return "unknown";
}

CurveSegment::Status status_from(const std::string& s) {
  if (s == "active") return CurveSegment::Status::Active;
  if (s == "ended-at-disc") return CurveSegment::Status::EndedAtDisc;
  if (s == "error-ran-into-branch-point") return CurveSegment::Status::ErrorRanIntoBranchPoint;
  if (s == "error-dense") return CurveSegment::Status::ErrorDense;
  if (s == "error-left-chart") return CurveSegment::Status::ErrorLeftChart;
  return CurveSegment::Status::SheetTrackingLost;
}

json ratfun_json(const GRatFun& f) {
  json num = json::array(), den = json::array();
  for (const auto& c : f.num.c) num.push_back(scalar_str(c));
  for (const auto& c : f.den.c) den.push_back(scalar_str(c));
  return json{{"num", num}, {"den", den}};
}

GRatFun ratfun_from(const json& j) {
  GRatFun f;
  f.num.c.clear();
  f.den.c.clear();
  for (const auto& s : j.at("num")) f.num.c.push_back(gauss_parse(s.get<std::string>()));
  for (const auto& s : j.at("den")) f.den.c.push_back(gauss_parse(s.get<std::string>()));
  f.num.trim();
  f.den.trim();
  return f;
}

}  // namespace

std::string network_graph_json(const Network& net) {
  json root;
  root["schema"] = "camnet/1";
  json hp;
  hp["group"] = net.hitchin.group;
  json coeffs = json::array();
  for (const auto& f : net.hitchin.a) coeffs.push_back(ratfun_json(f));
  hp["coefficients"] = coeffs;
  json punct = json::array();
  for (const auto& p : net.hitchin.punctures) punct.push_back(scalar_str(p));
  hp["punctures"] = punct;
  hp["puncture_at_infinity"] = net.hitchin.puncture_at_infinity;
  root["hitchin"] = hp;

  root["base_point"] = cplx_json(net.base_point);
  root["working_radius"] = net.working_radius;
  root["domain_scale"] = net.domain_scale;
  root["acyclic"] = net.acyclic;
  root["joint_order"] = net.joint_order;
  root["errors"] = net.errors;

  json branch = json::array();
  for (Cplx b : net.branch) branch.push_back(cplx_json(b));
  root["branch_points"] = branch;

  json discs = json::array();
  for (const auto& d : net.discs)
    discs.push_back(json{{"center", cplx_json(d.center)},
                         {"radius", d.radius},
                         {"outside", d.outside},
                         {"at_infinity", d.puncture.at_infinity}});
  root["discs"] = discs;

  json joints = json::array();
  for (const auto& jt : net.joints) {
    json rays = json::array();
    for (const auto& r : jt.rays)
      rays.push_back(json{{"segment", r.segment},
                          {"incoming", r.incoming},
                          {"new_curve", r.new_curve},
                          {"angle", r.angle},
                          {"lam_i", cplx_json(r.lam_i)},
                          {"lam_j", cplx_json(r.lam_j)},
                          {"arc", r.arc_param}});
    joints.push_back(json{{"id", jt.id},
                          {"position", cplx_json(jt.position)},
                          {"iteration", jt.iteration},
                          {"rays", rays},
                          {"nonconvex_error", jt.nonconvex_error}});
  }
  root["joints"] = joints;

  json segs = json::array();
  for (const auto& s : net.segments) {
    json pts = json::array(), li = json::array(), lj = json::array();
    for (size_t k = 0; k < s.points.size(); ++k) {
      pts.push_back(cplx_json(s.points[k]));
      li.push_back(cplx_json(s.lam_i[k]));
      lj.push_back(cplx_json(s.lam_j[k]));
    }
    segs.push_back(json{{"id", s.id},
                        {"origin_branch", s.origin_branch},
                        {"origin_joint", s.origin_joint},
                        {"iteration", s.birth_iteration},
                        {"status", status_name(s.status)},
                        {"end_disc", s.end_disc},
                        {"arc_length", s.arc_length},
                        {"max_phase_residual", s.max_phase_residual},
                        {"points", pts},
                        {"lam_i", li},
                        {"lam_j", lj}});
  }
  root["segments"] = segs;
  return root.dump(1);
}

GraphSummary load_graph_summary(const std::string& text) {
  json root = json::parse(text);
  if (root.at("schema").get<std::string>() != "camnet/1")
    throw CamnetError("BadSchema", "expected camnet/1");
  GraphSummary g;
  g.n_branch = static_cast<int>(root.at("branch_points").size());
  g.n_joints = static_cast<int>(root.at("joints").size());
  g.n_segments = static_cast<int>(root.at("segments").size());
  g.n_discs = static_cast<int>(root.at("discs").size());
  g.acyclic = root.at("acyclic").get<bool>();
  for (const auto& s : root.at("segments")) g.statuses.push_back(s.at("status").get<std::string>());
  return g;
}

Network load_network_json(const std::string& text) {
  json root = json::parse(text);
  if (root.at("schema").get<std::string>() != "camnet/1")
    throw CamnetError("BadSchema", "expected camnet/1");
  Network net;
  const json& hp = root.at("hitchin");
  std::vector<GRatFun> coeffs;
  for (const auto& c : hp.at("coefficients")) coeffs.push_back(ratfun_from(c));
  std::vector<GaussRat> punct;
  for (const auto& p : hp.at("punctures")) punct.push_back(gauss_parse(p.get<std::string>()));
  net.hitchin = make_hitchin_point(hp.at("group").get<std::string>(), std::move(coeffs),
                                   std::move(punct), hp.at("puncture_at_infinity").get<bool>());
  net.base_point = cplx_from(root.at("base_point"));
  net.working_radius = root.at("working_radius").get<double>();
  net.domain_scale = root.at("domain_scale").get<double>();
  net.acyclic = root.at("acyclic").get<bool>();
  for (const auto& j : root.at("joint_order")) net.joint_order.push_back(j.get<int>());
  for (const auto& e : root.at("errors")) net.errors.push_back(e.get<std::string>());
  for (const auto& b : root.at("branch_points")) net.branch.push_back(cplx_from(b));
  for (const auto& d : root.at("discs")) {
    DiscRecord dr;
    dr.center = cplx_from(d.at("center"));
    dr.radius = d.at("radius").get<double>();
    dr.outside = d.at("outside").get<bool>();
    dr.puncture.at_infinity = d.at("at_infinity").get<bool>();
    if (!dr.puncture.at_infinity)
      dr.puncture.location = GaussRat(rat_from_double(dr.center.real()),
                                      rat_from_double(dr.center.imag()));
    net.discs.push_back(dr);
  }
  for (const auto& j : root.at("joints")) {
    JointRecord jr;
    jr.id = j.at("id").get<int>();
    jr.position = cplx_from(j.at("position"));
    jr.iteration = j.at("iteration").get<int>();
    jr.nonconvex_error = j.at("nonconvex_error").get<bool>();
    jr.spawned = true;
    for (const auto& r : j.at("rays")) {
      JointIncidence inc;
      inc.segment = r.at("segment").get<int>();
      inc.incoming = r.at("incoming").get<bool>();
      inc.new_curve = r.at("new_curve").get<bool>();
      inc.angle = r.at("angle").get<double>();
      inc.lam_i = cplx_from(r.at("lam_i"));
      inc.lam_j = cplx_from(r.at("lam_j"));
      inc.arc_param = r.at("arc").get<double>();
      jr.rays.push_back(inc);
    }
    net.joints.push_back(jr);
  }
  for (const auto& s : root.at("segments")) {
    CurveSegment seg;
    seg.id = s.at("id").get<int>();
    seg.origin_branch = s.at("origin_branch").get<int>();
    seg.origin_joint = s.at("origin_joint").get<int>();
    seg.birth_iteration = s.at("iteration").get<int>();
    seg.status = status_from(s.at("status").get<std::string>());
    seg.end_disc = s.at("end_disc").get<int>();
    seg.arc_length = s.at("arc_length").get<double>();
    seg.max_phase_residual = s.at("max_phase_residual").get<double>();
    for (const auto& p : s.at("points")) seg.points.push_back(cplx_from(p));
    for (const auto& p : s.at("lam_i")) seg.lam_i.push_back(cplx_from(p));
    for (const auto& p : s.at("lam_j")) seg.lam_j.push_back(cplx_from(p));
    net.segments.push_back(std::move(seg));
  }
  return net;
}

}  // namespace camnet
