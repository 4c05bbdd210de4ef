#include "camnet/svg.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace camnet {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#bcbd22"};

int label_color_index(const Network& net, const CurveSegment& s) {
  if (s.points.empty()) return 0;
  size_t mid = s.points.size() / 2;
  std::vector<Cplx> lam = net.hitchin.eigenvalues(s.points[mid]);
  auto nearest = [&](Cplx v) {
    int best = 0;
    double bd = 1e300;
    for (size_t k = 0; k < lam.size(); ++k)
      if (std::abs(lam[k] - v) < bd) {
        bd = std::abs(lam[k] - v);
        best = static_cast<int>(k);
      }
    return best;
  };
  int i = nearest(s.lam_i[mid]), j = nearest(s.lam_j[mid]);
  int n = net.hitchin.n;
  return (std::min(i, j) * n + std::max(i, j)) % 9;
}

}  // namespace

std::string network_svg(const Network& net) {
  double R = net.working_radius > 0 ? net.working_radius : 4;
  double view = 1.1 * R;
  std::ostringstream ss;
  ss.precision(8);
  double px = 760;
  double sc = px / (2 * view);
  auto X = [&](Cplx z) { return (z.real() + view) * sc; };
  auto Y = [&](Cplx z) { return (view - z.imag()) * sc; };

  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px << "\" height=\"" << px
     << "\" viewBox=\"0 0 " << px << " " << px << "\">\n";
  ss << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  ss << "<line x1=\"0\" y1=\"" << Y(0) << "\" x2=\"" << px << "\" y2=\"" << Y(0)
     << "\" stroke=\"#dddddd\"/>\n";
  ss << "<line x1=\"" << X(0) << "\" y1=\"0\" x2=\"" << X(0) << "\" y2=\"" << px
     << "\" stroke=\"#dddddd\"/>\n";

  for (const auto& d : net.discs) {
    ss << "<circle cx=\"" << X(d.center) << "\" cy=\"" << Y(d.center) << "\" r=\""
       << d.radius * sc << "\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
  }

  for (const auto& s : net.segments) {
    if (s.points.size() < 2) continue;
    ss << "<polyline fill=\"none\" stroke=\"" << kPalette[label_color_index(net, s)]
       << "\" stroke-width=\"1.4\" points=\"";
    for (Cplx z : s.points) ss << X(z) << "," << Y(z) << " ";
    ss << "\"/>\n";
  }

  for (Cplx b : net.branch) {
    double c = 6;
    ss << "<line x1=\"" << X(b) - c << "\" y1=\"" << Y(b) - c << "\" x2=\"" << X(b) + c
       << "\" y2=\"" << Y(b) + c << "\" stroke=\"#000000\" stroke-width=\"1.6\"/>\n";
    ss << "<line x1=\"" << X(b) - c << "\" y1=\"" << Y(b) + c << "\" x2=\"" << X(b) + c
       << "\" y2=\"" << Y(b) - c << "\" stroke=\"#000000\" stroke-width=\"1.6\"/>\n";
  }
  for (const auto& j : net.joints) {
    ss << "<circle cx=\"" << X(j.position) << "\" cy=\"" << Y(j.position)
       << "\" r=\"3.5\" fill=\"#222222\"/>\n";
  }
  ss << "</svg>\n";
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CamnetError("IOError", "cannot open " + path);
  out << content;
}

}  // namespace camnet
