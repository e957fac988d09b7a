#include "flatblock/render.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>

namespace flatblock {

namespace {

using Pt = std::pair<double, double>;

constexpr double kScale = 100.0;
const char* const kPalette[] = {"#dbe9f6", "#f6e3cf", "#dcefd8", "#efd8ec", "#f3f0c8", "#d8ecef"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s = buf;
  if (s == "-0.0000") s = "0.0000";
  return s;
}

Pt to_pt(const Vec2& v) { return {v.x.to_double(), v.y.to_double()}; }

std::vector<Pt> placed(const Surface& m, const Layout& l, int f) {
  std::vector<Pt> out;
  for (const auto& v : m.face(f)) {
    Pt p = to_pt(v);
    out.push_back({p.first + l.offsets[f].first, p.second + l.offsets[f].second});
  }
  return out;
}

// Separating-axis test for open convex polygons.
bool overlap(const std::vector<Pt>& a, const std::vector<Pt>& b) {
  auto separated = [](const std::vector<Pt>& p, const std::vector<Pt>& q) {
    for (size_t i = 0; i < p.size(); ++i) {
      Pt s = p[i], e = p[(i + 1) % p.size()];
      double nx = e.second - s.second, ny = s.first - e.first;
      double lo = 1e300;
      for (const auto& v : q) lo = std::min(lo, (v.first - s.first) * nx + (v.second - s.second) * ny);
      if (lo >= -1e-9) return true;
    }
    return false;
  };
  return !separated(a, b) && !separated(b, a);
}

std::string svg_point(const Pt& p) { return num(p.first * kScale) + "," + num(-p.second * kScale); }

}  // namespace

Layout layout_faces(const Surface& m) {
  const int nf = m.num_faces();
  Layout l;
  l.offsets.assign(nf, {0, 0});
  std::vector<bool> seen(nf, false);
  seen[0] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop_front();
    for (int i = 0; i < m.num_sides(f); ++i) {
      int g = m.partner({f, i}).face;
      if (seen[g]) continue;
      Pt t = to_pt(m.gluing_translation({f, i}));
      l.offsets[g] = {l.offsets[f].first - t.first, l.offsets[f].second - t.second};
      seen[g] = true;
      queue.push_back(g);
    }
  }
  for (int f = 0; f < nf && l.developed; ++f)
    for (int g = f + 1; g < nf; ++g)
      if (overlap(placed(m, l, f), placed(m, l, g))) {
        l.developed = false;
        break;
      }
  if (!l.developed) {
    double cursor = 0;
    for (int f = 0; f < nf; ++f) {
      double x0 = 1e300, x1 = -1e300, y0 = 1e300;
      for (const auto& v : m.face(f)) {
        Pt p = to_pt(v);
        x0 = std::min(x0, p.first);
        x1 = std::max(x1, p.first);
        y0 = std::min(y0, p.second);
      }
      l.offsets[f] = {cursor - x0, -y0};
      cursor += (x1 - x0) + 0.25;
    }
  }
  return l;
}

std::string render_svg(const Surface& m, const RenderOverlay& overlay) {
  Layout l = layout_faces(m);
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (int f = 0; f < m.num_faces(); ++f)
    for (const auto& p : placed(m, l, f)) {
      x0 = std::min(x0, p.first);
      x1 = std::max(x1, p.first);
      y0 = std::min(y0, p.second);
      y1 = std::max(y1, p.second);
    }
  const double pad = 0.2;
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num((x0 - pad) * kScale) << " "
     << num(-(y1 + pad) * kScale) << " " << num((x1 - x0 + 2 * pad) * kScale) << " "
     << num((y1 - y0 + 2 * pad) * kScale) << "\">\n";
  os << "<title>" << (m.name().empty() ? "surface" : m.name()) << "</title>\n";

  os << "<g class=\"faces\" stroke=\"#333\" stroke-width=\"1\">\n";
  for (int f = 0; f < m.num_faces(); ++f) {
    int group = overlay.face_groups.empty() ? 0 : overlay.face_groups.at(f);
    os << "<polygon class=\"face\" data-face=\"" << f << "\" fill=\"" << kPalette[group % 6] << "\" points=\"";
    auto pts = placed(m, l, f);
    for (size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << svg_point(pts[i]);
    os << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g class=\"gluings\" font-size=\"10\" text-anchor=\"middle\" fill=\"#555\">\n";
  int label = 0;
  for (int f = 0; f < m.num_faces(); ++f)
    for (int i = 0; i < m.num_sides(f); ++i) {
      EdgeRef q = m.partner({f, i});
      if (q < EdgeRef{f, i}) continue;
      ++label;
      auto mid = [&](EdgeRef e) {
        auto pts = placed(m, l, e.face);
        Pt a = pts[e.edge], b = pts[(e.edge + 1) % pts.size()];
        return Pt{(a.first + b.first) / 2, (a.second + b.second) / 2};
      };
      Pt a = mid({f, i}), b = mid(q);
      if (std::abs(a.first - b.first) < 1e-9 && std::abs(a.second - b.second) < 1e-9) continue;
      for (EdgeRef e : {EdgeRef{f, i}, q}) {
        Pt p = mid(e);
        os << "<text x=\"" << num(p.first * kScale) << "\" y=\"" << num(-p.second * kScale) << "\">" << label
           << "</text>\n";
      }
    }
  os << "</g>\n";

  auto polyline = [&](const Piece& p, const char* cls) {
    Pt a = to_pt(p.from), b = to_pt(p.to);
    const Pt& o = l.offsets[p.face];
    os << "<polyline class=\"" << cls << "\" points=\"" << svg_point({a.first + o.first, a.second + o.second}) << " "
       << svg_point({b.first + o.first, b.second + o.second}) << "\"/>\n";
  };
  if (overlay.cylinders) {
    os << "<g class=\"saddles\" stroke=\"#a33\" stroke-width=\"1.5\" fill=\"none\">\n";
    for (const auto& s : overlay.cylinders->saddles) {
      os << "<g class=\"saddle\">\n";
      for (const auto& p : s.pieces) polyline(p, "piece");
      os << "</g>\n";
    }
    os << "</g>\n";
  }
  os << "<g class=\"segments\" stroke=\"#1f5fa8\" stroke-width=\"1\" fill=\"none\">\n";
  for (const auto& s : overlay.segments) {
    os << "<g class=\"segment\">\n";
    for (const auto& p : s.pieces) polyline(p, "piece");
    os << "</g>\n";
  }
  os << "</g>\n";

  os << "<g class=\"singular\" fill=\"#000\">\n";
  for (int c = 0; c < static_cast<int>(m.vertex_classes().size()); ++c) {
    const auto& info = m.vertex_class_info(c);
    if (!info.blocking()) continue;
    for (const auto& k : info.corners) {
      Pt p = to_pt(m.vertex(k.face, k.corner));
      const Pt& o = l.offsets[k.face];
      os << "<rect data-class=\"" << c << "\" x=\"" << num((p.first + o.first) * kScale - 3) << "\" y=\""
         << num(-(p.second + o.second) * kScale - 3) << "\" width=\"6\" height=\"6\"/>\n";
    }
  }
  os << "</g>\n";

  os << "<g class=\"points\" fill=\"#c22\">\n";
  for (const auto& sp : overlay.points) {
    LocalCopy c = local_copies(m, sp).front();
    Pt p = to_pt(c.pos);
    const Pt& o = l.offsets[c.face];
    os << "<circle cx=\"" << num((p.first + o.first) * kScale) << "\" cy=\"" << num(-(p.second + o.second) * kScale)
       << "\" r=\"3\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IOError, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::IOError, "write failed for " + path);
}

}  // namespace flatblock
