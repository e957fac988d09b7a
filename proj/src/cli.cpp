#include "flatblock/cli.h"

#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "flatblock/autos.h"
#include "flatblock/render.h"

namespace flatblock::cli {

namespace {

constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

Json vec_json(const Vec2& v) { return Json::array({v.x.str(), v.y.str()}); }
Vec2 vec_from_json(const Json& j) { return {Scalar::parse(j.at(0).get<std::string>()), Scalar::parse(j.at(1).get<std::string>())}; }

Json points_json(const std::vector<SurfacePoint>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(format_point(p));
  return a;
}

struct Common {
  std::string surface_file;
  std::string builtin_spec;
  std::vector<std::string> points;
  std::vector<int> vertices;
  std::string budget;
  std::string format = "text";
  int workers = 1;
  long max_nodes = 10'000'000;
  std::string dir;
};

void add_surface_opts(CLI::App* sub, Common& c) {
  auto* s = sub->add_option("--surface", c.surface_file, "surface file");
  auto* b = sub->add_option("--builtin", c.builtin_spec, "builtin name[:params]");
  s->excludes(b);
  sub->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
}

void add_point_opts(CLI::App* sub, Common& c) {
  sub->add_option("--point", c.points, "point f:(x,y)");
  sub->add_option("--vertex", c.vertices, "vertex class id");
}

void add_budget_opts(CLI::App* sub, Common& c, bool required) {
  auto* o = sub->add_option("--budget-len-sq", c.budget, "length^2 budget (exact scalar)");
  if (required) o->required();
  sub->add_option("--workers", c.workers, "enumeration threads")->check(CLI::Range(1, 256));
  sub->add_option("--max-nodes", c.max_nodes, "unfolding tree guard");
}

Surface load(const Common& c) {
  if (!c.surface_file.empty()) return load_surface(c.surface_file);
  if (!c.builtin_spec.empty()) return builtin(c.builtin_spec);
  throw CLI::ValidationError("one of --surface or --builtin is required");
}

// Points in command-line order, mixing --point and --vertex.
std::vector<SurfacePoint> ordered_points(const Surface& m, CLI::App* sub, const Common& c) {
  std::vector<SurfacePoint> out;
  size_t pi = 0, vi = 0;
  const CLI::Option* point_opt = sub->get_option_no_throw("--point");
  const CLI::Option* vertex_opt = sub->get_option_no_throw("--vertex");
  for (const CLI::Option* o : sub->parse_order()) {
    if (o == point_opt) out.push_back(parse_point(m, c.points.at(pi++)));
    if (o == vertex_opt) {
      int id = c.vertices.at(vi++);
      if (id < 0 || id >= static_cast<int>(m.vertex_classes().size()))
        throw Error(ErrorCode::PreconditionFailed, "no vertex class " + std::to_string(id));
      out.push_back(vertex_point(m, id));
    }
  }
  return out;
}

std::vector<SurfacePoint> need_points(const Surface& m, CLI::App* sub, const Common& c, size_t n) {
  auto pts = ordered_points(m, sub, c);
  if (pts.size() != n)
    throw CLI::ValidationError("expected " + std::to_string(n) + " point(s) via --point/--vertex, got " +
                               std::to_string(pts.size()));
  return pts;
}

EnumerationOptions enum_opts(const Common& c) {
  EnumerationOptions o;
  o.workers = c.workers;
  o.max_nodes = c.max_nodes;
  return o;
}

void emit(std::ostream& out, const Common& c, const Json& j, const std::string& human) {
  if (c.format == "structured")
    out << j.dump(2) << "\n";
  else
    out << human;
}

std::string kind_name(BlockingReport::UpperKind k) {
  switch (k) {
    case BlockingReport::UpperKind::None: return "none";
    case BlockingReport::UpperKind::LengthBounded: return "length_bounded";
    case BlockingReport::UpperKind::Structural: return "structural";
  }
  return "none";
}

Json surface_info(const Surface& m) {
  Json j;
  j["name"] = m.name();
  j["field_d"] = m.field();
  j["faces"] = m.num_faces();
  j["edge_pairs"] = m.num_edge_pairs();
  j["area"] = m.area().str();
  j["genus"] = m.genus();
  Json classes = Json::array();
  for (int k = 0; k < static_cast<int>(m.vertex_classes().size()); ++k) {
    const auto& v = m.vertex_class_info(k);
    Json corners = Json::array();
    for (const auto& c : v.corners) corners.push_back(Json::array({c.face, c.corner}));
    classes.push_back({{"id", k}, {"multiplicity", v.multiplicity}, {"marked", v.marked}, {"corners", corners}});
  }
  j["vertex_classes"] = classes;
  j["cover_data"] = m.cover().has_value();
  return j;
}

std::string info_text(const Surface& m) {
  std::ostringstream os;
  os << "name: " << (m.name().empty() ? "-" : m.name()) << "\n";
  os << "field_d: " << m.field() << "\nfaces: " << m.num_faces() << "\nedge_pairs: " << m.num_edge_pairs()
     << "\narea: " << m.area().str() << "\ngenus: " << m.genus() << "\n";
  for (int k = 0; k < static_cast<int>(m.vertex_classes().size()); ++k) {
    const auto& v = m.vertex_class_info(k);
    os << "vertex v" << k << ": angle 2pi*" << v.multiplicity << (v.marked ? " marked" : "") << " corners";
    for (const auto& c : v.corners) os << " " << c.face << ":" << c.corner;
    os << "\n";
  }
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> deck_orbits(const Surface& m) {
  AffineAuto d = deck_translation(m);
  std::vector<int> group(m.num_faces(), -1);
  int next = 0;
  for (int f = 0; f < m.num_faces(); ++f) {
    if (group[f] >= 0) continue;
    for (int g = f; group[g] < 0; g = d.face_perm[g]) group[g] = next;
    ++next;
  }
  return group;
}

}  // namespace

Json to_json(const Segment& s) {
  Json j;
  j["record"] = s.str();
  j["start"] = format_point(s.start);
  j["end"] = format_point(s.end);
  j["len_sq"] = s.length_sq.str();
  j["holonomy"] = vec_json(s.holonomy);
  Json cr = Json::array();
  for (const auto& c : s.crossings) cr.push_back(c.str());
  j["crossings"] = cr;
  Json pieces = Json::array();
  for (const auto& p : s.pieces)
    pieces.push_back({{"face", p.face},
                      {"from", vec_json(p.from)},
                      {"to", vec_json(p.to)},
                      {"offset", vec_json(p.offset)},
                      {"along_edge", p.along_edge}});
  j["pieces"] = pieces;
  return j;
}

Segment segment_from_json(const Surface& m, const Json& j) {
  Segment s;
  s.start = parse_point(m, j.at("start").get<std::string>());
  s.end = parse_point(m, j.at("end").get<std::string>());
  s.length_sq = Scalar::parse(j.at("len_sq").get<std::string>());
  s.holonomy = vec_from_json(j.at("holonomy"));
  for (const auto& c : j.at("crossings")) s.crossings.push_back(parse_crossing(c.get<std::string>()));
  for (const auto& p : j.at("pieces"))
    s.pieces.push_back({p.at("face").get<int>(), vec_from_json(p.at("from")), vec_from_json(p.at("to")),
                        vec_from_json(p.at("offset")), p.at("along_edge").get<bool>()});
  return s;
}

Json to_json(const BlockingReport& r) {
  Json j;
  j["budget_len_sq"] = r.budget.str();
  j["segments"] = r.segments;
  j["lower"] = r.lower;
  if (r.upper)
    j["upper"] = *r.upper;
  else
    j["upper"] = "inf";
  j["upper_kind"] = kind_name(r.upper_kind);
  j["upper_source"] = r.upper_source;
  j["upper_set"] = points_json(r.upper_set);
  j["disjoint_family"] = {{"size", r.family.members.size()}, {"optimal", r.family.optimal}, {"members", r.family.members}};
  j["min_stab"] = {{"size", r.stab.points.size()}, {"optimal", r.stab.optimal}, {"points", points_json(r.stab.points)}};
  if (r.certificate) {
    const auto& c = *r.certificate;
    Json base = Json::array();
    for (const auto& e : c.lifted.entries) {
      Json fib = Json::array();
      for (size_t i = 0; i < e.fiber.size(); ++i)
        fib.push_back({{"point", format_point(e.fiber[i])}, {"ramification", e.ramification[i]}});
      base.push_back({{"base", e.base.str()}, {"fiber", fib}});
    }
    j["certificate"] = {{"n", c.n}, {"a", c.a}, {"px", c.px.str()}, {"py", c.py.str()}, {"table", base}};
  }
  return j;
}

Json to_json(const TorusCoverVerdict& v) {
  Json j;
  j["torus_cover"] = v.is_cover ? "yes" : "no";
  Json gens = Json::array();
  for (const auto& g : v.group.generators) gens.push_back(vec_json(g));
  j["generators"] = gens;
  j["z_rank"] = v.group.z_rank;
  j["span_dim"] = v.group.span_dim;
  if (v.is_cover) {
    j["lattice"] = Json::array({vec_json(v.u), vec_json(v.w)});
    j["degree"] = format_rational(v.degree);
    Json bps = Json::array();
    for (const auto& b : v.branch_points)
      bps.push_back({{"point", b.point.str()}, {"vertex", b.vertex_class}, {"ramification", b.multiplicity}});
    j["branch_points"] = bps;
  } else {
    Json w = Json::array();
    for (const auto& g : v.witness) w.push_back(vec_json(g));
    j["witness"] = w;
  }
  return j;
}

Json to_json(const CylinderDecomposition& d) {
  Json j;
  j["direction"] = vec_json(d.direction);
  j["complete"] = d.complete;
  Json cyls = Json::array();
  for (const auto& c : d.cylinders)
    cyls.push_back({{"scale", c.scale.str()},
                    {"holonomy", vec_json(c.holonomy)},
                    {"circumference_sq", c.circumference_sq.str()},
                    {"height_sq", c.height_sq.str()},
                    {"area", c.area.str()},
                    {"bottom", c.bottom},
                    {"top", c.top}});
  j["cylinders"] = cyls;
  Json ratios = Json::array();
  for (const auto& r : d.ratios) ratios.push_back(r.str());
  j["ratios"] = ratios;
  Json saddles = Json::array();
  for (const auto& s : d.saddles) saddles.push_back(s.str());
  j["saddles"] = saddles;
  if (d.witness) {
    j["witness"] = {{"holonomy", vec_json(d.witness->holonomy)}, {"len_sq", d.witness->length_sq.str()}};
  }
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flatblock: exact blocking and illumination on translation surfaces", "flatblock"};
  app.require_subcommand(1);
  Common c;

  auto* validate = app.add_subcommand("validate", "check a surface and print its invariants");
  add_surface_opts(validate, c);

  auto* info = app.add_subcommand("info", "surface invariants and vertex classes");
  add_surface_opts(info, c);
  bool dump = false;
  info->add_flag("--dump", dump, "print the surface file instead");

  auto* trace_cmd = app.add_subcommand("trace", "forward trace from a point");
  add_surface_opts(trace_cmd, c);
  add_point_opts(trace_cmd, c);
  add_budget_opts(trace_cmd, c, true);
  trace_cmd->add_option("--dir", c.dir, "direction (x,y)")->required();
  std::string sector;
  trace_cmd->add_option("--sector", sector, "corner f:c for a blocking start vertex");

  auto* segments = app.add_subcommand("segments", "all segments from x to y within the budget");
  add_surface_opts(segments, c);
  add_point_opts(segments, c);
  add_budget_opts(segments, c, true);

  auto* verify = app.add_subcommand("block-verify", "check a blocking set at a budget");
  add_surface_opts(verify, c);
  add_point_opts(verify, c);
  add_budget_opts(verify, c, true);
  std::vector<std::string> blockers;
  verify->add_option("--blocker", blockers, "blocking point f:(x,y) or v<class>");

  auto* report = app.add_subcommand("block-report", "bounds on the blocking cardinality");
  add_surface_opts(report, c);
  add_point_opts(report, c);
  add_budget_opts(report, c, true);

  auto* cover = app.add_subcommand("torus-cover", "torus cover detection");
  add_surface_opts(cover, c);

  auto* cyl = app.add_subcommand("cylinders", "cylinder decomposition in a direction");
  add_surface_opts(cyl, c);
  add_budget_opts(cyl, c, false);
  cyl->add_option("--dir", c.dir, "direction (x,y)")->required();

  auto* pure = app.add_subcommand("pure-periodic", "pure periodicity in a direction");
  add_surface_opts(pure, c);
  add_budget_opts(pure, c, false);
  pure->add_option("--dir", c.dir, "direction (x,y)")->required();

  auto* unfold = app.add_subcommand("unfold", "unfold a rational billiard table");
  unfold->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  std::string poly_vertices, poly_angles, out_path;
  long field = 1;
  unfold->add_option("--vertices", poly_vertices, "(x,y);(x,y);...")->required();
  unfold->add_option("--angles", poly_angles, "interior angles over pi, comma separated")->required();
  unfold->add_option("--field", field, "square-free d of the coordinate field");
  unfold->add_option("--out", out_path, "write the surface file here");

  auto* examples = app.add_subcommand("examples", "list builtin surfaces");
  examples->add_option("--format", c.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));

  auto* render = app.add_subcommand("render", "SVG figure of a surface with overlays");
  add_surface_opts(render, c);
  add_point_opts(render, c);
  add_budget_opts(render, c, false);
  render->add_option("--out", out_path, "SVG path")->required();
  std::vector<std::string> marks;
  render->add_option("--blocker", marks, "point to draw as a marker");
  render->add_option("--dir", c.dir, "overlay the cylinder decomposition in this direction");
  bool weierstrass = false, orbits = false;
  render->add_flag("--weierstrass", weierstrass, "mark the Weierstrass points");
  render->add_flag("--deck-orbits", orbits, "colour faces by deck orbit");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    auto budget = [&] { return Scalar::parse(c.budget); };
    auto optional_budget = [&]() -> std::optional<Scalar> {
      if (c.budget.empty()) return std::nullopt;
      return Scalar::parse(c.budget);
    };

    if (*examples) {
      Json list = Json::array();
      std::ostringstream os;
      for (const auto& name : builtin_names()) {
        list.push_back(name);
        os << name << "\n";
      }
      emit(out, c, {{"builtins", list}}, os.str());
      return 0;
    }

    if (*unfold) {
      RationalPolygon p;
      p.field_d = field;
      for (const auto& v : split(poly_vertices, ';')) p.vertices.push_back(parse_vec2(v));
      for (const auto& a : split(poly_angles, ',')) p.angles.push_back(parse_rational(a));
      Unfolding u = unfold_billiard(p);
      if (!out_path.empty()) write_text_file(out_path, serialize_surface(u.surface));
      Json j = surface_info(u.surface);
      j["group_order"] = u.group.size();
      std::ostringstream os;
      os << "group_order: " << u.group.size() << "\n" << info_text(u.surface);
      emit(out, c, j, os.str());
      return 0;
    }

    CLI::App* sub = app.get_subcommands().front();
    Surface m = load(c);

    if (*validate) {
      Json j = surface_info(m);
      j = Json{{"valid", true}, {"surface", j}};
      emit(out, c, j,
           "valid: faces=" + std::to_string(m.num_faces()) + " genus=" + std::to_string(m.genus()) +
               " area=" + m.area().str() + "\n");
      return 0;
    }
    if (*info) {
      if (dump) {
        out << serialize_surface(m);
        return 0;
      }
      emit(out, c, surface_info(m), info_text(m));
      return 0;
    }
    if (*trace_cmd) {
      auto pts = need_points(m, sub, c, 1);
      std::optional<CornerRef> corner;
      if (!sector.empty()) {
        auto parts = split(sector, ':');
        if (parts.size() != 2) throw CLI::ValidationError("--sector expects f:c");
        corner = CornerRef{std::stoi(parts[0]), std::stoi(parts[1])};
      }
      TraceResult t = trace(m, pts[0], parse_vec2(c.dir), budget(), corner);
      Json cr = Json::array();
      for (const auto& x : t.crossings) cr.push_back(x.str());
      Json j{{"start", format_point(pts[0])},
             {"stopped_at_singularity", t.stopped_at_singularity},
             {"point", format_point(t.point)},
             {"exact_end", t.exact_end},
             {"holonomy", vec_json(t.holonomy)},
             {"len_sq", t.length_sq.str()},
             {"crossings", cr}};
      std::ostringstream os;
      os << (t.stopped_at_singularity ? "singularity " : "end ") << format_point(t.point)
         << (t.exact_end ? "" : " (last exit before budget)") << " len_sq=" << t.length_sq.str()
         << " hol=" << t.holonomy.str() << " crossings=" << cr.size() << "\n";
      emit(out, c, j, os.str());
      return 0;
    }
    if (*segments) {
      auto pts = need_points(m, sub, c, 2);
      auto segs = segments_between(m, pts[0], pts[1], budget(), enum_opts(c));
      Json list = Json::array();
      std::ostringstream os;
      for (const auto& s : segs) {
        list.push_back(to_json(s));
        os << s.str() << "\n";
      }
      emit(out, c,
           {{"x", format_point(pts[0])},
            {"y", format_point(pts[1])},
            {"budget_len_sq", c.budget},
            {"count", segs.size()},
            {"segments", list}},
           os.str());
      return 0;
    }
    if (*verify) {
      auto pts = need_points(m, sub, c, 2);
      std::vector<SurfacePoint> set;
      for (const auto& b : blockers) set.push_back(parse_point(m, b));
      auto r = verify_blocking(m, pts[0], pts[1], budget(), set, enum_opts(c));
      Json j{{"x", format_point(pts[0])},
             {"y", format_point(pts[1])},
             {"budget_len_sq", c.budget},
             {"set", points_json(set)},
             {"segments", r.segments},
             {"blocked", r.blocked}};
      if (r.witness) j["witness"] = r.witness->str();
      std::string human = r.blocked ? "blocked (" + std::to_string(r.segments) + " segments)\n"
                                    : "unblocked: " + r.witness->str() + "\n";
      emit(out, c, j, human);
      return 0;
    }
    if (*report) {
      auto pts = need_points(m, sub, c, 2);
      BlockingReport r = bc_report(m, pts[0], pts[1], budget(), enum_opts(c));
      Json j{{"x", format_point(pts[0])}, {"y", format_point(pts[1])}};
      j.update(to_json(r));
      std::ostringstream os;
      os << "bc in [" << r.lower << "," << (r.upper ? std::to_string(*r.upper) : "inf") << "] at budget "
         << r.budget.str() << " (" << r.segments << " segments)\n";
      os << "lower: disjoint family " << r.family.members.size() << (r.family.optimal ? "" : " (greedy)")
         << ", min stabbing " << r.stab.points.size() << (r.stab.optimal ? "" : " (not optimal)") << "\n";
      os << "upper: " << kind_name(r.upper_kind);
      if (!r.upper_source.empty()) os << " [" << r.upper_source << "]";
      for (const auto& p : r.upper_set) os << " " << format_point(p);
      os << "\n";
      emit(out, c, j, os.str());
      return 0;
    }
    if (*cover) {
      auto v = torus_cover(m);
      std::ostringstream os;
      os << "torus_cover: " << (v.is_cover ? "yes" : "no") << "\n";
      if (v.is_cover) {
        os << "lattice: " << v.u.str() << " " << v.w.str() << "\ndegree: " << format_rational(v.degree) << "\n";
        for (const auto& b : v.branch_points)
          os << "branch: " << b.point.str() << " v" << b.vertex_class << " e=" << b.multiplicity << "\n";
      } else {
        os << "witness:";
        for (const auto& g : v.witness) os << " " << g.str();
        os << "\n";
      }
      emit(out, c, to_json(v), os.str());
      return 0;
    }
    if (*cyl || *pure) {
      Vec2 dir = parse_vec2(c.dir);
      std::ostringstream os;
      Json j;
      const CylinderDecomposition* d;
      PeriodicityVerdict v;
      CylinderDecomposition plain;
      if (*pure) {
        v = purely_periodic_in_direction(m, dir, optional_budget());
        d = &v.decomposition;
        const char* names[] = {"yes", "no", "undecided"};
        j["purely_periodic"] = names[static_cast<int>(v.kind)];
        if (v.kind == PeriodicityVerdict::Kind::No) j["witness"] = Json::array({v.witness.first, v.witness.second});
        os << "purely_periodic: " << names[static_cast<int>(v.kind)] << "\n";
        if (v.kind == PeriodicityVerdict::Kind::No)
          os << "witness: cylinders " << v.witness.first << "," << v.witness.second << " ratio "
             << d->ratios[v.witness.second].str() << "\n";
      } else {
        plain = cylinder_decomposition(m, dir, optional_budget());
        d = &plain;
      }
      j["decomposition"] = to_json(*d);
      if (d->complete) {
        os << "cylinders: " << d->cylinders.size() << "\n";
        for (size_t i = 0; i < d->cylinders.size(); ++i) {
          const auto& cy = d->cylinders[i];
          os << "  " << i << ": circumference_sq=" << cy.circumference_sq.str() << " area=" << cy.area.str()
             << " ratio=" << d->ratios[i].str() << "\n";
        }
      } else {
        os << "incomplete: prong " << d->witness->holonomy.str() << " did not close\n";
      }
      emit(out, c, j, os.str());
      return d->complete ? 0 : kExitBudget;
    }
    if (*render) {
      RenderOverlay ov;
      auto pts = ordered_points(m, sub, c);
      if (pts.size() == 2) {
        if (c.budget.empty()) throw CLI::ValidationError("segment overlay needs --budget-len-sq");
        ov.segments = segments_between(m, pts[0], pts[1], budget(), enum_opts(c));
      } else if (!pts.empty()) {
        throw CLI::ValidationError("render takes zero or two points");
      }
      for (const auto& b : marks) ov.points.push_back(parse_point(m, b));
      if (weierstrass)
        for (const auto& p : weierstrass_points(m)) ov.points.push_back(p);
      if (!c.dir.empty()) ov.cylinders = cylinder_decomposition(m, parse_vec2(c.dir), optional_budget());
      if (orbits) ov.face_groups = deck_orbits(m);
      std::string svg = render_svg(m, ov);
      write_text_file(out_path, svg);
      emit(out, c,
           {{"out", out_path},
            {"faces", m.num_faces()},
            {"segments", ov.segments.size()},
            {"points", ov.points.size()}},
           "wrote " + out_path + "\n");
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BudgetTooLargeGuard ? kExitBudget : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace flatblock::cli
