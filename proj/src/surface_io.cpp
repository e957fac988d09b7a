#include <fstream>
#include <set>
#include <sstream>

#include "flatblock/surface.h"
#include "json.hpp"

namespace flatblock {

using nlohmann::ordered_json;

namespace {

ordered_json vec_json(const Vec2& v) { return ordered_json::array({v.x.str(), v.y.str()}); }

Vec2 parse_vec_json(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    throw Error(ErrorCode::ParseError, "vertex must be a pair of scalar strings, got " + j.dump());
  return {Scalar::parse(j[0].get<std::string>()), Scalar::parse(j[1].get<std::string>())};
}

std::pair<int, int> parse_ref(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw Error(ErrorCode::ParseError, "expected [face, index], got " + j.dump());
  return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

std::string serialize_surface(const Surface& m) {
  RawSurface raw = m.raw();
  ordered_json out;
  out["field_d"] = raw.field_d;
  out["faces"] = ordered_json::array();
  for (const auto& poly : raw.faces) {
    ordered_json f = ordered_json::array();
    for (const auto& v : poly) f.push_back(vec_json(v));
    out["faces"].push_back(f);
  }
  out["gluings"] = ordered_json::array();
  for (const auto& [a, b] : raw.gluings)
    out["gluings"].push_back(ordered_json::array({ordered_json::array({a.face, a.edge}), ordered_json::array({b.face, b.edge})}));
  out["marked_vertices"] = ordered_json::array();
  for (const auto& c : raw.marked) out["marked_vertices"].push_back(ordered_json::array({c.face, c.corner}));
  if (!raw.name.empty()) out["name"] = raw.name;
  if (m.cover()) {
    ordered_json c;
    c["u"] = vec_json(m.cover()->u);
    c["w"] = vec_json(m.cover()->w);
    c["face_offsets"] = ordered_json::array();
    for (const auto& o : m.cover()->face_offsets) c["face_offsets"].push_back(vec_json(o));
    out["cover"] = c;
  }
  return out.dump(2) + "\n";
}

Surface parse_surface(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "surface file must be an object");
  static const std::set<std::string> known{"field_d", "faces", "gluings", "marked_vertices", "name", "cover"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw Error(ErrorCode::ParseError, "unknown field '" + key + "'");
  for (const char* key : {"field_d", "faces", "gluings"})
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");

  RawSurface raw;
  if (!j["field_d"].is_number_integer()) throw Error(ErrorCode::ParseError, "field_d must be an integer");
  raw.field_d = j["field_d"].get<long>();
  if (!j["faces"].is_array() || !j["gluings"].is_array()) throw Error(ErrorCode::ParseError, "faces and gluings must be lists");
  for (const auto& f : j["faces"]) {
    if (!f.is_array()) throw Error(ErrorCode::ParseError, "face must be a vertex list");
    std::vector<Vec2> poly;
    for (const auto& v : f) poly.push_back(parse_vec_json(v));
    raw.faces.push_back(std::move(poly));
  }
  for (const auto& g : j["gluings"]) {
    if (!g.is_array() || g.size() != 2) throw Error(ErrorCode::ParseError, "gluing must be a pair of sides");
    auto [fa, ea] = parse_ref(g[0]);
    auto [fb, eb] = parse_ref(g[1]);
    raw.gluings.push_back({{fa, ea}, {fb, eb}});
  }
  if (j.contains("marked_vertices")) {
    if (!j["marked_vertices"].is_array()) throw Error(ErrorCode::ParseError, "marked_vertices must be a list");
    for (const auto& c : j["marked_vertices"]) {
      auto [f, i] = parse_ref(c);
      raw.marked.push_back({f, i});
    }
  }
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw Error(ErrorCode::ParseError, "name must be a string");
    raw.name = j["name"].get<std::string>();
  }
  Surface m = Surface::build(raw);
  if (j.contains("cover")) {
    const auto& c = j["cover"];
    if (!c.is_object() || !c.contains("u") || !c.contains("w") || !c.contains("face_offsets"))
      throw Error(ErrorCode::ParseError, "cover needs u, w and face_offsets");
    CoverData cover{parse_vec_json(c["u"]), parse_vec_json(c["w"]), {}};
    for (const auto& o : c["face_offsets"]) cover.face_offsets.push_back(parse_vec_json(o));
    if (static_cast<int>(cover.face_offsets.size()) != m.num_faces())
      throw Error(ErrorCode::ParseError, "cover needs one offset per face");
    m = m.with_cover(std::move(cover));
  }
  return m;
}

Surface load_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IOError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_surface(ss.str());
}

}  // namespace flatblock
