#pragma once

// Translation surfaces presented as convex polygons glued along parallel
// edges by translations.

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flatblock/exactnum.h"

namespace flatblock {

/// Directed side (face, i): from vertex i to vertex i+1 of the face.
struct EdgeRef {
  int face = -1;
  int edge = -1;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct CornerRef {
  int face = -1;
  int corner = -1;
  friend auto operator<=>(const CornerRef&, const CornerRef&) = default;
};

struct VertexClass {
  /// Corners in counterclockwise order around the surface vertex.
  std::vector<CornerRef> corners;
  /// Cone angle is 2*pi*multiplicity.
  int multiplicity = 1;
  bool marked = false;

  /// Singular or marked: straight trajectories end here.
  bool blocking() const { return multiplicity > 1 || marked; }
};

/// A translation covering map to the torus R^2 / (Z u + Z w): a point at
/// face-local position p on face f maps to p + face_offsets[f].
struct CoverData {
  Vec2 u;
  Vec2 w;
  std::vector<Vec2> face_offsets;
};

/// Unvalidated presentation; the input of Surface::build.
struct RawSurface {
  long field_d = 1;
  std::vector<std::vector<Vec2>> faces;
  std::vector<std::pair<EdgeRef, EdgeRef>> gluings;
  std::vector<CornerRef> marked;
  std::string name;
};

class Surface {
 public:
  /// Validates and derives vertex classes, cone angles, genus and area.
  /// Throws NonParallelGluing, NonConvexFace, Disconnected, FieldMismatch or BadGluing.
  static Surface build(const RawSurface& raw);

  long field() const { return d_; }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  const std::vector<Vec2>& face(int f) const { return faces_.at(f); }
  int num_sides(int f) const { return static_cast<int>(faces_.at(f).size()); }
  const Vec2& vertex(int f, int i) const;
  Vec2 edge_vector(EdgeRef e) const;
  EdgeRef partner(EdgeRef e) const { return partner_.at(e.face).at(e.edge); }
  /// A point p on side e (face-local) equals p + t in the partner face.
  Vec2 gluing_translation(EdgeRef e) const;
  int num_edge_pairs() const { return edge_pairs_; }

  int vertex_class(CornerRef c) const { return corner_class_.at(c.face).at(c.corner); }
  const std::vector<VertexClass>& vertex_classes() const { return classes_; }
  const VertexClass& vertex_class_info(int id) const { return classes_.at(id); }
  bool has_blocking_vertices() const;

  int genus() const { return genus_; }
  const Scalar& area() const { return area_; }
  const Scalar& face_area(int f) const { return face_area_.at(f); }
  const std::string& name() const { return name_; }

  const std::optional<CoverData>& cover() const { return cover_; }
  Surface with_cover(CoverData cover) const;
  Surface with_name(std::string name) const;

  /// Reconstructs the raw presentation, one gluing per edge pair with the
  /// lower side first; marked classes by their representative corner.
  RawSurface raw() const;

 private:
  long d_ = 1;
  std::vector<std::vector<Vec2>> faces_;
  std::vector<std::vector<EdgeRef>> partner_;
  std::vector<std::vector<int>> corner_class_;
  std::vector<VertexClass> classes_;
  std::vector<Scalar> face_area_;
  int edge_pairs_ = 0;
  int genus_ = 0;
  Scalar area_;
  std::string name_;
  std::optional<CoverData> cover_;
};

/// Whether direction dir lies in the half-open corner sector [out, in) of a
/// strictly convex corner, where out is the outgoing side and in points back
/// along the incoming side.
bool in_corner_sector(const Vec2& out, const Vec2& in, const Vec2& dir);
/// Outgoing and incoming-reversed directions at a corner.
std::pair<Vec2, Vec2> corner_sector(const Surface& m, CornerRef c);

// ---------------------------------------------------------------- points

enum class PointKind { Interior, Edge, Vertex };

/// Canonical location on a surface. Edge points live on the lower side of
/// their glued pair; vertex points carry the class id and the position of
/// the class's first corner.
struct SurfacePoint {
  PointKind kind = PointKind::Interior;
  int face = 0;
  /// Side index for edge points, class id for vertex points, -1 otherwise.
  int index = -1;
  Vec2 pos;

  friend bool operator==(const SurfacePoint& l, const SurfacePoint& r) {
    if (l.kind != r.kind) return false;
    if (l.kind == PointKind::Vertex) return l.index == r.index;
    return l.face == r.face && l.index == r.index && l.pos == r.pos;
  }
  friend std::strong_ordering operator<=>(const SurfacePoint& l, const SurfacePoint& r);
};

/// Canonicalizes a face-local position. Throws PreconditionFailed when pos
/// lies outside the closed face.
SurfacePoint locate(const Surface& m, int face, const Vec2& pos);
SurfacePoint vertex_point(const Surface& m, int vertex_class);

struct LocalCopy {
  int face;
  Vec2 pos;
};
/// Every face-local representation of the point (one per incident face
/// corner for vertices, two for edge points).
std::vector<LocalCopy> local_copies(const Surface& m, const SurfacePoint& p);

bool is_blocking_point(const Surface& m, const SurfacePoint& p);

/// "f:(x,y)" or "v<class>".
std::string format_point(const SurfacePoint& p);
/// Parses "f:(x,y)" or "v<class>" (also "vertex:<class>").
SurfacePoint parse_point(const Surface& m, std::string_view text);

// ---------------------------------------------------------------- builders

Surface make_torus();
/// Unit torus as n^2 square faces of side 1/n.
Surface make_torus_grid(int n);
/// Six-cell Escher staircase; an H(2,2) origami with an order-3 deck map.
Surface make_staircase();
/// Unit square with an a-by-1 rectangle to its right and a 1-by-b
/// rectangle on top; faces 0 (square), 1 (right), 2 (top).
Surface make_l_shaped(const Scalar& a, const Scalar& b);
/// L-shaped surface with a = b = (sqrt(5)-1)/2 over Q(sqrt 5).
Surface make_golden_l();
/// Regular octagon with opposite sides glued, over Q(sqrt 2).
Surface make_octagon();

/// Square-tiled surface: square i glued right to h[i] and up to v[i]
/// (0-based permutations). Throws NotTransitive.
Surface make_origami(const std::vector<int>& h, const std::vector<int>& v);

/// Cycle type of the commutator h v h^-1 v^-1, sorted descending.
std::vector<int> commutator_cycle_type(const std::vector<int>& h, const std::vector<int>& v);

/// Grid edge shifts for branched_cover_grid: entries [0, n^2) are the
/// right sides of cells (i, j) at j*n+i, entries [n^2, 2n^2) their tops.
using EdgeShifts = std::vector<int>;

/// Degree-k cover of torus_grid(n) with sheets Z/k; crossing a grid side
/// in the positive direction adds its shift to the sheet index.
Surface make_branched_cover_grid(int n, int k, const EdgeShifts& shifts);
/// Local monodromy around grid vertex (i, j) as an element of Z/k.
int grid_vertex_monodromy(int n, int k, const EdgeShifts& shifts, int i, int j);
/// Shifts giving a connected cover with monodromy of order k at every grid
/// vertex. Throws BadParams when the search finds none.
EdgeShifts find_full_ramification_shifts(int n, int k);

/// Named builtin; params are the ':'-separated tail (e.g. "torus_grid:3",
/// "l_shaped:1,1", "origami:2,1,3/1,3,2", "cover_grid:2,2").
Surface builtin(std::string_view spec);
std::vector<std::string> builtin_names();

/// Image of the surface under a matrix with positive determinant.
Surface gl2_act(const Surface& m, const Mat2& g);

// ---------------------------------------------------------------- io

/// JSON surface file: field_d, faces, gluings, marked_vertices, optional name.
std::string serialize_surface(const Surface& m);
Surface parse_surface(std::string_view text);
Surface load_surface(const std::string& path);

// ---------------------------------------------------------------- rectilinear

/// Decomposition of an axis-aligned rectilinear polygon into grid cells.
struct RectilinearSplit {
  std::vector<std::vector<Vec2>> faces;
  /// Internal gluings between neighbouring cells.
  std::vector<std::pair<EdgeRef, EdgeRef>> gluings;
  /// For each side of the input polygon, the cell sides covering it in
  /// order along the side.
  std::vector<std::vector<EdgeRef>> boundary;
};

/// Splits a counterclockwise rectilinear polygon along every vertex
/// abscissa and ordinate. Throws BadPolygon for non-rectilinear input.
RectilinearSplit split_rectilinear(const std::vector<Vec2>& polygon);

// ---------------------------------------------------------------- billiards

/// Simple convex polygon with interior angles pi * angles[i] at vertices[i].
struct RationalPolygon {
  long field_d = 1;
  std::vector<Vec2> vertices;
  std::vector<Rational> angles;
};

struct Unfolding {
  Surface surface;
  /// Linear parts of the reflection group, one per polygon copy.
  std::vector<Mat2> group;
  /// Polygon vertex i of copy c sits at face c, corner corner_of[c][i].
  std::vector<std::vector<int>> corner_of;

  /// Copies of a polygon point on the unfolded surface.
  std::vector<SurfacePoint> lift(const Vec2& p) const;
};

/// Reflection-group unfolding of a rational billiard table. Throws
/// FieldInsufficient, BadPolygon or NonConvexFace.
Unfolding unfold_billiard(const RationalPolygon& p);

}  // namespace flatblock
