#pragma once

// Finite blocking: verification, lower bounds from disjoint families and
// minimum stabbing sets, explicit torus and cover constructions.

#include <optional>
#include <string>
#include <vector>

#include "flatblock/holonomy.h"
#include "flatblock/tracer.h"

namespace flatblock {

/// Whether p lies on the segment other than at its two ends.
bool in_segment_interior(const Surface& m, const Segment& s, const SurfacePoint& p);
/// Whether the open segments share a point.
bool interiors_intersect(const Surface& m, const Segment& a, const Segment& b);

struct VerifyResult {
  bool blocked = true;
  size_t segments = 0;
  /// First segment (canonical order) avoiding the set.
  std::optional<Segment> witness;
};

/// Throws ContainsEndpoint when the set contains x or y.
VerifyResult verify_blocking(const Surface& m, const SurfacePoint& x, const SurfacePoint& y, const Scalar& max_len_sq,
                             const std::vector<SurfacePoint>& set, const EnumerationOptions& opts = {});
/// Same check against an already enumerated family.
VerifyResult verify_blocking(const Surface& m, const std::vector<Segment>& segments,
                             const std::vector<SurfacePoint>& set);

struct DisjointFamily {
  /// Indices into the segment list.
  std::vector<int> members;
  /// False when the search stopped at its node limit.
  bool optimal = true;
};

/// Largest family of pairwise interior-disjoint segments.
DisjointFamily max_disjoint_family(const Surface& m, const std::vector<Segment>& segments, long node_limit = 2'000'000);

struct StabbingSet {
  std::vector<SurfacePoint> points;
  bool optimal = true;
};

/// Fewest points, none equal to x or y, meeting every segment interior.
StabbingSet min_stab(const Surface& m, const SurfacePoint& x, const SurfacePoint& y,
                     const std::vector<Segment>& segments, long node_limit = 2'000'000);

// ---------------------------------------------------------------- torus

/// The n^2 points z with n z = p.
std::vector<TorusPoint> mn_preimage(int n, const TorusPoint& p);
/// Points at fraction a/n along every segment from x to y: the preimage
/// under multiplication by n of (n - a) x + a y. Needs x != y, gcd(a, n) = 1.
std::vector<TorusPoint> torus_blocking_set(const TorusPoint& x, const TorusPoint& y, int n, int a);
/// x + (1/n) Z^2 without x; blocks every loop at x.
std::vector<TorusPoint> torus_blocking_set_diagonal(const TorusPoint& x, int n);

struct LiftedSet {
  struct Entry {
    TorusPoint base;
    std::vector<SurfacePoint> fiber;
    /// Multiplicity of each fiber point (1 for regular points).
    std::vector<int> ramification;
  };
  std::vector<SurfacePoint> points;
  std::vector<Entry> entries;
};

LiftedSet lift_blocking_to_cover(const Surface& m, const CoverMap& c, const std::vector<TorusPoint>& base);

struct NonIlluminationCertificate {
  int n = 0;
  /// 0 in diagonal mode.
  int a = 0;
  TorusPoint px;
  TorusPoint py;
  LiftedSet lifted;
};

/// Looks for a torus blocking set whose whole preimage consists of
/// blocking vertices; then no segment joins x and y at any length.
std::optional<NonIlluminationCertificate> certify_non_illumination(const Surface& m, const SurfacePoint& x,
                                                                   const SurfacePoint& y, int max_n = 12);
/// Independent re-check of a certificate.
bool check_certificate(const Surface& m, const NonIlluminationCertificate& cert);

// ---------------------------------------------------------------- report

struct BlockingReport {
  Scalar budget;
  size_t segments = 0;
  int lower = 0;
  DisjointFamily family;
  StabbingSet stab;
  enum class UpperKind { None, LengthBounded, Structural };
  UpperKind upper_kind = UpperKind::None;
  std::optional<int> upper;
  std::vector<SurfacePoint> upper_set;
  std::string upper_source;
  std::optional<NonIlluminationCertificate> certificate;
};

/// Bounds on the blocking cardinality of (x, y) at the budget.
BlockingReport bc_report(const Surface& m, const SurfacePoint& x, const SurfacePoint& y, const Scalar& max_len_sq,
                         const EnumerationOptions& opts = {});

}  // namespace flatblock
