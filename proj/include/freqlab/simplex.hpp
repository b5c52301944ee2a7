#pragma once

// Geometry of the probability simplex: points in barycentric coordinates,
// boundary intercepts along rays, quantized directions, polygonal curve
// approximation and (one-sided) Hausdorff distances.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace freqlab {

using Vec = std::vector<double>;

/// Validity tolerance after floating point arithmetic.
inline constexpr double kSimplexTol = 1e-12;
/// A coordinate within this distance of zero counts as on the boundary.
inline constexpr double kBoundaryTol = 1e-10;

/// A finitely additive probability on a k-element outcome set.
class SimplexPoint {
 public:
  SimplexPoint() = default;
  /// Throws Error(InvalidPoint) unless coords are nonnegative and sum to one
  /// (both within kSimplexTol).
  explicit SimplexPoint(Vec coords);

  static SimplexPoint vertex(std::size_t k, std::size_t index);
  static SimplexPoint uniform(std::size_t k);
  /// Exact per-coordinate ratio counts[i] / sum(counts).
  static SimplexPoint from_counts(std::span<const std::uint64_t> counts);

  std::size_t dim() const { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  std::span<const double> coords() const { return c_; }
  const Vec& vec() const { return c_; }

  bool on_boundary(double tol = kBoundaryTol) const;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  struct Unchecked {};
  SimplexPoint(Vec coords, Unchecked) : c_(std::move(coords)) {}

  Vec c_;
};

using PointSet = std::vector<SimplexPoint>;

bool is_valid_simplex_point(std::span<const double> coords,
                            double tol = kSimplexTol);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(std::span<const double> a, std::span<const double> b);
double point_segment_distance(std::span<const double> p,
                              std::span<const double> a,
                              std::span<const double> b);

/// Intercept of the ray from p_old through p_new with the simplex boundary.
struct BoundaryIntercept {
  bool on_boundary = false;  // p_new already on the boundary; gamma == 1
  double gamma = 1.0;
  SimplexPoint p_star;
};

/// gamma = min{ p_old_i / (p_old_i - p_new_i) : that ratio > 0 },
/// p_star = gamma (p_new - p_old) + p_old.
/// Throws DegeneratePair when p_old == p_new.
BoundaryIntercept boundary_intercept(const SimplexPoint& p_old,
                                     const SimplexPoint& p_new);

/// Nearest integer with halves rounded up: floor(y + 1/2).
std::int64_t round_half_up(double y);

struct QuantizedDirection {
  std::vector<std::int64_t> iota;
  std::int64_t T = 0;
  std::int64_t T_tilde = 0;  // sum of iota
  Vec p_tilde;               // iota / T, not necessarily in the simplex
  SimplexPoint p_hat;        // iota / T_tilde
};

/// Throws ZeroMass if every iota_i rounds to zero.
QuantizedDirection quantize_direction(const SimplexPoint& p_star,
                                      std::int64_t T);

/// A closed curve in the simplex: either an explicit polygon or the builtin
/// lemniscate of Bernoulli scaled into the 2-simplex.
struct CurveSpec {
  enum class Kind { Polygon, Lemniscate3 };

  Kind kind = Kind::Polygon;
  PointSet polygon;  // closing vertex optional
  double center = 1.0 / 3.0;
  double scale = 1.0 / 12.0;

  static CurveSpec lemniscate3(double center = 1.0 / 3.0,
                               double scale = 1.0 / 12.0);
  static CurveSpec from_polygon(PointSet vertices);

  std::size_t dim() const;
  /// c(u) for u in [0, 1]; c(0) == c(1).
  SimplexPoint evaluate(double u) const;
};

/// p_v = c(v / V) for v = 0..V. Polygons whose vertex count differs from V
/// are resampled by arclength; p_V is always an exact copy of p_0.
PointSet polygonal_approximation(const CurveSpec& curve, std::int64_t V);

/// One-sided distance max_{a in A} min_{b in B} |a - b|.
double hausdorff_distance(std::span<const SimplexPoint> a,
                          std::span<const SimplexPoint> b);
/// Same, with B read as a polyline (point-to-segment distances).
double hausdorff_to_polyline(std::span<const SimplexPoint> a,
                             std::span<const SimplexPoint> polyline);
double distance_to_polyline(std::span<const double> p,
                            std::span<const SimplexPoint> polyline);

double curve_length(std::span<const SimplexPoint> polyline);

/// Ternary-plot coordinates of a point of the 2-simplex:
/// x = r2 + r3/2, y = (sqrt 3 / 2) r3. The simplex maps to a unit-side triangle.
using Point2 = std::array<double, 2>;
Point2 ternary_projection(std::span<const double> p);
inline constexpr double kTernaryTriangleArea = 0.4330127018922193;  // sqrt(3)/4

/// Andrew's monotone chain; counter-clockwise, no repeated endpoint,
/// collinear points dropped.
std::vector<Point2> convex_hull_2d(std::vector<Point2> pts);
double polygon_area(std::span<const Point2> polygon);

}  // namespace freqlab
