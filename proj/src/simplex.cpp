#include "freqlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "freqlab/error.hpp"

namespace freqlab {

bool is_valid_simplex_point(std::span<const double> coords, double tol) {
  if (coords.empty()) return false;
  double sum = 0.0;
  for (double c : coords) {
    if (!std::isfinite(c) || c < -tol) return false;
    sum += c;
  }
  return std::abs(sum - 1.0) <= tol;
}

SimplexPoint::SimplexPoint(Vec coords) : c_(std::move(coords)) {
  if (!is_valid_simplex_point(c_)) {
    std::ostringstream os;
    os << "not a point of the simplex: (";
    for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? ", " : "") << c_[i];
    os << ")";
    throw Error(ErrorCode::InvalidPoint, os.str());
  }
}

SimplexPoint SimplexPoint::vertex(std::size_t k, std::size_t index) {
  if (index >= k) throw Error(ErrorCode::OutOfRange, "vertex index out of range");
  Vec c(k, 0.0);
  c[index] = 1.0;
  return SimplexPoint(std::move(c), Unchecked{});
}

SimplexPoint SimplexPoint::uniform(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "empty outcome set");
  return SimplexPoint(Vec(k, 1.0 / static_cast<double>(k)), Unchecked{});
}

SimplexPoint SimplexPoint::from_counts(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw Error(ErrorCode::ZeroMass, "counts sum to zero");
  Vec c(counts.size());
  const double denom = static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i)
    c[i] = static_cast<double>(counts[i]) / denom;
  return SimplexPoint(std::move(c), Unchecked{});
}

bool SimplexPoint::on_boundary(double tol) const {
  return std::any_of(c_.begin(), c_.end(), [tol](double c) { return c <= tol; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double point_segment_distance(std::span<const double> p,
                              std::span<const double> a,
                              std::span<const double> b) {
  if (p.size() != a.size() || a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "segment distance: dimension mismatch");
  double ab2 = 0.0, apab = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double ab = b[i] - a[i];
    ab2 += ab * ab;
    apab += (p[i] - a[i]) * ab;
  }
  double t = ab2 > 0.0 ? std::clamp(apab / ab2, 0.0, 1.0) : 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - (a[i] + t * (b[i] - a[i]));
    s += d * d;
  }
  return std::sqrt(s);
}

BoundaryIntercept boundary_intercept(const SimplexPoint& p_old,
                                     const SimplexPoint& p_new) {
  const std::size_t k = p_old.dim();
  if (p_new.dim() != k)
    throw Error(ErrorCode::DimensionMismatch, "boundary_intercept: dimension mismatch");
  if (distance(p_old.coords(), p_new.coords()) <= 1e-14)
    throw Error(ErrorCode::DegeneratePair, "boundary_intercept: p_old == p_new");

  if (p_new.on_boundary()) return {true, 1.0, p_new};

  double gamma = std::numeric_limits<double>::infinity();
  std::size_t binding = k;
  for (std::size_t i = 0; i < k; ++i) {
    const double drop = p_old[i] - p_new[i];
    if (drop > 0.0 && p_old[i] > 0.0) {
      const double g = p_old[i] / drop;
      if (g < gamma) {
        gamma = g;
        binding = i;
      }
    }
  }
  // Some coordinate must decrease since both points sum to one.
  if (binding == k)
    throw Error(ErrorCode::DegeneratePair, "boundary_intercept: no decreasing coordinate");

  Vec star(k);
  for (std::size_t i = 0; i < k; ++i) {
    star[i] = gamma * (p_new[i] - p_old[i]) + p_old[i];
    if (star[i] < 0.0) star[i] = 0.0;
  }
  star[binding] = 0.0;
  return {false, gamma, SimplexPoint(std::move(star))};
}

std::int64_t round_half_up(double y) {
  return static_cast<std::int64_t>(std::floor(y + 0.5));
}

QuantizedDirection quantize_direction(const SimplexPoint& p_star, std::int64_t T) {
  if (T < 1) throw Error(ErrorCode::InvalidArgument, "quantize_direction: T must be >= 1");
  QuantizedDirection q;
  q.T = T;
  const std::size_t k = p_star.dim();
  q.iota.resize(k);
  q.p_tilde.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    q.iota[i] = round_half_up(static_cast<double>(T) * p_star[i]);
    q.T_tilde += q.iota[i];
    q.p_tilde[i] = static_cast<double>(q.iota[i]) / static_cast<double>(T);
  }
  if (q.T_tilde <= 0)
    throw Error(ErrorCode::ZeroMass, "quantize_direction: all quantized masses are zero");
  std::vector<std::uint64_t> counts(q.iota.begin(), q.iota.end());
  q.p_hat = SimplexPoint::from_counts(counts);
  return q;
}

CurveSpec CurveSpec::lemniscate3(double center, double scale) {
  CurveSpec c;
  c.kind = Kind::Lemniscate3;
  c.center = center;
  c.scale = scale;
  return c;
}

CurveSpec CurveSpec::from_polygon(PointSet vertices) {
  if (vertices.empty())
    throw Error(ErrorCode::InvalidArgument, "polygon needs at least one vertex");
  const std::size_t k = vertices.front().dim();
  for (const auto& v : vertices)
    if (v.dim() != k)
      throw Error(ErrorCode::DimensionMismatch, "polygon vertices differ in dimension");
  // Drop an explicit closing copy of the first vertex.
  if (vertices.size() > 1 && vertices.back() == vertices.front()) vertices.pop_back();
  CurveSpec c;
  c.kind = Kind::Polygon;
  c.polygon = std::move(vertices);
  return c;
}

std::size_t CurveSpec::dim() const {
  return kind == Kind::Lemniscate3 ? 3 : polygon.front().dim();
}

namespace {

SimplexPoint lerp(const SimplexPoint& a, const SimplexPoint& b, double t) {
  Vec c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (1.0 - t) * a[i] + t * b[i];
  return SimplexPoint(std::move(c));
}

// Arclength position u * L along the closed polygon.
SimplexPoint polygon_at(const PointSet& poly, const std::vector<double>& cum, double s) {
  const std::size_t m = poly.size();
  for (std::size_t e = 0; e < m; ++e) {
    const double len = cum[e + 1] - cum[e];
    if (s <= cum[e + 1] || e + 1 == m) {
      const double t = len > 0.0 ? std::clamp((s - cum[e]) / len, 0.0, 1.0) : 0.0;
      return lerp(poly[e], poly[(e + 1) % m], t);
    }
  }
  return poly.front();
}

}  // namespace

SimplexPoint CurveSpec::evaluate(double u) const {
  if (!(u >= 0.0 && u <= 1.0))
    throw Error(ErrorCode::OutOfRange, "curve parameter outside [0, 1]");
  if (u == 1.0) u = 0.0;
  if (kind == Kind::Lemniscate3) {
    const double t = 2.0 * std::numbers::pi * u;
    const double s = std::sin(t), c = std::cos(t);
    const double d = 1.0 + s * s;
    const double z1 = center + scale * 2.0 * c / d;
    const double z2 = center + scale * 2.0 * s * c / d;
    return SimplexPoint(Vec{z1, z2, 1.0 - z1 - z2});
  }
  const std::size_t m = polygon.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t e = 0; e < m; ++e)
    cum[e + 1] = cum[e] + distance(polygon[e].coords(), polygon[(e + 1) % m].coords());
  return polygon_at(polygon, cum, u * cum[m]);
}

PointSet polygonal_approximation(const CurveSpec& curve, std::int64_t V) {
  if (V < 2) throw Error(ErrorCode::InvalidArgument, "polygonal approximation needs V >= 2");
  PointSet pts;
  pts.reserve(static_cast<std::size_t>(V) + 1);
  if (curve.kind == CurveSpec::Kind::Lemniscate3) {
    for (std::int64_t v = 0; v < V; ++v)
      pts.push_back(curve.evaluate(static_cast<double>(v) / static_cast<double>(V)));
  } else {
    const PointSet& poly = curve.polygon;
    const std::size_t m = poly.size();
    if (static_cast<std::size_t>(V) == m) {
      pts = poly;
    } else {
      std::vector<double> cum(m + 1, 0.0);
      for (std::size_t e = 0; e < m; ++e)
        cum[e + 1] = cum[e] + distance(poly[e].coords(), poly[(e + 1) % m].coords());
      const double total = cum[m];
      for (std::int64_t v = 0; v < V; ++v)
        pts.push_back(total > 0.0 ? polygon_at(poly, cum, total * static_cast<double>(v) /
                                                              static_cast<double>(V))
                                  : poly.front());
    }
  }
  pts.push_back(pts.front());
  return pts;
}

double hausdorff_distance(std::span<const SimplexPoint> a, std::span<const SimplexPoint> b) {
  if (a.empty() || b.empty())
    throw Error(ErrorCode::InvalidArgument, "hausdorff_distance of an empty set");
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) best = std::min(best, distance(p.coords(), q.coords()));
    worst = std::max(worst, best);
  }
  return worst;
}

double distance_to_polyline(std::span<const double> p, std::span<const SimplexPoint> polyline) {
  if (polyline.empty())
    throw Error(ErrorCode::InvalidArgument, "distance to an empty polyline");
  if (polyline.size() == 1) return distance(p, polyline[0].coords());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
    best = std::min(best, point_segment_distance(p, polyline[i].coords(),
                                                 polyline[i + 1].coords()));
  return best;
}

double hausdorff_to_polyline(std::span<const SimplexPoint> a,
                             std::span<const SimplexPoint> polyline) {
  if (a.empty()) throw Error(ErrorCode::InvalidArgument, "hausdorff of an empty set");
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, distance_to_polyline(p.coords(), polyline));
  return worst;
}

double curve_length(std::span<const SimplexPoint> polyline) {
  if (polyline.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "curve_length needs at least two points");
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
    len += distance(polyline[i].coords(), polyline[i + 1].coords());
  return len;
}

Point2 ternary_projection(std::span<const double> p) {
  if (p.size() != 3) throw Error(ErrorCode::DimensionMismatch, "ternary projection needs k = 3");
  return {p[1] + 0.5 * p[2], std::numbers::sqrt3 / 2.0 * p[2]};
}

namespace {
double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}
}  // namespace

std::vector<Point2> convex_hull_2d(std::vector<Point2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point2> hull(2 * pts.size());
  std::size_t m = 0;
  for (const auto& p : pts) {
    while (m >= 2 && cross(hull[m - 2], hull[m - 1], p) <= 0) --m;
    hull[m++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = m + 1; i-- > 0;) {
    while (m >= lower && cross(hull[m - 2], hull[m - 1], pts[i]) <= 0) --m;
    hull[m++] = pts[i];
  }
  hull.resize(m - 1);
  return hull;
}

double polygon_area(std::span<const Point2> polygon) {
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto& p = polygon[i];
    const auto& q = polygon[(i + 1) % polygon.size()];
    a += p[0] * q[1] - q[0] * p[1];
  }
  return std::abs(a) / 2.0;
}

}  // namespace freqlab
