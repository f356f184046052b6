#include "choreo/geometry.hpp"

#include <algorithm>

namespace choreo::geometry {

namespace {

constexpr double kParamEps = 1e-9;

// Parameter range [lo, hi] along p->q where the closed segment pq meets the
// closed segment cd; returns false when they are disjoint.
bool intersection_range(Vec2 p, Vec2 q, Vec2 c, Vec2 d, double& lo, double& hi) {
  const Vec2 r = q - p;
  const Vec2 s = d - c;
  const double denom = cross(r, s);
  const double rr = dot(r, r);
  const double scale = std::max({rr, dot(s, s), 1e-300});
  if (std::abs(denom) <= 1e-12 * scale) {
    if (std::abs(cross(c - p, r)) > 1e-12 * scale) return false;  // parallel, apart
    if (rr == 0.0) return false;
    double t0 = dot(c - p, r) / rr;
    double t1 = dot(d - p, r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(t0, 0.0);
    hi = std::min(t1, 1.0);
    return lo <= hi;
  }
  const double t = cross(c - p, s) / denom;
  const double u = cross(c - p, r) / denom;
  if (t < -kParamEps || t > 1.0 + kParamEps || u < -kParamEps || u > 1.0 + kParamEps) {
    return false;
  }
  lo = hi = std::clamp(t, 0.0, 1.0);
  return true;
}

}  // namespace

double wrap_angle(double radians) {
  double a = std::remainder(radians, 2.0 * kPi);
  if (a < -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

Vec2 rotate(Vec2 v, double radians) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

bool on_segment(Vec2 p, Vec2 a, Vec2 b, double eps) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return norm(p - a) <= eps;
  if (std::abs(cross(ab, p - a)) > eps * std::max(1.0, std::sqrt(len2))) return false;
  const double t = dot(p - a, ab) / len2;
  return t >= -eps && t <= 1.0 + eps;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  double lo = 0.0;
  double hi = 0.0;
  return intersection_range(a, b, c, d, lo, hi);
}

bool strictly_inside(Vec2 p, std::span<const Vec2> polygon) {
  if (on_boundary(p, polygon)) return false;
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool on_boundary(Vec2 p, std::span<const Vec2> polygon, double eps) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(p, polygon[i], polygon[(i + 1) % n], eps)) return true;
  }
  return false;
}

bool is_simple(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = polygon[i];
    const Vec2 b = polygon[(i + 1) % n];
    if (a == b) return false;
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec2 c = polygon[j];
      const Vec2 d = polygon[(j + 1) % n];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      double lo = 0.0;
      double hi = 0.0;
      if (!intersection_range(a, b, c, d, lo, hi)) continue;
      if (!adjacent) return false;
      // Adjacent edges may only share their common vertex.
      if (hi - lo > kParamEps) return false;
      const Vec2 shared = (j == i + 1) ? b : a;
      const Vec2 hit = a + (b - a) * lo;
      if (norm(hit - shared) > 1e-9 * std::max(1.0, norm(b - a))) return false;
    }
  }
  return true;
}

bool is_convex(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double o = orient(polygon[i], polygon[(i + 1) % n], polygon[(i + 2) % n]);
    if (o == 0.0) continue;
    const int s = o > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return sign != 0 && is_simple(polygon);
}

bool occluded(Vec2 p, Vec2 q, std::span<const Polygon> obstacles) {
  for (const Polygon& poly : obstacles) {
    const std::size_t n = poly.size();
    if (n == 0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      double lo = 0.0;
      double hi = 0.0;
      if (!intersection_range(p, q, poly[i], poly[(i + 1) % n], lo, hi)) continue;
      // Touching only at p or q does not count: the segment is open.
      if (hi > kParamEps && lo < 1.0 - kParamEps) return true;
    }
    if (n >= 3 && strictly_inside((p + q) * 0.5, poly)) return true;
  }
  return false;
}

}  // namespace choreo::geometry
