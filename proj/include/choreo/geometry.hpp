#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace choreo::geometry {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Position in the map frame (meters) plus heading (radians, CCW from +x).
struct Pose2 {
  Vec2 position;
  double heading = 0.0;

  friend bool operator==(const Pose2&, const Pose2&) = default;
};

using Polygon = std::vector<Vec2>;

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

inline bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

// Wraps an angle into [-pi, pi].
double wrap_angle(double radians);

Vec2 rotate(Vec2 v, double radians);

// Orientation of the triple (a, b, c): >0 counter-clockwise, <0 clockwise.
double orient(Vec2 a, Vec2 b, Vec2 c);

bool on_segment(Vec2 p, Vec2 a, Vec2 b, double eps = 1e-12);

// Closed segments [a,b] and [c,d] share at least one point.
bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d);

// Point strictly inside the polygon (boundary excluded). Works for any
// simple polygon regardless of winding.
bool strictly_inside(Vec2 p, std::span<const Vec2> polygon);

bool on_boundary(Vec2 p, std::span<const Vec2> polygon, double eps = 1e-12);

// No two non-adjacent edges touch and adjacent edges meet only at their
// shared vertex.
bool is_simple(std::span<const Vec2> polygon);

bool is_convex(std::span<const Vec2> polygon);

// True iff the open segment (p, q) meets the interior or the boundary of
// any obstacle polygon.
bool occluded(Vec2 p, Vec2 q, std::span<const Polygon> obstacles);

}  // namespace choreo::geometry
