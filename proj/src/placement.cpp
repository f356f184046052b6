#include "choreo/placement.hpp"

#include <algorithm>
#include <cmath>

namespace choreo {

using geometry::Vec2;
using geometry::Vec3;

namespace {

constexpr double kScoreTieEps = 1e-9;
constexpr double kRefineDivisions = 10.0;

std::string describe(const RejectionCounts& c) {
  return "no feasible placement: " + std::to_string(c.candidates) + " candidates, " +
         std::to_string(c.projector_occluded) + " projector-occluded, " +
         std::to_string(c.learner_occluded) + " learner-occluded, " + std::to_string(c.incidence) +
         " over max incidence, " + std::to_string(c.gimbal) + " outside gimbal limits";
}

Vec3 normal3(const Surface& s) { return {s.normal.x, s.normal.y, 0.0}; }

// Offsets 0, step, 2*step, ... within [0, extent], plus extent itself when
// the last step falls short of it, so both edges are always sampled.
std::vector<double> samples(double extent, double step) {
  const auto n = static_cast<std::size_t>(std::floor(extent / step + 1e-9));
  std::vector<double> out;
  out.reserve(n + 2);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(static_cast<double>(i) * step);
  if (extent - out.back() > 1e-9) out.push_back(extent);
  return out;
}

// Along-surface offsets where some sightline (projector or learner) starts
// or stops touching an obstacle: the surface line meets the ray from a
// viewer through an obstacle vertex, or crosses an obstacle edge.
// Occlusion is constant between consecutive offsets, so the midpoint of
// each gap is a representative sample; this catches feasible gaps far
// narrower than the grid step.
std::vector<double> occlusion_gap_midpoints(const Scene& scene, const Surface& surface, double length) {
  const Vec2 dir = (surface.end - surface.start) * (1.0 / length);
  std::vector<double> cuts = {0.0, length};
  auto keep = [&](double a) {
    if (std::isfinite(a) && a > 0.0 && a < length) cuts.push_back(a);
  };
  std::vector<Vec2> viewers = scene.learners;
  viewers.push_back(scene.robot.position);
  for (const auto& poly : scene.obstacles) {
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Vec2 w = poly[k];
      for (const Vec2 v : viewers) {
        const Vec2 d = w - v;
        const double den = geometry::cross(dir, d);
        if (std::abs(den) < 1e-15) continue;
        const double t = geometry::cross(surface.start - v, dir) / geometry::cross(d, dir);
        if (t > 0.0) keep(geometry::cross(v - surface.start, d) / den);
      }
      const Vec2 e = poly[(k + 1) % poly.size()] - w;
      const double den = geometry::cross(dir, e);
      if (std::abs(den) < 1e-15) continue;
      const double u = geometry::cross(surface.start - w, dir) / geometry::cross(e, dir);
      if (u >= 0.0 && u <= 1.0) keep(geometry::cross(w - surface.start, e) / den);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] > 1e-9) out.push_back(0.5 * (cuts[k] + cuts[k + 1]));
  }
  return out;
}

}  // namespace

PlacementInfeasible::PlacementInfeasible(RejectionCounts counts)
    : Error(ErrorCode::infeasible, describe(counts)), counts_(counts) {}

void validate_scene(const Scene& scene) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_input, "invalid scene: " + msg); };
  if (scene.learners.empty()) fail("at least one learner is required");
  if (scene.surfaces.empty()) fail("at least one candidate surface is required");
  if (!(scene.projector_height_m > 0.0) || !(scene.eye_height_m > 0.0)) fail("heights must be positive");
  if (!geometry::finite(scene.robot.position) || !std::isfinite(scene.robot.heading)) fail("robot pose must be finite");
  if (!std::isfinite(scene.referent.x) || !std::isfinite(scene.referent.y) || !std::isfinite(scene.referent.z)) {
    fail("referent must be finite");
  }
  for (const auto& l : scene.learners) {
    if (!geometry::finite(l)) fail("learner positions must be finite");
  }
  for (const auto& obstacle : scene.obstacles) {
    if (obstacle.size() < 3) fail("obstacle polygons need at least 3 vertices");
  }
  for (const auto& s : scene.surfaces) {
    if (geometry::norm(s.end - s.start) <= 0.0) fail("surface '" + s.id + "' has a zero-length base");
    if (!(s.z_min >= 0.0) || !(s.z_max > s.z_min)) fail("surface '" + s.id + "' has an invalid height range");
    if (std::abs(geometry::norm(s.normal) - 1.0) > 1e-6) fail("surface '" + s.id + "' normal must be unit length");
  }
}

GimbalAngles gimbal_angles(Vec2 projector, double projector_height, double heading, Vec3 target) {
  const double dx = target.x - projector.x;
  const double dy = target.y - projector.y;
  const double dz = target.z - projector_height;
  const double horizontal = std::hypot(dx, dy);
  if (horizontal == 0.0 && dz == 0.0) {
    throw Error(ErrorCode::precondition, "gimbal target coincides with the projector");
  }
  GimbalAngles out;
  out.pan_rad = horizontal == 0.0 ? 0.0 : geometry::wrap_angle(std::atan2(dy, dx) - heading);
  out.tilt_rad = std::atan2(dz, horizontal);
  return out;
}

bool occluded(Vec2 p, Vec2 q, const std::vector<geometry::Polygon>& obstacles) {
  return geometry::occluded(p, q, obstacles);
}

Vec3 surface_point(const Surface& surface, double along_m, double height_m) {
  const Vec2 dir = (surface.end - surface.start) * (1.0 / geometry::norm(surface.end - surface.start));
  const Vec2 p = surface.start + dir * along_m;
  return {p.x, p.y, height_m};
}

double incidence_angle(const Scene& scene, const Surface& surface, Vec3 point) {
  const Vec3 projector{scene.robot.position.x, scene.robot.position.y, scene.projector_height_m};
  const Vec3 back = projector - point;
  const double c = geometry::dot(back, normal3(surface)) / geometry::norm(back);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

CandidateVerdict check_candidate(const Scene& scene, const Surface& surface, Vec3 point,
                                 const PlacementConfig& config) {
  const Vec2 plan{point.x, point.y};
  if (geometry::occluded(scene.robot.position, plan, scene.obstacles)) {
    return CandidateVerdict::projector_occluded;
  }
  for (const auto& learner : scene.learners) {
    // A learner behind the surface sees its back side.
    if (geometry::dot(learner - surface.start, surface.normal) <= 0.0 ||
        geometry::occluded(learner, plan, scene.obstacles)) {
      return CandidateVerdict::learner_occluded;
    }
  }
  if (incidence_angle(scene, surface, point) > config.max_incidence_rad) return CandidateVerdict::incidence;
  const auto angles = gimbal_angles(scene.robot.position, scene.projector_height_m, scene.robot.heading, point);
  if (std::abs(angles.pan_rad) > config.pan_limit_rad || angles.tilt_rad < config.tilt_min_rad ||
      angles.tilt_rad > config.tilt_max_rad) {
    return CandidateVerdict::gimbal;
  }
  return CandidateVerdict::feasible;
}

ScoreBreakdown score_candidate(const Scene& scene, const Surface& surface, Vec3 point,
                               const PlacementConfig& config) {
  ScoreBreakdown s;
  s.referent_proximity = std::exp(-geometry::norm(point - scene.referent));
  s.incidence = std::cos(incidence_angle(scene, surface, point));
  const Vec3 n = normal3(surface);
  double sum = 0.0;
  for (const auto& l : scene.learners) {
    const Vec3 eye{l.x, l.y, scene.eye_height_m};
    const Vec3 v = eye - point;
    sum += geometry::dot(v, n) / geometry::norm(v);
  }
  s.learner_visibility = sum / static_cast<double>(scene.learners.size());
  s.total = config.weight_referent * s.referent_proximity + config.weight_incidence * s.incidence +
            config.weight_visibility * s.learner_visibility;
  return s;
}

PlacementResult solve_placement(const Scene& scene, const PlacementConfig& config) {
  validate_scene(scene);
  if (!(config.grid_step_m > 0.0)) throw Error(ErrorCode::precondition, "grid step must be positive");

  RejectionCounts counts;
  std::optional<PlacementResult> best;
  auto better = [](const PlacementResult& a, const PlacementResult& b) {
    if (a.score.total > b.score.total + kScoreTieEps) return true;
    if (a.score.total < b.score.total - kScoreTieEps) return false;
    if (a.surface_id != b.surface_id) return a.surface_id < b.surface_id;
    if (a.along_m != b.along_m) return a.along_m < b.along_m;
    return a.height_m < b.height_m;
  };

  for (const auto& surface : scene.surfaces) {
    // Returns the verdict; feasible candidates compete for best (and for
    // the per-surface best when `local` is given).
    auto evaluate = [&](double along, double height, std::optional<PlacementResult>* local) {
      const Vec3 point = surface_point(surface, along, height);
      const auto verdict = check_candidate(scene, surface, point, config);
      if (verdict != CandidateVerdict::feasible) return verdict;
      PlacementResult r;
      r.surface_id = surface.id;
      r.along_m = along;
      r.height_m = height;
      r.point = point;
      const auto angles = gimbal_angles(scene.robot.position, scene.projector_height_m, scene.robot.heading, point);
      r.pan_rad = angles.pan_rad;
      r.tilt_rad = angles.tilt_rad;
      r.incidence_rad = incidence_angle(scene, surface, point);
      r.score = score_candidate(scene, surface, point, config);
      if (local != nullptr && (!*local || better(r, **local))) *local = r;
      if (!best || better(r, *best)) best = std::move(r);
      return verdict;
    };

    // Coarse pass: the configured grid plus one sample per occlusion gap.
    const double length = geometry::norm(surface.end - surface.start);
    auto alongs = samples(length, config.grid_step_m);
    for (const double a : occlusion_gap_midpoints(scene, surface, length)) alongs.push_back(a);
    std::sort(alongs.begin(), alongs.end());
    alongs.erase(std::unique(alongs.begin(), alongs.end(), [](double x, double y) { return y - x <= 1e-9; }),
                 alongs.end());
    const auto heights = samples(surface.z_max - surface.z_min, config.grid_step_m);
    std::vector<std::vector<CandidateVerdict>> verdicts(alongs.size());
    std::optional<PlacementResult> surface_best;
    std::size_t best_i = 0, best_j = 0;
    for (std::size_t i = 0; i < alongs.size(); ++i) {
      for (std::size_t j = 0; j < heights.size(); ++j) {
        ++counts.candidates;
        const auto before = surface_best;
        const auto v = evaluate(alongs[i], surface.z_min + heights[j], &surface_best);
        verdicts[i].push_back(v);
        switch (v) {
          case CandidateVerdict::projector_occluded: ++counts.projector_occluded; break;
          case CandidateVerdict::learner_occluded: ++counts.learner_occluded; break;
          case CandidateVerdict::incidence: ++counts.incidence; break;
          case CandidateVerdict::gimbal: ++counts.gimbal; break;
          case CandidateVerdict::feasible:
            if (surface_best != before) best_i = i, best_j = j;
            break;
        }
      }
    }

    // Refinement at a tenth of the step inside every cell whose corners
    // disagree (a feasible sliver or a filter boundary may run through it)
    // and inside the cells around this surface's coarse optimum.
    const std::size_t ci = alongs.size() > 1 ? alongs.size() - 1 : 1;
    const std::size_t cj = heights.size() > 1 ? heights.size() - 1 : 1;
    auto corner = [&](std::size_t i, std::size_t j) {
      return verdicts[std::min(i, alongs.size() - 1)][std::min(j, heights.size() - 1)];
    };
    auto span = [](const std::vector<double>& xs, std::size_t k, double fine) {
      const double lo = xs[std::min(k, xs.size() - 1)];
      const double hi = xs[std::min(k + 1, xs.size() - 1)];
      std::vector<double> out;
      const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / fine - 1e-9));
      for (std::size_t t = 0; t <= n; ++t) out.push_back(t == n ? hi : lo + static_cast<double>(t) * fine);
      return out;
    };
    const double fine = config.grid_step_m / kRefineDivisions;
    for (std::size_t i = 0; i < ci; ++i) {
      for (std::size_t j = 0; j < cj; ++j) {
        const auto c = corner(i, j);
        const bool mixed = corner(i + 1, j) != c || corner(i, j + 1) != c || corner(i + 1, j + 1) != c;
        const bool near_best = surface_best && i + 1 >= best_i && i <= best_i && j + 1 >= best_j && j <= best_j;
        if (!mixed && !near_best) continue;
        const auto hs = span(heights, j, fine);
        for (const double along : span(alongs, i, fine)) {
          for (const double h : hs) evaluate(along, surface.z_min + h, nullptr);
        }
      }
    }
  }
  if (!best) throw PlacementInfeasible(counts);
  return *best;
}

}  // namespace choreo
