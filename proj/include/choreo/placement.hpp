#pragma once

#include <optional>
#include <string>
#include <vector>

#include "choreo/asset_model.hpp"
#include "choreo/error.hpp"
#include "choreo/geometry.hpp"

namespace choreo {

// 2.5D proxemics input: plan-view geometry plus heights.
struct Scene {
  geometry::Pose2 robot;
  double projector_height_m = 1.2;
  std::vector<geometry::Vec2> learners;
  double eye_height_m = 1.6;
  std::string target_device_id;
  geometry::Vec3 referent;  // point on the target device that visuals explain
  std::vector<geometry::Polygon> obstacles;
  std::vector<Surface> surfaces;

  friend bool operator==(const Scene&, const Scene&) = default;
};

struct PlacementConfig {
  double grid_step_m = 0.1;
  double weight_referent = 0.5;
  double weight_incidence = 0.3;
  double weight_visibility = 0.2;
  double max_incidence_rad = geometry::kPi / 3.0;  // 60 degrees
  double pan_limit_rad = geometry::kPi;            // |pan| <= limit
  double tilt_min_rad = -geometry::kPi / 2.0;
  double tilt_max_rad = geometry::kPi / 2.0;

  friend bool operator==(const PlacementConfig&, const PlacementConfig&) = default;
};

struct ScoreBreakdown {
  double referent_proximity = 0.0;  // exp(-distance to referent)
  double incidence = 0.0;           // cos(incidence)
  double learner_visibility = 0.0;  // mean cos(viewing angle)
  double total = 0.0;

  friend bool operator==(const ScoreBreakdown&, const ScoreBreakdown&) = default;
};

struct PlacementResult {
  std::string surface_id;
  double along_m = 0.0;   // distance from the surface base start
  double height_m = 0.0;
  geometry::Vec3 point;   // same target in the map frame
  double pan_rad = 0.0;
  double tilt_rad = 0.0;
  double incidence_rad = 0.0;
  ScoreBreakdown score;

  friend bool operator==(const PlacementResult&, const PlacementResult&) = default;
};

struct RejectionCounts {
  std::size_t candidates = 0;
  std::size_t projector_occluded = 0;
  std::size_t learner_occluded = 0;
  std::size_t incidence = 0;
  std::size_t gimbal = 0;
};

class PlacementInfeasible : public Error {
 public:
  explicit PlacementInfeasible(RejectionCounts counts);
  const RejectionCounts& counts() const { return counts_; }

 private:
  RejectionCounts counts_;
};

// Throws Error(invalid_input) for an invalid scene.
void validate_scene(const Scene& scene);

struct GimbalAngles {
  double pan_rad = 0.0;
  double tilt_rad = 0.0;
};

// pan: signed angle from the robot heading to the target bearing, in
// [-pi, pi]; tilt: elevation from horizontal. Straight up or down gives
// pan 0. Throws Error(precondition) when the target is the projector.
GimbalAngles gimbal_angles(geometry::Vec2 projector, double projector_height, double heading,
                           geometry::Vec3 target);

bool occluded(geometry::Vec2 p, geometry::Vec2 q, const std::vector<geometry::Polygon>& obstacles);

// Map-frame point on a surface at (along, height).
geometry::Vec3 surface_point(const Surface& surface, double along_m, double height_m);

// Angle between the projector ray and the surface normal at `point`.
double incidence_angle(const Scene& scene, const Surface& surface, geometry::Vec3 point);

// Which filter a candidate fails first, if any.
enum class CandidateVerdict { feasible, projector_occluded, learner_occluded, incidence, gimbal };

CandidateVerdict check_candidate(const Scene& scene, const Surface& surface, geometry::Vec3 point,
                                 const PlacementConfig& config);

ScoreBreakdown score_candidate(const Scene& scene, const Surface& surface, geometry::Vec3 point,
                               const PlacementConfig& config);

// Grid search over every surface at grid_step_m, with both surface edges
// and one point per occlusion gap added to the grid, then a pass at a tenth
// of the step inside cells whose corners disagree on feasibility and around
// each surface's best point. Maximizes the weighted score among feasible
// candidates; ties go to the lower surface id, then the lower
// along-surface coordinate, then the lower height. Rejection counts cover
// the coarse pass only.
PlacementResult solve_placement(const Scene& scene, const PlacementConfig& config = {});

}  // namespace choreo
