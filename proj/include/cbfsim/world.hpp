#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cbfsim {

using Vec2 = Eigen::Vector2d;

// Holonomic agent: planar double integrator, body modeled as a disk of radius r0.
struct AgentState {
  Vec2 pos = Vec2::Zero();
  Vec2 vel = Vec2::Zero();
};

struct WorldState {
  std::vector<AgentState> agents;
  double time = 0.0;
  int step_index = 0;

  int count() const { return static_cast<int>(agents.size()); }
};

struct ScenarioConfig {
  int n_agents = 5;
  double r0 = 2.0;            // agent body radius
  double outer_radius = 11.0; // static enclosing circle (soft constraint)
  double radius_margin = 0.0; // added to (2 r0)^2 in constraint construction
  double dt = 0.05;
  double horizon = 100.0;
  double l0 = 6.0; // barrier gains: enforce hddot + l1 hdot + l0 h >= 0
  double l1 = 5.0;
  double lqr_q = 0.2;
  double convergence_pos_tol = 0.1;
  double convergence_vel_tol = 0.1;
  double pcca_filter_tau = 0.2;
  std::vector<Vec2> starts;
  std::vector<Vec2> goals;

  // Squared pair-constraint radius; the margin is expressed in h units so a
  // recorded violation can be offset directly.
  double constraint_radius_sq() const { return 4.0 * r0 * r0 + radius_margin; }
  // Squared physical barrier radius (touching bodies).
  double physical_radius_sq() const { return 4.0 * r0 * r0; }
  // Largest center distance from the origin keeping the body inside the circle.
  double wall_radius() const { return outer_radius - r0; }
  // Smaller root of s^2 + l1 s + l0 = 0 (negated); both roots real by validate().
  double lambda1() const;

  void validate() const; // throws std::invalid_argument naming the field
};

struct RelativeState {
  Vec2 xi; // center-to-center displacement pos_i - pos_j
  Vec2 v;  // relative velocity vel_i - vel_j
};

// Exact zero-order-hold propagation of every agent under constant control.
WorldState step(const WorldState& state, const std::vector<Vec2>& controls, double dt);

RelativeState relative_state(const WorldState& state, int i, int j);

// World at t = 0 with all agents at rest at the given positions.
WorldState make_world(const std::vector<Vec2>& starts);

} // namespace cbfsim
