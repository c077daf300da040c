#pragma once

#include "cbfsim/world.hpp"

namespace cbfsim {

// Pairwise barrier h = xi'xi - r^2 has relative degree two; the constraint row
// encodes hddot + l1 hdot + l0 h = a + b (u_i - u_j) >= 0.
struct PairConstraint {
  double a = 0.0;
  Eigen::RowVector2d b = Eigen::RowVector2d::Zero(); // multiplies u_i - u_j
  int i = 0;
  int j = 0;
};

// Agent-to-wall row a + b u_i >= 0, always slack-penalized.
struct WallConstraint {
  double a = 0.0;
  Eigen::RowVector2d b = Eigen::RowVector2d::Zero(); // multiplies u_i
  int i = 0;
  bool soft = true;
};

struct BarrierDiagnostics {
  double h = 0.0;    // constraint barrier, radius^2 = r_sq
  double h0 = 0.0;   // physical barrier, radius^2 = (2 r0)^2
  double hdot = 0.0;
  bool in_cstar = false; // h >= 0 and h >= -hdot / lambda1
};

PairConstraint pair_constraint(const Vec2& xi, const Vec2& v, double r_sq, double l0, double l1,
                               int i, int j);

// Keeps the body inside the outer circle: h_w = wall_radius^2 - pos'pos.
WallConstraint wall_constraint(const Vec2& pos, const Vec2& vel, double wall_radius, double l0,
                               double l1, int i);

BarrierDiagnostics diagnostics(const Vec2& xi, const Vec2& v, double r_sq, double r0,
                               double lambda1);

} // namespace cbfsim
