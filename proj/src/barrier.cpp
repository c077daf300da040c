#include "cbfsim/barrier.hpp"

#include <stdexcept>

namespace cbfsim {

PairConstraint pair_constraint(const Vec2& xi, const Vec2& v, double r_sq, double l0, double l1,
                               int i, int j) {
  PairConstraint c;
  c.a = 2.0 * v.squaredNorm() + 2.0 * l1 * xi.dot(v) + l0 * (xi.squaredNorm() - r_sq);
  c.b = 2.0 * xi.transpose();
  c.i = i;
  c.j = j;
  return c;
}

WallConstraint wall_constraint(const Vec2& pos, const Vec2& vel, double wall_radius, double l0,
                               double l1, int i) {
  if (!(wall_radius > 0.0)) throw std::invalid_argument("wall_constraint: wall_radius must be > 0");
  WallConstraint c;
  const double h_w = wall_radius * wall_radius - pos.squaredNorm();
  c.a = -2.0 * vel.squaredNorm() - 2.0 * l1 * pos.dot(vel) + l0 * h_w;
  c.b = -2.0 * pos.transpose();
  c.i = i;
  return c;
}

BarrierDiagnostics diagnostics(const Vec2& xi, const Vec2& v, double r_sq, double r0,
                               double lambda1) {
  if (!(lambda1 > 0.0)) throw std::invalid_argument("diagnostics: lambda1 must be > 0");
  BarrierDiagnostics d;
  d.h = xi.squaredNorm() - r_sq;
  d.h0 = xi.squaredNorm() - 4.0 * r0 * r0;
  d.hdot = 2.0 * xi.dot(v);
  d.in_cstar = d.h >= 0.0 && d.h >= -d.hdot / lambda1;
  return d;
}

} // namespace cbfsim
