#pragma once

#include "cbfsim/world.hpp"

namespace cbfsim {

// Per-axis state-feedback gains; the two axes decouple for the double
// integrator, so one scalar pair covers both.
struct LqrGain {
  double k_pos = 0.0;
  double k_vel = 0.0;
};

// Continuous-time LQR for the per-axis double integrator with state cost
// q I_2 and unit control cost. Closed form of the Riccati solution:
// k_pos = sqrt(q), k_vel = sqrt(q + 2 sqrt(q)).
LqrGain lqr_gain(double q);

// u = -k_pos (pos - goal) - k_vel vel, per axis.
Vec2 baseline_control(const AgentState& state, const Vec2& goal, const LqrGain& gain);

} // namespace cbfsim
