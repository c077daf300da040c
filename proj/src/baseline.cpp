#include "cbfsim/baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace cbfsim {

LqrGain lqr_gain(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("lqr_gain: q must be > 0");
  const double sq = std::sqrt(q);
  return {sq, std::sqrt(q + 2.0 * sq)};
}

Vec2 baseline_control(const AgentState& state, const Vec2& goal, const LqrGain& gain) {
  return -gain.k_pos * (state.pos - goal) - gain.k_vel * state.vel;
}

} // namespace cbfsim
