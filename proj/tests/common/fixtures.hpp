#pragma once

#include "maslov/pulse.hpp"
#include "maslov/singular_orbit.hpp"

namespace fixtures {

inline maslov::ModelParams stable_params() { return {}; }

inline maslov::ModelParams unstable_params() {
  maslov::ModelParams p;
  p.alpha = -5.0;
  p.beta = 5.0;
  p.gamma = 0.5;
  return p;
}

// Solved once per test binary.
inline const maslov::PulseProfile& stable_pulse() {
  static const maslov::PulseProfile prof = [] {
    const auto p = stable_params();
    return maslov::solve_pulse(p, maslov::solve_jump_condition(p).at(0));
  }();
  return prof;
}

inline const maslov::PulseProfile& unstable_pulse() {
  static const maslov::PulseProfile prof = [] {
    const auto p = unstable_params();
    return maslov::solve_pulse(p, maslov::solve_jump_condition(p).at(0));
  }();
  return prof;
}

}  // namespace fixtures
