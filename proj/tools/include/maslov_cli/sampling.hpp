#pragma once

#include <cstdint>
#include <vector>

#include "maslov/params.hpp"
#include "maslov/singular_orbit.hpp"

namespace maslov::cli {

struct SampledCase {
  ModelParams params;
  JumpSolution jump;
  double margin = 0.0;
};

/// Draws alpha, beta in [-6, 6], gamma in [0.2, 3], D in [1.5, 8] with
/// mt19937(seed) and keeps a draw when some root has 0.05 <= x* <= 8 and
/// |margin| > 0.05 (the first such root is used). eps, tau, theta come from `base`.
std::vector<SampledCase> sample_parameter_sets(int count, std::uint32_t seed = 42, const ModelParams& base = {});

}  // namespace maslov::cli
