#include "maslov_cli/sampling.hpp"

#include <cmath>
#include <random>

#include "maslov/maslov.hpp"

namespace maslov::cli {

std::vector<SampledCase> sample_parameter_sets(int count, std::uint32_t seed, const ModelParams& base) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ab(-6.0, 6.0), g(0.2, 3.0), d(1.5, 8.0);
  std::vector<SampledCase> out;
  while (static_cast<int>(out.size()) < count) {
    ModelParams p = base;
    p.alpha = ab(rng);
    p.beta = ab(rng);
    p.gamma = g(rng);
    p.dd = d(rng);
    for (const JumpSolution& r : solve_jump_condition(p)) {
      const double m = stability_criterion(p, r).margin;
      if (r.x_star < 0.05 || r.x_star > 8.0 || std::abs(m) <= 0.05) continue;
      out.push_back({p, r, m});
      break;
    }
  }
  return out;
}

}  // namespace maslov::cli
