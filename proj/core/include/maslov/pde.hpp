#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "maslov/params.hpp"
#include "maslov/pulse.hpp"

namespace maslov {

struct Eigenfunction;

/// Fields (U, V, W) on a grid in the slow variable x.
struct SimState {
  ModelParams params;
  std::vector<double> x;
  Eigen::VectorXd u, v, w;
  double t = 0.0;

  std::size_t size() const { return x.size(); }
  double sup_u() const { return u.cwiseAbs().maxCoeff(); }
};

/// The profile sampled on `grid` (held at the rest state beyond its range).
SimState state_from_profile(const PulseProfile& profile, const std::vector<double>& grid);

/// Spatially constant state at the rest point.
SimState rest_state(const ModelParams& params, const std::vector<double>& grid);

/// Adds independent uniform noise in [-amplitude, amplitude] to every field value.
void add_noise(SimState& state, double amplitude, std::uint32_t seed = 42);

/// Adds amplitude * mode, interpolating the mode linearly onto the state grid.
void add_mode(SimState& state, const Eigenfunction& mode, double amplitude);

/// Largest step the explicit reaction tolerates: 0.2 / max|1 - 3U^2|.
double max_stable_dt(const SimState& state);

struct EvolveOptions {
  double snapshot_interval = 1.0;  // 0 keeps only the final state
  double blowup_limit = 10.0;
};

/// IMEX Euler steps: implicit three-point diffusion with Neumann ends,
/// explicit reaction. Returns snapshots at t0, t0 + interval, ... and t_final.
/// Errors: CflViolation (dt above max_stable_dt at any step), Blowup
/// (sup|U| above the limit or non-finite values), DomainError.
std::vector<SimState> evolve(const SimState& initial, double t_final, double dt,
                             const EvolveOptions& options = {});

struct DeviationResult {
  double value = 0.0;
  double shift = 0.0;  // k minimizing sup|state(x) - profile(x - k)|
};

/// min over k of the sup norm of (U, V, W) - profile(x - k). The search is
/// bracketed around the shift that aligns the U = 0 crossings and refined by
/// golden section; without crossings the whole grid span is searched.
DeviationResult deviation(const SimState& state, const PulseProfile& profile);

/// Same with a reference state (a steady state of the discrete system), resampled
/// at the shifted points by cubic Hermite interpolation.
DeviationResult deviation(const SimState& state, const SimState& reference);

/// Steady state of the discretized system on `grid`, by Newton iteration from the
/// sampled profile. The discrete pulse differs from the profile by the
/// truncation error amplified through the slowest decaying mode, so long
/// stability runs measure distance to this state. Errors: NewtonDiverged.
SimState discrete_equilibrium(const PulseProfile& profile, const std::vector<double>& grid);

struct DeviationSeries {
  std::vector<double> t;
  std::vector<double> value;
  std::vector<double> shift;
};

DeviationSeries deviation_series(const std::vector<SimState>& snapshots, const PulseProfile& profile);
DeviationSeries deviation_series(const std::vector<SimState>& snapshots, const SimState& reference);

/// Least-squares slope of log(deviation) over snapshots with t in [t0, t1].
double growth_rate(const DeviationSeries& series, double t0, double t1);

/// Grid for time evolution: the spectrum grid with all nodes kept.
std::vector<double> pde_grid(const PulseProfile& profile, int nodes, double half_width = 0.0);

}  // namespace maslov
