#pragma once

#include <vector>

#include "maslov/params.hpp"
#include "maslov/singular_orbit.hpp"

namespace maslov {

struct PulseOptions {
  /// Fast-time half width. 0 selects the default: the larger of 2x*/eps + 40 and
  /// the distance at which the slowest tail e^{-x/D} has decayed below 1e-7.
  double half_width = 0.0;
  /// Total node count on [-L, L] (odd). 0 selects a count giving ~0.01 spacing
  /// across the fronts.
  int nodes = 0;
  double newton_tolerance = 1e-11;
  int max_newton_iterations = 60;
  /// Retry through a geometric continuation in eps starting here when the direct
  /// solve from the singular skeleton fails. <= target eps disables it.
  double continuation_start = 0.05;
  int remesh_passes = 2;
};

struct PulseStats {
  int newton_iterations = 0;
  int continuation_steps = 0;
  int front_search_steps = 0;  // pinned-front solves when the direct solve failed
  int remeshes = 0;
  double residual = 0.0;       // max collocation residual (derivative units)
  double max_defect = 0.0;     // max |p' - f(p)| at interval quarter points
  double endpoint_error = 0.0; // max-norm distance of value(+-L) to X_eps^-
  double front_spacing = 0.0;
};

/// Standing pulse on [-L, L], reversible about xi = 0. The stored data define a
/// C^1 piecewise cubic (Hermite interpolation of the nodal values with nodal
/// derivatives f(y_i)), which is the collocation polynomial of the solver.
class PulseProfile {
 public:
  PulseProfile(ModelParams params, JumpSolution jump, std::vector<double> grid,
               std::vector<Vec6> values, PulseStats stats);

  const ModelParams& params() const { return params_; }
  const JumpSolution& jump() const { return jump_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<Vec6>& values() const { return values_; }
  const std::vector<Vec6>& derivatives() const { return derivs_; }
  const PulseStats& stats() const { return stats_; }
  PulseStats& stats() { return stats_; }
  double half_width() const { return grid_.back(); }
  std::size_t midpoint_index() const { return mid_; }
  const PhasePoint& rest_state() const { return rest_; }

  /// Throws Error(domain_error) outside [-L, L].
  PhasePoint value(double xi) const;
  Vec6 derivative(double xi) const;
  double u_at(double xi) const;
  /// Like value() but returns the rest state outside [-L, L].
  PhasePoint value_extended(double xi) const;

  /// U = 0 crossing on the front (xi < 0, P > 0) and on the back, bisected on the
  /// interpolant to |U| < 1e-10.
  double front_crossing() const;
  double back_crossing() const;
  /// Number of sign changes of U over the nodes.
  int u_zero_count() const;

 private:
  double locate_u_zero(double a, double b) const;

  ModelParams params_;
  JumpSolution jump_;
  std::vector<double> grid_;
  std::vector<Vec6> values_;
  std::vector<Vec6> derivs_;
  PulseStats stats_;
  std::size_t mid_ = 0;
  PhasePoint rest_;
};

enum class ProfileOrder { value, derivative };

/// Value (nonlinear ordering) or xi-derivative of the profile at xi.
Vec6 evaluate_profile(const PulseProfile& profile, double xi, ProfileOrder order);

/// Solves the half problem on [0, L] with P = Q = R = 0 at xi = 0 and projection
/// conditions at xi = L (y(L) - X^- has no component along the unstable
/// eigenvectors of A_inf(0)), by 3-point Lobatto (Hermite-Simpson) collocation
/// and damped Newton seeded from the singular orbit, then mirrors.
/// Errors: NewtonDiverged, MeshTooCoarse, DomainError (L too short).
PulseProfile solve_pulse(const ModelParams& params, const JumpSolution& jump,
                         const PulseOptions& options = {});

double default_half_width(const ModelParams& params, double x_star);

/// Max over nonlinear components of sup_xi |y(xi) - R y(-xi)| on the nodes.
double reversibility_error(const PulseProfile& profile);

/// Hausdorff distance in the (U, P) plane between the profile nodes and the
/// eps = 0 skeleton, the two heteroclinics P = +-(1 - U^2) / sqrt2 joining
/// (-1, 0) and (1, 0) (the slow arcs project onto their endpoints).
double skeleton_distance(const PulseProfile& profile);

}  // namespace maslov
