#pragma once

#include <vector>

#include "maslov/params.hpp"
#include "maslov/pulse.hpp"

namespace maslov {

enum class BundleDirection { forward, backward };

struct BundleOptions {
  /// Largest GL step in fast time; profile nodes are always step boundaries.
  double max_step = 1.0;
  /// Fast-time length between re-orthonormalizations of the integrated frame.
  double reorth_interval = 1.0;
  /// Raise LagrangianDrift above this residual.
  double drift_limit = 1e-6;
};

/// Frames of E^u(0, xi) (forward, from -L) or E^s(0, xi) (backward, from +L) in
/// the linear ordering, orthonormal at every stored node. Nodes run in the
/// direction of integration.
struct BundleTrajectory {
  BundleDirection direction = BundleDirection::forward;
  std::vector<double> nodes;
  std::vector<Frame> frames;
  double max_lagrangian_residual = 0.0;
  double start_gap = 0.0;  // plane_gap of the first frame to the asymptotic subspace
};

/// One step of the 2-stage Gauss-Legendre scheme for Y' = A(0, xi) Y from xi to
/// xi + h, as a 6x6 propagator. Gauss methods preserve quadratic invariants, so
/// M^T Omega M = Omega up to rounding.
Mat6 gauss_step(const PulseProfile& profile, double xi, double h);

/// Propagates a frame (or any 6 x k block) from `from` to `to` with steps no
/// larger than max_step.
Eigen::Matrix<double, 6, Eigen::Dynamic> propagate(const PulseProfile& profile,
                                                    const Eigen::Matrix<double, 6, Eigen::Dynamic>& y,
                                                    double from, double to, double max_step);

/// Forward: from -L to `stop` starting at the unstable subspace of A_inf(0);
/// backward: from +L down to `stop` starting at the stable subspace.
/// Errors: IntegratorBlowup, LagrangianDrift.
BundleTrajectory evolve_bundle(const PulseProfile& profile, BundleDirection direction,
                               double stop, const BundleOptions& options = {});

/// Frame at xi inside the trajectory's range, re-stepped from the nearest
/// preceding node.
Frame frame_at(const BundleTrajectory& trajectory, const PulseProfile& profile, double xi);

struct OmegaDrift {
  double max_relative_drift = 0.0;  // |omega(Y1,Y2)(xi) - omega(Y1,Y2)(-L)| / (|Y1||Y2|)
  double initial_omega = 0.0;       // of the unit starting vectors
};

/// Integrates two solutions of the eigenvalue problem at lambda = 0 across
/// [-L, L] and reports the drift of omega(Y1, Y2), relative to |Y1||Y2| at each
/// node (the vectors are rescaled on the way to avoid overflow).
OmegaDrift omega_drift(const PulseProfile& profile, const Vec6& y1, const Vec6& y2,
                       double max_step = 1.0);

}  // namespace maslov
