#pragma once

#include <array>

#include "maslov/params.hpp"
#include "maslov/singular_orbit.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

/// Plane Z (eta coordinates): span{eta6, eta2 + eta3 / D + (W_z1 / D) eta4 + V_z1 eta5,
/// -(alpha / beta) eta4 + eta5}.
Frame plane_z_eta(double alpha, double beta, double dd, double v_z1, double w_z1);

/// Member of W^u(Y) in Lambda(3) (eta coordinates):
/// span{eta1 + d2 eta2 + d3 eta3 + d6 eta6, eta4 + (beta D / sqrt2) d3 eta6,
///      eta5 + (alpha / sqrt2) d2 eta6}.
Frame unstable_y_plane_eta(double alpha, double beta, double dd, double d2, double d3, double d6);

/// Backward flow of the corner linearization at U = 1 through the W^u(Y) plane
/// closest to Z, using the leading-order eigenpairs (mu_i, eta_i).
class CornerFlow {
 public:
  CornerFlow(const ModelParams& params, const JumpSolution& jump, double delta2 = 1e3);

  double delta2() const { return d2_; }
  double delta3() const { return d3_; }
  double delta6() const { return d6_; }
  const std::array<double, 6>& mu() const { return mu_; }

  /// Phi(x) in eta coordinates, x <= 0.
  Frame trajectory_eta(double x) const;
  /// det[e1 + e6, e2, e3, Phi_2, Phi_3, Phi_1] in eta coordinates.
  double determinant(double x) const;
  /// e^{(mu4 + mu5) x} (delta6 e^{mu6 x} - e^{mu1 x}).
  double closed_form(double x) const;

  /// A root exists iff delta6 >= 1; it sits at ln(delta6) / (2 mu1) <= 0.
  bool has_root() const { return d6_ >= 1.0; }
  double root() const;

  /// Max of |determinant - closed_form| / max(1, |closed_form|) over n evenly
  /// spaced x in [-x_max, 0].
  double max_closed_form_error(int n, double x_max) const;

  /// Projective distance between Phi(0) and Z in eta-basis Pluecker coordinates.
  double distance_to_z() const;

 private:
  ModelParams params_;
  double v_z1_ = 0.0;
  double w_z1_ = 0.0;
  double d2_ = 0.0;
  double d3_ = 0.0;
  double d6_ = 0.0;
  std::array<double, 6> mu_{};
};

struct CornerReport {
  double delta2 = 0.0;
  double delta3 = 0.0;
  double delta6 = 0.0;
  bool has_root = false;
  double root = 0.0;             // NaN without a root
  double closed_form_error = 0.0;
  double z_distance = 0.0;
  bool converged = false;        // root existence agrees with delta2 -> 10 delta2
};

CornerReport corner_flow(const ModelParams& params, const JumpSolution& jump, double delta2 = 1e3,
                         int samples = 100);

}  // namespace maslov
