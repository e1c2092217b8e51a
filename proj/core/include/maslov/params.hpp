#pragma once

#include <Eigen/Dense>

namespace maslov {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Frame = Eigen::Matrix<double, 6, 3>;

/// Parameters of the three-component activator-inhibitor system
///
///   U_t       = eps^2 U_xx + U - U^3 - eps (alpha V + beta W + gamma)
///   tau V_t   = V_xx + U - V
///   theta W_t = D^2 W_xx + U - W
struct ModelParams {
  double epsilon = 0.01;
  double alpha = 2.0;
  double beta = 1.0;
  double gamma = 1.0;
  double dd = 5.0;  // D
  double tau = 1.0;
  double theta = 1.0;

  /// Throws Error(invalid_params) unless epsilon > 0, alpha, beta != 0,
  /// D > 1 and tau, theta > 0.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// A point of the standing-wave ODE. Storage is the nonlinear ordering
/// (U, P, V, Q, W, R); linear_order() gives (u, v, w, p, q, r).
struct PhasePoint {
  Vec6 y = Vec6::Zero();

  PhasePoint() = default;
  explicit PhasePoint(const Vec6& nonlinear) : y(nonlinear) {}
  PhasePoint(double u, double p, double v, double q, double w, double r) {
    y << u, p, v, q, w, r;
  }

  double U() const { return y[0]; }
  double P() const { return y[1]; }
  double V() const { return y[2]; }
  double Q() const { return y[3]; }
  double W() const { return y[4]; }
  double R() const { return y[5]; }

  Vec6 linear_order() const;
  static PhasePoint from_linear_order(const Vec6& lin);

  /// (U, -P, V, -Q, W, -R): the reversor of the standing-wave ODE.
  PhasePoint reflected() const;
};

/// Nonlinear (U,P,V,Q,W,R) -> linear (u,v,w,p,q,r).
Vec6 to_linear_order(const Vec6& nonlinear);
Vec6 to_nonlinear_order(const Vec6& linear);
/// Permutation matrix with to_linear_order(y) == perm * y.
Mat6 ordering_permutation();

enum class Timescale { fast, slow };

}  // namespace maslov
