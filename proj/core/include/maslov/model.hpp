#pragma once

#include <array>

#include "maslov/params.hpp"

namespace maslov {

/// Rest state U_eps^- of the pulse: the root of U^3 - U + eps((a+b)U + g)
/// near -1, found by Newton from -1 (tolerance 1e-14, 50 iterations).
double rest_state_u(const ModelParams& params);

/// X_eps^- = (U-, 0, U-, 0, U-, 0).
PhasePoint fixed_point(const ModelParams& params);

/// Right-hand side of the standing-wave ODE on the fast (xi) or slow (x = eps xi)
/// timescale. The slow field equals the fast one divided by eps.
Vec6 vector_field(const PhasePoint& point, const ModelParams& params,
                  Timescale timescale = Timescale::fast);

/// Jacobian of the fast vector field, nonlinear ordering.
Mat6 vector_field_jacobian(const PhasePoint& point, const ModelParams& params);

/// A(lambda, xi) of the eigenvalue problem written as a first-order system on
/// the fast timescale, linear ordering (u, v, w, p, q, r), with U = U(xi).
Mat6 linearization_matrix(double lambda, double u, const ModelParams& params);

/// Eigen-decomposition of A_inf(lambda) = A(lambda, U_eps^-).
struct EigenSplitting {
  std::array<double, 6> mu{};  // ascending
  Mat6 eta = Mat6::Zero();     // columns: unit eigenvectors, first nonzero entry > 0
  Mat6 left = Mat6::Zero();    // rows: dual basis, left * eta == I

  Frame stable_frame() const { return eta.leftCols<3>(); }
  Frame unstable_frame() const { return eta.rightCols<3>(); }
  /// Rows of `left` belonging to the unstable eigenvalues.
  Eigen::Matrix<double, 3, 6> unstable_projector() const { return left.bottomRows<3>(); }
};

/// Throws Error(not_hyperbolic) if an eigenvalue has |Re| < 1e-10 or the
/// splitting is not three/three.
EigenSplitting asymptotic_splitting(double lambda, const ModelParams& params);

/// The epsilon -> 0 eigenvectors eta_1..eta_6 of A_inf(0) in linear ordering with
/// entries 0, +-1, +-sqrt(2) (not unit length). Column i is eta_{i+1}.
Mat6 singular_eta_basis();

/// Leading-order eigenvalues {-sqrt2, -eps, -eps/D, eps/D, eps, sqrt2}.
std::array<double, 6> singular_eigenvalues(const ModelParams& params);

}  // namespace maslov
