#pragma once

#include <array>
#include <string>

#include "maslov/params.hpp"

namespace maslov {

/// Omega with omega(x, y) = x^T Omega y = du^dp - alpha dv^dq - beta D dw^dr in
/// the linear ordering. Throws Error(invalid_params) if alpha or beta is zero
/// (the form is then degenerate).
Mat6 omega_matrix(const ModelParams& params);

double omega_form(const Vec6& x, const Vec6& y, const ModelParams& params);

struct LagrangianCheck {
  bool lagrangian = false;
  double max_residual = 0.0;  // max |omega(f_i, f_j)| over column pairs
};

/// Throws Error(rank_deficient) unless the frame has rank 3.
LagrangianCheck is_lagrangian(const Frame& frame, const ModelParams& params, double tol = 1e-9);

/// Orthonormal basis of the column span by Householder QR, with column signs
/// fixed so the triangular factor has a positive diagonal. F = Q R with det R > 0,
/// so orientation-sensitive determinants keep their sign.
/// Throws Error(rank_deficient) if a diagonal entry of R falls below
/// 1e-12 times the largest column norm.
Frame orthonormalize(const Frame& frame);

/// Smallest-to-largest singular value ratio; 0 for rank-deficient frames.
double frame_conditioning(const Frame& frame);

enum class PluckerBasis { standard, eta };

/// Projective coordinates of a 3-plane in R^6: p_{ijk} for 1 <= i < j < k <= 6
/// in lexicographic order (123, 124, ..., 456).
class PluckerVector {
 public:
  PluckerVector() = default;
  PluckerVector(const std::array<double, 20>& coords, PluckerBasis basis);

  /// Entry for an increasing triple of 1-based indices.
  double at(int i, int j, int k) const;
  /// Alternating extension: any indices in 1..6, zero when two coincide.
  double signed_at(int i, int j, int k) const;

  const std::array<double, 20>& coords() const { return p_; }
  PluckerBasis basis() const { return basis_; }

  /// Scaled so the largest-magnitude entry is +1.
  PluckerVector normalized() const;
  /// Max violation of the Grassmann-Pluecker relations after normalization.
  double relation_residual() const;
  /// Max-norm distance between normalized vectors, minimized over the sign.
  double distance(const PluckerVector& other) const;

  static int index(int i, int j, int k);
  static std::array<int, 3> triple(int index);
  static std::string key(int index);  // "123" .. "456"

 private:
  std::array<double, 20> p_{};
  PluckerBasis basis_ = PluckerBasis::standard;
};

/// 3x3 minors of the frame's rows, in the standard basis or after re-expressing
/// the columns in the eta basis (singular_eta_basis()). Normalized so the
/// largest-magnitude entry is +1. Throws Error(rank_deficient).
PluckerVector plucker_coords(const Frame& frame, PluckerBasis basis);

/// ||P_a - P_b||_2 for the orthogonal projectors onto the two planes: the sine of
/// the largest principal angle, in [0, 1]. Throws Error(rank_deficient).
double plane_gap(const Frame& a, const Frame& b);

/// Frame whose columns are the given combinations of eta_1..eta_6 (eta-basis
/// coordinates in, standard linear-ordering vectors out).
Frame frame_from_eta(const Frame& eta_coords);

}  // namespace maslov
