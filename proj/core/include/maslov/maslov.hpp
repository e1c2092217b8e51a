#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "maslov/bundle.hpp"
#include "maslov/pulse.hpp"
#include "maslov/singular_orbit.hpp"

namespace maslov {

enum class StabilityVerdict { stable, unstable, marginal };
std::string_view verdict_name(StabilityVerdict v);

struct StabilityResult {
  StabilityVerdict verdict = StabilityVerdict::marginal;
  double margin = 0.0;  // alpha V0 + (beta / D) W0 with V0 = -e^{-2x*}, W0 = -e^{-2x*/D}
};

/// Stable iff the margin is negative; marginal if |margin| < 1e-10.
StabilityResult stability_criterion(const ModelParams& params, const JumpSolution& jump);

/// Where along the pulse a conjugate point sits.
enum class CrossingKind { front, corner, plateau, back, endpoint, slow_tail };
std::string_view crossing_kind_name(CrossingKind kind);

struct ConjugatePoint {
  double xi_star = 0.0;
  double u = 0.0;  // U(xi_star)
  double p = 0.0;  // P(xi_star)
  CrossingKind kind = CrossingKind::front;
  int dim = 1;
  int signature = 0;
  bool regular = false;
  bool tangential = false;  // found as a dip of |det| without a sign change
  double det_gap = 0.0;     // smallest singular value of [F_u | F_ref]
  Eigen::Matrix<double, 6, Eigen::Dynamic> witness;  // orthonormal intersection basis
  Eigen::VectorXd form_eigenvalues;
};

struct ReferencePlane {
  double xi_infinity = 0.0;
  Frame frame = Frame::Zero();
  double singular_gap = 0.0;  // plane_gap to span{eta1 + eta6, eta2, eta3}
  double min_cutoff_det = 0.0;  // min over xi >= xi_inf of |det[U(0) | E^s(0, xi)]|
  BundleTrajectory backward;
};

struct MaslovOptions {
  BundleOptions bundle;
  double singular_value_threshold = 1e-8;
  double dip_ratio = 1e-7;
  double bisection_tolerance = 1e-10;
  /// Sign changes closer than this to xi_inf belong to the endpoint crossing.
  double endpoint_window = 0.05;
};

/// xi_inf = back U = 0 crossing, frame = E^s(0, xi_inf) from the backward bundle.
/// Throws Error(cutoff_violation) if det[U(0) | E^s(0, xi)] vanishes or changes
/// sign for a sampled xi >= xi_inf.
ReferencePlane reference_plane(const PulseProfile& profile, const BundleOptions& options = {});

/// Zeros of det[F_u(xi) | F_ref] on (-L, xi_inf - window), by sign change and
/// bisection, plus tangential candidates (|det| < dip_ratio * max without a sign
/// change) retained only when the intersection is numerically nontrivial.
/// Signatures are not filled in. Throws Error(unresolved_crossing).
std::vector<ConjugatePoint> detect_conjugate_points(const BundleTrajectory& forward,
                                                    const Frame& reference, double xi_infinity,
                                                    const PulseProfile& profile,
                                                    const MaslovOptions& options = {});

/// Fills dim, witness, form_eigenvalues, signature and regular from the crossing
/// form Gamma_ij = (omega(psi_i, A psi_j) + omega(psi_j, A psi_i)) / 2.
/// Throws Error(degenerate_crossing) if the form is not regular.
void crossing_signature(ConjugatePoint& point, const BundleTrajectory& forward,
                        const Frame& reference, const PulseProfile& profile,
                        const MaslovOptions& options = {});

struct PredictedCrossing {
  CrossingKind kind;
  int signature;
};

struct SingularLimitReport {
  StabilityResult stability;
  std::vector<PredictedCrossing> interior;  // front (-1), corner (+1) iff stable
  int plateau_crossings = 0;
  double plateau_factor = 0.0;       // c3 / D - c1 c3'
  double plateau_factor_closed = 0.0;  // -(alpha V_z1 + beta W_z1 / D) / (beta c3)
  bool corner_crossing = false;
  int endpoint_positive = 0;  // back crossing is negative
  int predicted_index = 0;
};

/// Throws Error(marginal_case) when |alpha V_z1 + beta W_z1 / D| < 1e-10.
SingularLimitReport singular_limit_report(const ModelParams& params, const JumpSolution& jump);

/// det[eta2, eta3, dh/dx, dh/dc1] on the plateau in (V, Q, W, R) coordinates,
/// with dh/dc1 using c3' = -alpha c1 / (beta c3).
double plateau_determinant(const ModelParams& params, const JumpSolution& jump, double x);

struct MaslovReport {
  std::vector<ConjugatePoint> interior_points;
  ConjugatePoint endpoint;
  int endpoint_positive_count = 0;
  int total_index = 0;
  double xi_infinity = 0.0;
  double reference_singular_gap = 0.0;
  double max_lagrangian_residual = 0.0;
  double derivative_fit_residual = 0.0;
  std::optional<SingularLimitReport> prediction;
  bool agrees_with_prediction = false;
};

MaslovReport maslov_index(const PulseProfile& profile, const MaslovOptions& options = {});

/// Max over nodes of the distance from the unit derivative phi'(xi) to the
/// frame's span (least-squares residual). Nodes with |phi'| < 1e-8 are skipped:
/// rounding of the O(1) stored state tilts phi' by roughly 1e-16 / |phi'|.
double derivative_fit_residual(const BundleTrajectory& trajectory, const PulseProfile& profile);

/// Compares kinds and signatures of the numerical interior crossings with the
/// prediction (order along xi, exact integers) and checks |U| < u_tol at the
/// front crossings.
bool inventory_matches(const std::vector<ConjugatePoint>& found,
                       const std::vector<PredictedCrossing>& predicted, double u_tol = 1e-3);

}  // namespace maslov
