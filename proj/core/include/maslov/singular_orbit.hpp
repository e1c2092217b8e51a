#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "maslov/params.hpp"

namespace maslov {

/// A positive root x* of alpha e^{-2x} + beta e^{-2x/D} = gamma: the slow-time
/// half-width of the excursion onto the upper slow manifold.
struct JumpSolution {
  double x_star = 0.0;
  int root_index = 1;  // 1-based, ascending in x*
  double residual = 0.0;
};

/// f(x) = alpha e^{-2x} + beta e^{-2x/D} - gamma.
double jump_function(const ModelParams& params, double x);
double jump_function_derivative(const ModelParams& params, double x);

/// All positive roots, ascending. f has at most one interior extremum, so the
/// half-line splits into at most two monotone pieces, each bracketed and solved
/// by bisection followed by Newton polishing. Only D > 1 and (alpha, beta) != 0
/// are required; the other invariants of ModelParams are not checked here.
std::vector<JumpSolution> solve_jump_condition(const ModelParams& params);

/// Coordinates of the jump-off point: c1 = -e^{-x*}, c3 = -e^{-x*/D};
/// V_{z1} = -c1^2, W_{z1} = -c3^2.
struct JumpOffData {
  double c1 = 0.0;
  double c3 = 0.0;
  double v = 0.0;
  double w = 0.0;
};
JumpOffData jump_off_data(double x_star, double dd);

enum class Branch { front, back };

/// P on the eps = 0 heteroclinic through U: +(1-U^2)/sqrt2 (front) or its
/// negative (back). Throws Error(domain_error) for |U| > 1.
double fast_heteroclinic_p(double u, Branch branch);

/// Time parametrization of the eps = 0 heteroclinic with U(0) = 0:
/// (U, P) = (+-tanh(xi/sqrt2), (1 - tanh^2)/sqrt2 * +-1).
std::array<double, 2> fast_heteroclinic_at(double xi, Branch branch);

enum class SegmentKind { slow_unstable, fast_front, slow_plateau, fast_back, slow_stable };
std::string_view segment_name(SegmentKind kind);

/// Slow arcs on their own slow-time variable s:
///   slow_unstable on (-inf, 0], ending at z1;
///   slow_plateau on [-x*, x*], V = 2 c1 cosh s + 1, W = 2 c3 cosh(s/D) + 1;
///   slow_stable on [0, inf), starting at z4.
/// Throws Error(domain_error) outside the segment domain or for a fast kind.
PhasePoint slow_arc(SegmentKind kind, double x_star, double dd, double s);

struct Segment {
  SegmentKind kind;
  double t_min;  // own time variable; +-inf for the unbounded arcs
  double t_max;
  Timescale timescale;
};

/// The eps = 0 skeleton: S1, F2, S3, F4, S5 and corners z1..z4.
class SingularOrbit {
 public:
  SingularOrbit(const ModelParams& params, const JumpSolution& jump);

  const std::array<Segment, 5>& segments() const { return segments_; }
  const std::array<PhasePoint, 4>& corners() const { return corners_; }
  const PhasePoint& corner(int i) const { return corners_.at(static_cast<std::size_t>(i - 1)); }
  double x_star() const { return jump_.x_star; }
  const JumpSolution& jump() const { return jump_; }
  const ModelParams& params() const { return params_; }

  /// Point on segment `kind` at its own time t (slow s or fast xi, centered so
  /// fast fronts have U(0) = 0).
  PhasePoint evaluate(SegmentKind kind, double t) const;

  /// `n` points per segment, unbounded arcs truncated at |s| = s_tail.
  std::vector<std::pair<SegmentKind, std::vector<PhasePoint>>> polylines(int n,
                                                                          double s_tail = 8.0) const;

  /// Composite eps > 0 initial guess on the fast variable xi: back front centered
  /// at xi_back, plateau for xi < xi_back, slow stable arc beyond, slow variables
  /// following s = eps xi. Valid for xi >= 0.
  PhasePoint half_pulse_guess(double xi, double eps, double xi_back) const;

 private:
  ModelParams params_;
  JumpSolution jump_;
  std::array<Segment, 5> segments_;
  std::array<PhasePoint, 4> corners_;
};

SingularOrbit build_singular_orbit(const ModelParams& params, const JumpSolution& jump);

/// Hamiltonian of the reduced fast system, P^2/2 + U^2/2 - U^4/4.
double fast_hamiltonian(double u, double p);

}  // namespace maslov
