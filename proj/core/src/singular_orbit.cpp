#include "maslov/singular_orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "maslov/errors.hpp"

namespace maslov {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Bisection to the rounding floor on a bracket with a sign change, then Newton.
double refine_root(const ModelParams& p, double lo, double hi) {
  double flo = jump_function(p, lo);
  for (int it = 0; it < 300 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = jump_function(p, mid);
    if (fm == 0.0) return mid;
    if (sign_of(fm) == sign_of(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double d = jump_function_derivative(p, x);
    if (d == 0.0) break;
    const double next = x - jump_function(p, x) / d;
    if (next < lo || next > hi) break;
    x = next;
  }
  return x;
}

}  // namespace

double jump_function(const ModelParams& p, double x) {
  return p.alpha * std::exp(-2.0 * x) + p.beta * std::exp(-2.0 * x / p.dd) - p.gamma;
}

double jump_function_derivative(const ModelParams& p, double x) {
  return -2.0 * p.alpha * std::exp(-2.0 * x) - 2.0 * p.beta / p.dd * std::exp(-2.0 * x / p.dd);
}

std::vector<JumpSolution> solve_jump_condition(const ModelParams& p) {
  if (p.alpha == 0.0 && p.beta == 0.0)
    throw Error(Errc::invalid_params, "jump condition needs alpha or beta nonzero");
  if (!(p.dd > 1.0)) throw Error(Errc::invalid_params, "jump condition needs D > 1");

  std::vector<double> breaks{0.0};
  if (p.alpha * p.beta < 0.0) {
    const double xe = std::log(-p.alpha * p.dd / p.beta) / (2.0 - 2.0 / p.dd);
    if (xe > 0.0) breaks.push_back(xe);
  }
  breaks.push_back(kInf);

  // sign of f on the far tail of the last monotone piece
  const int tail_sign = p.gamma != 0.0 ? -sign_of(p.gamma) : sign_of(p.beta);

  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    double b = breaks[k + 1];
    const double fa = jump_function(p, a);
    if (fa == 0.0 && a > 0.0) {
      roots.push_back(a);
      continue;
    }
    if (std::isinf(b)) {
      if (sign_of(fa) == tail_sign || tail_sign == 0) continue;
      b = std::max(1.0, 2.0 * a);
      while (sign_of(jump_function(p, b)) != tail_sign) {
        b *= 2.0;
        if (b > 1e4) break;
      }
      if (sign_of(jump_function(p, b)) != tail_sign) continue;
    }
    const double fb = jump_function(p, b);
    if (fb == 0.0) {
      if (b > 0.0 && std::isfinite(b)) roots.push_back(b);
      continue;
    }
    if (fa == 0.0 || sign_of(fa) == sign_of(fb)) continue;
    roots.push_back(refine_root(p, a, b));
  }

  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double x, double y) { return std::abs(x - y) < 1e-13 * (1.0 + x); }),
              roots.end());

  std::vector<JumpSolution> out;
  for (double r : roots) {
    if (!(r > 0.0)) continue;
    out.push_back({r, static_cast<int>(out.size()) + 1, jump_function(p, r)});
  }
  return out;
}

JumpOffData jump_off_data(double x_star, double dd) {
  JumpOffData d;
  d.c1 = -std::exp(-x_star);
  d.c3 = -std::exp(-x_star / dd);
  d.v = -d.c1 * d.c1;
  d.w = -d.c3 * d.c3;
  return d;
}

double fast_heteroclinic_p(double u, Branch branch) {
  if (!(std::abs(u) <= 1.0)) {
    std::ostringstream msg;
    msg << "heteroclinic defined for |U| <= 1, got " << u;
    throw Error(Errc::domain_error, msg.str());
  }
  const double p = (1.0 - u * u) / kSqrt2;
  return branch == Branch::front ? p : -p;
}

std::array<double, 2> fast_heteroclinic_at(double xi, Branch branch) {
  const double t = std::tanh(xi / kSqrt2);
  const double p = (1.0 - t * t) / kSqrt2;
  if (branch == Branch::front) return {t, p};
  return {-t, -p};
}

std::string_view segment_name(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::slow_unstable: return "slow-unstable";
    case SegmentKind::fast_front: return "fast-front";
    case SegmentKind::slow_plateau: return "slow-plateau";
    case SegmentKind::fast_back: return "fast-back";
    case SegmentKind::slow_stable: return "slow-stable";
  }
  return "unknown";
}

PhasePoint slow_arc(SegmentKind kind, double x_star, double dd, double s) {
  const JumpOffData j = jump_off_data(x_star, dd);
  auto out_of_domain = [&](const char* range) {
    std::ostringstream msg;
    msg << segment_name(kind) << " arc is defined for s in " << range << ", got " << s;
    throw Error(Errc::domain_error, msg.str());
  };
  switch (kind) {
    case SegmentKind::slow_unstable: {
      if (!(s <= 0.0)) out_of_domain("(-inf, 0]");
      const double v = -1.0 + (j.v + 1.0) * std::exp(s);
      const double w = -1.0 + (j.w + 1.0) * std::exp(s / dd);
      return PhasePoint(-1.0, 0.0, v, v + 1.0, w, w + 1.0);
    }
    case SegmentKind::slow_plateau: {
      const double tol = 1e-12 * std::max(1.0, x_star);
      if (!(s >= -x_star - tol && s <= x_star + tol)) out_of_domain("[-x*, x*]");
      return PhasePoint(1.0, 0.0, 2.0 * j.c1 * std::cosh(s) + 1.0, 2.0 * j.c1 * std::sinh(s),
                        2.0 * j.c3 * std::cosh(s / dd) + 1.0, 2.0 * j.c3 * std::sinh(s / dd));
    }
    case SegmentKind::slow_stable: {
      if (!(s >= 0.0)) out_of_domain("[0, inf)");
      const double v = -1.0 + (j.v + 1.0) * std::exp(-s);
      const double w = -1.0 + (j.w + 1.0) * std::exp(-s / dd);
      return PhasePoint(-1.0, 0.0, v, -(v + 1.0), w, -(w + 1.0));
    }
    default:
      throw Error(Errc::domain_error, "slow_arc called with a fast segment kind");
  }
}

SingularOrbit::SingularOrbit(const ModelParams& params, const JumpSolution& jump)
    : params_(params), jump_(jump) {
  if (!(jump.x_star > 0.0)) throw Error(Errc::domain_error, "x* must be positive");
  const double xs = jump.x_star;
  segments_ = {Segment{SegmentKind::slow_unstable, -kInf, 0.0, Timescale::slow},
               Segment{SegmentKind::fast_front, -kInf, kInf, Timescale::fast},
               Segment{SegmentKind::slow_plateau, -xs, xs, Timescale::slow},
               Segment{SegmentKind::fast_back, -kInf, kInf, Timescale::fast},
               Segment{SegmentKind::slow_stable, 0.0, kInf, Timescale::slow}};
  const double D = params.dd;
  const PhasePoint z1 = slow_arc(SegmentKind::slow_unstable, xs, D, 0.0);
  PhasePoint z2 = z1;
  z2.y[0] = 1.0;
  const PhasePoint z3 = slow_arc(SegmentKind::slow_plateau, xs, D, xs);
  PhasePoint z4 = z3;
  z4.y[0] = -1.0;
  corners_ = {z1, z2, z3, z4};
}

PhasePoint SingularOrbit::evaluate(SegmentKind kind, double t) const {
  const double D = params_.dd;
  switch (kind) {
    case SegmentKind::fast_front: {
      auto up = fast_heteroclinic_at(t, Branch::front);
      PhasePoint p = corners_[0];
      p.y[0] = up[0];
      p.y[1] = up[1];
      return p;
    }
    case SegmentKind::fast_back: {
      auto up = fast_heteroclinic_at(t, Branch::back);
      PhasePoint p = corners_[2];
      p.y[0] = up[0];
      p.y[1] = up[1];
      return p;
    }
    default:
      return slow_arc(kind, jump_.x_star, D, t);
  }
}

std::vector<std::pair<SegmentKind, std::vector<PhasePoint>>> SingularOrbit::polylines(
    int n, double s_tail) const {
  std::vector<std::pair<SegmentKind, std::vector<PhasePoint>>> out;
  const double xs = jump_.x_star;
  const double fast_tail = 8.0;
  for (const auto& seg : segments_) {
    double a = seg.t_min, b = seg.t_max;
    if (seg.timescale == Timescale::fast) {
      a = -fast_tail;
      b = fast_tail;
    } else if (seg.kind == SegmentKind::slow_unstable) {
      a = -s_tail;
    } else if (seg.kind == SegmentKind::slow_stable) {
      b = s_tail;
    } else {
      a = -xs;
      b = xs;
    }
    std::vector<PhasePoint> pts;
    for (int i = 0; i < n; ++i) pts.push_back(evaluate(seg.kind, a + (b - a) * i / std::max(1, n - 1)));
    out.emplace_back(seg.kind, std::move(pts));
  }
  return out;
}

PhasePoint SingularOrbit::half_pulse_guess(double xi, double eps, double xi_back) const {
  const double xs = jump_.x_star;
  const double s = std::max(eps * (xi - xi_back) + xs, -xs);
  PhasePoint p = s <= xs ? slow_arc(SegmentKind::slow_plateau, xs, params_.dd, s)
                         : slow_arc(SegmentKind::slow_stable, xs, params_.dd, s - xs);
  auto up = fast_heteroclinic_at(xi - xi_back, Branch::back);
  p.y[0] = up[0];
  p.y[1] = up[1];
  return p;
}

SingularOrbit build_singular_orbit(const ModelParams& params, const JumpSolution& jump) {
  const double f = jump_function(params, jump.x_star);
  if (std::abs(f) > 1e-9) {
    std::ostringstream msg;
    msg << "x* = " << jump.x_star << " does not solve the jump condition (f = " << f << ")";
    throw Error(Errc::domain_error, msg.str());
  }
  return SingularOrbit(params, jump);
}

double fast_hamiltonian(double u, double p) {
  return 0.5 * p * p + 0.5 * u * u - 0.25 * u * u * u * u;
}

}  // namespace maslov
