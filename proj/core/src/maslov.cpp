#include "maslov/maslov.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/model.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

namespace {

constexpr double kFitFloor = 1e-8;

double stacked_det(const Frame& f, const Frame& ref) {
  Mat6 m;
  m << f, ref;
  return m.determinant();
}

// Frame at xi by one or more Gauss steps from node k of a forward trajectory.
Frame restep(const BundleTrajectory& fwd, const PulseProfile& profile, std::size_t k, double xi) {
  if (xi == fwd.nodes[k]) return fwd.frames[k];
  return orthonormalize(Frame(propagate(profile, fwd.frames[k], fwd.nodes[k], xi, 1.0)));
}

CrossingKind classify(const PulseProfile& profile, double xi, double u, double p) {
  const double front = profile.front_crossing();
  const double back = profile.back_crossing();
  if (std::abs(u) < 0.5) return p >= 0.0 ? CrossingKind::front : CrossingKind::back;
  if (u > 0.0) return xi < 0.5 * (front + back) ? CrossingKind::corner : CrossingKind::plateau;
  return CrossingKind::slow_tail;
}

}  // namespace

std::string_view verdict_name(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable: return "stable";
    case StabilityVerdict::unstable: return "unstable";
    case StabilityVerdict::marginal: return "marginal";
  }
  return "unknown";
}

std::string_view crossing_kind_name(CrossingKind kind) {
  switch (kind) {
    case CrossingKind::front: return "front";
    case CrossingKind::corner: return "corner";
    case CrossingKind::plateau: return "plateau";
    case CrossingKind::back: return "back";
    case CrossingKind::endpoint: return "endpoint";
    case CrossingKind::slow_tail: return "slow-tail";
  }
  return "unknown";
}

StabilityResult stability_criterion(const ModelParams& params, const JumpSolution& jump) {
  const double v0 = -std::exp(-2.0 * jump.x_star);
  const double w0 = -std::exp(-2.0 * jump.x_star / params.dd);
  StabilityResult r;
  r.margin = params.alpha * v0 + params.beta / params.dd * w0;
  if (std::abs(r.margin) < 1e-10) r.verdict = StabilityVerdict::marginal;
  else r.verdict = r.margin < 0.0 ? StabilityVerdict::stable : StabilityVerdict::unstable;
  return r;
}

double plateau_determinant(const ModelParams& params, const JumpSolution& jump, double x) {
  const JumpOffData j = jump_off_data(jump.x_star, params.dd);
  const double D = params.dd;
  const double c1 = j.c1, c3 = j.c3;
  const double c3p = -params.alpha * c1 / (params.beta * c3);
  Eigen::Matrix4d m;
  m.col(0) << 1.0, -1.0, 0.0, 0.0;
  m.col(1) << 0.0, 0.0, 1.0, -1.0;
  m.col(2) << c1 * std::sinh(x), c1 * std::cosh(x), c3 / D * std::sinh(x / D), c3 / D * std::cosh(x / D);
  m.col(3) << std::cosh(x), std::sinh(x), c3p * std::cosh(x / D), c3p * std::sinh(x / D);
  return m.determinant();
}

SingularLimitReport singular_limit_report(const ModelParams& params, const JumpSolution& jump) {
  SingularLimitReport r;
  r.stability = stability_criterion(params, jump);
  if (r.stability.verdict == StabilityVerdict::marginal) {
    std::ostringstream msg;
    msg << "alpha V_z1 + beta W_z1 / D = " << r.stability.margin
        << " is at the saddle-node of pulses; no prediction";
    throw Error(Errc::marginal_case, msg.str());
  }
  const JumpOffData j = jump_off_data(jump.x_star, params.dd);
  const double c3p = -params.alpha * j.c1 / (params.beta * j.c3);
  r.plateau_factor = j.c3 / params.dd - j.c1 * c3p;
  r.plateau_factor_closed = -r.stability.margin / (params.beta * j.c3);
  r.plateau_crossings = 0;
  r.corner_crossing = r.stability.verdict == StabilityVerdict::stable;
  r.interior.push_back({CrossingKind::front, -1});
  if (r.corner_crossing) r.interior.push_back({CrossingKind::corner, +1});
  r.endpoint_positive = 0;
  r.predicted_index = 0;
  for (const auto& c : r.interior) r.predicted_index += c.signature;
  return r;
}

ReferencePlane reference_plane(const PulseProfile& profile, const BundleOptions& options) {
  ReferencePlane ref;
  ref.xi_infinity = profile.back_crossing();
  ref.backward = evolve_bundle(profile, BundleDirection::backward, ref.xi_infinity, options);
  ref.frame = ref.backward.frames.back();

  const Frame u0 = orthonormalize(asymptotic_splitting(0.0, profile.params()).unstable_frame());
  double min_det = std::numeric_limits<double>::infinity();
  int sign = 0;
  for (const Frame& f : ref.backward.frames) {
    const double d = stacked_det(u0, f);
    const int s = (d > 0.0) - (d < 0.0);
    if (sign == 0) sign = s;
    if (s != sign || std::abs(d) < 1e-8) {
      std::ostringstream msg;
      msg << "det[U(0) | E^s(0, xi)] = " << d << " for xi >= xi_inf";
      throw Error(Errc::cutoff_violation, msg.str());
    }
    min_det = std::min(min_det, std::abs(d));
  }
  ref.min_cutoff_det = min_det;

  Frame singular;
  const Mat6 eta = singular_eta_basis();
  singular << eta.col(0) + eta.col(5), eta.col(1), eta.col(2);
  ref.singular_gap = plane_gap(ref.frame, singular);
  return ref;
}

std::vector<ConjugatePoint> detect_conjugate_points(const BundleTrajectory& forward,
                                                    const Frame& reference, double xi_infinity,
                                                    const PulseProfile& profile,
                                                    const MaslovOptions& options) {
  if (forward.direction != BundleDirection::forward)
    throw Error(Errc::domain_error, "conjugate points need the forward bundle");
  const auto& xs = forward.nodes;
  const std::size_t n = xs.size();
  std::vector<double> d(n);
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = stacked_det(forward.frames[i], reference);
    dmax = std::max(dmax, std::abs(d[i]));
  }
  const double cutoff = xi_infinity - options.endpoint_window;

  auto make_point = [&](double xi, bool tangential) {
    ConjugatePoint cp;
    cp.xi_star = xi;
    const PhasePoint y = profile.value(xi);
    cp.u = y.U();
    cp.p = y.P();
    cp.kind = classify(profile, xi, cp.u, cp.p);
    cp.tangential = tangential;
    return cp;
  };

  std::vector<ConjugatePoint> out;
  for (std::size_t i = 0; i + 1 < n && xs[i + 1] <= cutoff; ++i) {
    if (d[i] == 0.0) {
      out.push_back(make_point(xs[i], false));
      continue;
    }
    if (d[i] * d[i + 1] < 0.0) {
      double lo = xs[i], hi = xs[i + 1];
      const double dlo = d[i];
      while (hi - lo > options.bisection_tolerance * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double dm = stacked_det(restep(forward, profile, i, mid), reference);
        if (dm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((dm > 0.0) == (dlo > 0.0)) lo = mid; else hi = mid;
      }
      out.push_back(make_point(0.5 * (lo + hi), false));
      continue;
    }
    // tangential candidate: local minimum of |d| far below the scale
    if (i > 0 && std::abs(d[i]) < options.dip_ratio * dmax && std::abs(d[i]) <= std::abs(d[i - 1]) &&
        std::abs(d[i]) <= std::abs(d[i + 1]) && d[i - 1] * d[i] > 0.0) {
      // golden-section search on |d| over [x_{i-1}, x_{i+1}]
      double a = xs[i - 1], b = xs[i + 1];
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      auto absd = [&](double x) {
        const std::size_t k = x >= xs[i] ? i : i - 1;
        return std::abs(stacked_det(restep(forward, profile, k, x), reference));
      };
      double c = b - g * (b - a), e = a + g * (b - a);
      double fc = absd(c), fe = absd(e);
      for (int it = 0; it < 80 && b - a > options.bisection_tolerance; ++it) {
        if (fc < fe) {
          b = e; e = c; fe = fc; c = b - g * (b - a); fc = absd(c);
        } else {
          a = c; c = e; fc = fe; e = a + g * (b - a); fe = absd(e);
        }
      }
      const double xm = 0.5 * (a + b);
      const std::size_t k = xm >= xs[i] ? i : i - 1;
      Mat6 m;
      m << restep(forward, profile, k, xm), reference;
      const Eigen::JacobiSVD<Mat6> svd(m);
      if (svd.singularValues()[5] < options.singular_value_threshold)
        out.push_back(make_point(xm, true));
    }
  }
  for (std::size_t k = 1; k < out.size(); ++k)
    if (std::abs(out[k].xi_star - out[k - 1].xi_star) < 10.0 * options.bisection_tolerance) {
      std::ostringstream msg;
      msg << "two conjugate point candidates at xi = " << out[k].xi_star << " cannot be separated";
      throw Error(Errc::unresolved_crossing, msg.str());
    }
  return out;
}

namespace {

void fill_form(ConjugatePoint& point, const Frame& f, const Frame& reference,
               const PulseProfile& profile, const MaslovOptions& options) {
  Mat6 m;
  m << f, reference;
  const Eigen::JacobiSVD<Mat6> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  point.det_gap = s[5];
  int k = 0;
  for (int i = 5; i >= 0 && s[i] < options.singular_value_threshold; --i) ++k;
  k = std::max(k, 1);
  point.dim = k;
  // null vectors (a, b) with F a + R b = 0, intersection vector psi = F a
  Eigen::Matrix<double, 6, Eigen::Dynamic> psi(6, k);
  for (int c = 0; c < k; ++c) psi.col(c) = f * svd.matrixV().col(5 - c).head<3>();
  Eigen::HouseholderQR<Eigen::Matrix<double, 6, Eigen::Dynamic>> qr(psi);
  psi = qr.householderQ() * Eigen::MatrixXd::Identity(6, k);
  point.witness = psi;

  const ModelParams& params = profile.params();
  const Mat6 om = omega_matrix(params);
  const Mat6 a = linearization_matrix(0.0, profile.value(point.xi_star).U(), params);
  const Eigen::MatrixXd gam0 = psi.transpose() * om * a * psi;
  const Eigen::MatrixXd gam = 0.5 * (gam0 + gam0.transpose());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gam);
  point.form_eigenvalues = es.eigenvalues();
  const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
  const double scale = std::max(emax, (om * a).norm());
  point.regular = es.eigenvalues().cwiseAbs().minCoeff() > 1e-8 * scale;
  point.signature = 0;
  for (int i = 0; i < k; ++i) point.signature += (es.eigenvalues()[i] > 0.0) - (es.eigenvalues()[i] < 0.0);
}

}  // namespace

void crossing_signature(ConjugatePoint& point, const BundleTrajectory& forward,
                        const Frame& reference, const PulseProfile& profile,
                        const MaslovOptions& options) {
  fill_form(point, frame_at(forward, profile, point.xi_star), reference, profile, options);
  if (!point.regular) {
    std::ostringstream msg;
    msg << "crossing at xi = " << point.xi_star << " has a degenerate crossing form";
    throw Error(Errc::degenerate_crossing, msg.str());
  }
}

double derivative_fit_residual(const BundleTrajectory& trajectory, const PulseProfile& profile) {
  double worst = 0.0;
  for (std::size_t i = 0; i < trajectory.nodes.size(); ++i) {
    const Vec6 d = to_linear_order(profile.derivative(trajectory.nodes[i]));
    const double nd = d.norm();
    // below this the direction of phi' is set by rounding in the stored profile
    if (!(nd >= kFitFloor)) continue;
    const Vec6 u = d / nd;
    const Frame& f = trajectory.frames[i];
    worst = std::max(worst, (u - f * (f.transpose() * u)).norm());
  }
  return worst;
}

bool inventory_matches(const std::vector<ConjugatePoint>& found,
                       const std::vector<PredictedCrossing>& predicted, double u_tol) {
  if (found.size() != predicted.size()) return false;
  for (std::size_t i = 0; i < found.size(); ++i) {
    if (found[i].kind != predicted[i].kind || found[i].signature != predicted[i].signature) return false;
    if ((found[i].kind == CrossingKind::front || found[i].kind == CrossingKind::back) &&
        !(std::abs(found[i].u) < u_tol))
      return false;
  }
  return true;
}

MaslovReport maslov_index(const PulseProfile& profile, const MaslovOptions& options) {
  MaslovReport rep;
  const ReferencePlane ref = reference_plane(profile, options.bundle);
  rep.xi_infinity = ref.xi_infinity;
  rep.reference_singular_gap = ref.singular_gap;
  const BundleTrajectory fwd =
      evolve_bundle(profile, BundleDirection::forward, ref.xi_infinity, options.bundle);
  rep.max_lagrangian_residual = std::max(fwd.max_lagrangian_residual, ref.backward.max_lagrangian_residual);
  rep.derivative_fit_residual = derivative_fit_residual(fwd, profile);

  rep.interior_points = detect_conjugate_points(fwd, ref.frame, ref.xi_infinity, profile, options);
  for (auto& cp : rep.interior_points) crossing_signature(cp, fwd, ref.frame, profile, options);

  ConjugatePoint& ep = rep.endpoint;
  ep.xi_star = ref.xi_infinity;
  const PhasePoint y = profile.value(ep.xi_star);
  ep.u = y.U();
  ep.p = y.P();
  ep.kind = CrossingKind::endpoint;
  fill_form(ep, fwd.frames.back(), ref.frame, profile, options);
  if (!ep.regular) throw Error(Errc::degenerate_crossing, "endpoint crossing form is degenerate");
  rep.endpoint_positive_count = 0;
  for (int i = 0; i < ep.form_eigenvalues.size(); ++i)
    if (ep.form_eigenvalues[i] > 0.0) ++rep.endpoint_positive_count;

  rep.total_index = rep.endpoint_positive_count;
  for (const auto& cp : rep.interior_points) rep.total_index += cp.signature;

  try {
    rep.prediction = singular_limit_report(profile.params(), profile.jump());
    rep.agrees_with_prediction = inventory_matches(rep.interior_points, rep.prediction->interior) &&
                                 rep.total_index == rep.prediction->predicted_index &&
                                 rep.endpoint_positive_count == rep.prediction->endpoint_positive;
  } catch (const Error& e) {
    if (e.code() != Errc::marginal_case) throw;
  }
  return rep;
}

}  // namespace maslov
