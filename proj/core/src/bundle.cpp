#include "maslov/bundle.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/model.hpp"
#include "maslov/symplectic.hpp"

namespace maslov {

namespace {

const double kC1 = 0.5 - std::sqrt(3.0) / 6.0;
const double kC2 = 0.5 + std::sqrt(3.0) / 6.0;
const double kA12 = 0.25 - std::sqrt(3.0) / 6.0;
const double kA21 = 0.25 + std::sqrt(3.0) / 6.0;

// Step boundaries from a to b (either direction): profile nodes in between,
// intervals longer than max_step split evenly.
std::vector<double> step_points(const PulseProfile& profile, double a, double b, double max_step) {
  const auto& g = profile.grid();
  const double lo = std::min(a, b), hi = std::max(a, b);
  std::vector<double> base{lo};
  for (double x : g)
    if (x > lo && x < hi) base.push_back(x);
  base.push_back(hi);
  std::vector<double> pts{base.front()};
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    const double len = base[i + 1] - base[i];
    if (len <= 0.0) continue;
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / max_step)));
    for (int k = 1; k < pieces; ++k) pts.push_back(base[i] + len * k / pieces);
    pts.push_back(base[i + 1]);
  }
  if (a > b) std::reverse(pts.begin(), pts.end());
  return pts;
}

Mat6 a_at(const PulseProfile& profile, double xi) {
  return linearization_matrix(0.0, profile.value_extended(xi).U(), profile.params());
}

}  // namespace

Mat6 gauss_step(const PulseProfile& profile, double xi, double h) {
  const Mat6 a1 = a_at(profile, xi + kC1 * h);
  const Mat6 a2 = a_at(profile, xi + kC2 * h);
  Eigen::Matrix<double, 12, 12> lhs = Eigen::Matrix<double, 12, 12>::Identity();
  lhs.block<6, 6>(0, 0) -= h * 0.25 * a1;
  lhs.block<6, 6>(0, 6) -= h * kA12 * a1;
  lhs.block<6, 6>(6, 0) -= h * kA21 * a2;
  lhs.block<6, 6>(6, 6) -= h * 0.25 * a2;
  Eigen::Matrix<double, 12, 6> rhs;
  rhs << a1, a2;
  const Eigen::Matrix<double, 12, 6> k = lhs.partialPivLu().solve(rhs);
  return Mat6::Identity() + 0.5 * h * (k.topRows<6>() + k.bottomRows<6>());
}

Eigen::Matrix<double, 6, Eigen::Dynamic> propagate(const PulseProfile& profile,
                                                    const Eigen::Matrix<double, 6, Eigen::Dynamic>& y,
                                                    double from, double to, double max_step) {
  Eigen::Matrix<double, 6, Eigen::Dynamic> out = y;
  if (from == to) return out;
  const auto pts = step_points(profile, from, to, max_step);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    out = gauss_step(profile, pts[i], pts[i + 1] - pts[i]) * out;
  return out;
}

BundleTrajectory evolve_bundle(const PulseProfile& profile, BundleDirection direction, double stop,
                               const BundleOptions& options) {
  const double L = profile.half_width();
  if (!(stop >= -L && stop <= L)) throw Error(Errc::domain_error, "bundle stop point outside [-L, L]");
  const ModelParams& params = profile.params();
  const Mat6 om = omega_matrix(params);
  const EigenSplitting split = asymptotic_splitting(0.0, params);
  const bool fwd = direction == BundleDirection::forward;
  const Frame start = fwd ? split.unstable_frame() : split.stable_frame();

  BundleTrajectory traj;
  traj.direction = direction;
  const auto pts = step_points(profile, fwd ? -L : L, stop, options.max_step);
  traj.nodes = pts;
  traj.frames.reserve(pts.size());

  Frame y = orthonormalize(start);
  traj.start_gap = plane_gap(y, start);
  traj.frames.push_back(y);
  double since = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double h = pts[i + 1] - pts[i];
    y = gauss_step(profile, pts[i], h) * y;
    if (!y.allFinite()) {
      std::ostringstream msg;
      msg << "bundle integration overflowed at xi = " << pts[i + 1];
      throw Error(Errc::integrator_blowup, msg.str());
    }
    since += std::abs(h);
    Frame q = orthonormalize(y);
    if (since >= options.reorth_interval) {
      y = q;
      since = 0.0;
    }
    const double res = (q.transpose() * om * q).cwiseAbs().maxCoeff();
    traj.max_lagrangian_residual = std::max(traj.max_lagrangian_residual, res);
    if (res > options.drift_limit) {
      std::ostringstream msg;
      msg << "frame left the Lagrangian Grassmannian (residual " << res << ") at xi = " << pts[i + 1];
      throw Error(Errc::lagrangian_drift, msg.str());
    }
    traj.frames.push_back(q);
  }
  return traj;
}

Frame frame_at(const BundleTrajectory& trajectory, const PulseProfile& profile, double xi) {
  const auto& n = trajectory.nodes;
  const bool fwd = trajectory.direction == BundleDirection::forward;
  const double lo = std::min(n.front(), n.back()), hi = std::max(n.front(), n.back());
  if (!(xi >= lo && xi <= hi)) throw Error(Errc::domain_error, "xi outside the bundle trajectory");
  // last node not past xi in the direction of integration
  std::size_t k = 0;
  if (fwd) {
    k = static_cast<std::size_t>(std::upper_bound(n.begin(), n.end(), xi) - n.begin());
  } else {
    k = static_cast<std::size_t>(
        std::upper_bound(n.begin(), n.end(), xi, [](double a, double b) { return a > b; }) - n.begin());
  }
  k = k == 0 ? 0 : k - 1;
  if (n[k] == xi) return trajectory.frames[k];
  const Eigen::Matrix<double, 6, Eigen::Dynamic> y =
      propagate(profile, trajectory.frames[k], n[k], xi, 1.0);
  return orthonormalize(Frame(y));
}

OmegaDrift omega_drift(const PulseProfile& profile, const Vec6& y1, const Vec6& y2,
                       double max_step) {
  const ModelParams& params = profile.params();
  const Mat6 om = omega_matrix(params);
  const double L = profile.half_width();
  Vec6 a = y1.normalized(), b = y2.normalized();
  OmegaDrift out;
  out.initial_omega = a.dot(om * b);
  double log_scale = 0.0;  // log(|Y1| |Y2|) of the true solutions
  const auto pts = step_points(profile, -L, L, max_step);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Mat6 m = gauss_step(profile, pts[i], pts[i + 1] - pts[i]);
    a = m * a;
    b = m * b;
    const double na = a.norm(), nb = b.norm();
    if (!(na > 0.0 && nb > 0.0) || !std::isfinite(na * nb))
      throw Error(Errc::integrator_blowup, "solution pair overflowed");
    log_scale += std::log(na) + std::log(nb);
    a /= na;
    b /= nb;
    const double expected = log_scale > 700.0 ? 0.0 : out.initial_omega * std::exp(-log_scale);
    out.max_relative_drift = std::max(out.max_relative_drift, std::abs(a.dot(om * b) - expected));
  }
  return out;
}

}  // namespace maslov
