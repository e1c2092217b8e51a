#include "maslov/corner.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

#include "maslov/errors.hpp"
#include "maslov/model.hpp"

namespace maslov {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

Frame plane_z_eta(double alpha, double beta, double dd, double v_z1, double w_z1) {
  Frame z = Frame::Zero();
  z(5, 0) = 1.0;
  z(1, 1) = 1.0;
  z(2, 1) = 1.0 / dd;
  z(3, 1) = w_z1 / dd;
  z(4, 1) = v_z1;
  z(3, 2) = -alpha / beta;
  z(4, 2) = 1.0;
  return z;
}

Frame unstable_y_plane_eta(double alpha, double beta, double dd, double d2, double d3, double d6) {
  Frame y = Frame::Zero();
  y(0, 0) = 1.0;
  y(1, 0) = d2;
  y(2, 0) = d3;
  y(5, 0) = d6;
  y(3, 1) = 1.0;
  y(5, 1) = beta * dd / kSqrt2 * d3;
  y(4, 2) = 1.0;
  y(5, 2) = alpha / kSqrt2 * d2;
  return y;
}

CornerFlow::CornerFlow(const ModelParams& params, const JumpSolution& jump, double delta2)
    : params_(params), d2_(delta2) {
  if (delta2 == 0.0) throw Error(Errc::domain_error, "delta2 must be nonzero");
  const JumpOffData j = jump_off_data(jump.x_star, params.dd);
  v_z1_ = j.v;
  w_z1_ = j.w;
  d3_ = d2_ / params.dd;
  d6_ = -(params.beta * (w_z1_ / params.dd) + params.alpha * v_z1_) / kSqrt2 * d2_ * d2_;
  mu_ = singular_eigenvalues(params);
}

Frame CornerFlow::trajectory_eta(double x) const {
  const double a = params_.alpha, b = params_.beta, D = params_.dd;
  Frame phi = Frame::Zero();
  phi(0, 0) = std::exp(mu_[0] * x);
  phi(1, 0) = d2_ * std::exp(mu_[1] * x);
  phi(2, 0) = d3_ * std::exp(mu_[2] * x);
  phi(5, 0) = d6_ * std::exp(mu_[5] * x);
  phi(3, 1) = std::exp(mu_[3] * x);
  phi(5, 1) = b * D / kSqrt2 * d3_ * std::exp(mu_[5] * x);
  phi(4, 2) = std::exp(mu_[4] * x);
  phi(5, 2) = a / kSqrt2 * d2_ * std::exp(mu_[5] * x);
  return phi;
}

double CornerFlow::determinant(double x) const {
  const Frame phi = trajectory_eta(x);
  Mat6 m = Mat6::Zero();
  m(0, 0) = 1.0;
  m(5, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 2) = 1.0;
  m.col(3) = phi.col(1);
  m.col(4) = phi.col(2);
  m.col(5) = phi.col(0);
  return m.determinant();
}

double CornerFlow::closed_form(double x) const {
  return std::exp((mu_[3] + mu_[4]) * x) * (d6_ * std::exp(mu_[5] * x) - std::exp(mu_[0] * x));
}

double CornerFlow::root() const {
  if (!has_root()) return std::numeric_limits<double>::quiet_NaN();
  return std::log(d6_) / (2.0 * mu_[0]);
}

double CornerFlow::max_closed_form_error(int n, double x_max) const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = n > 1 ? -x_max + x_max * i / (n - 1) : 0.0;
    const double c = closed_form(x);
    worst = std::max(worst, std::abs(determinant(x) - c) / std::max(1.0, std::abs(c)));
  }
  return worst;
}

double CornerFlow::distance_to_z() const {
  const Frame z = plane_z_eta(params_.alpha, params_.beta, params_.dd, v_z1_, w_z1_);
  const PluckerVector pz = plucker_coords(frame_from_eta(z), PluckerBasis::eta);
  const PluckerVector px = plucker_coords(frame_from_eta(trajectory_eta(0.0)), PluckerBasis::eta);
  return pz.distance(px);
}

CornerReport corner_flow(const ModelParams& params, const JumpSolution& jump, double delta2,
                         int samples) {
  const CornerFlow flow(params, jump, delta2);
  CornerReport r;
  r.delta2 = flow.delta2();
  r.delta3 = flow.delta3();
  r.delta6 = flow.delta6();
  r.has_root = flow.has_root();
  r.root = flow.root();
  const double x_max = r.has_root ? std::max(5.0, 1.5 * std::abs(r.root)) : 5.0;
  r.closed_form_error = flow.max_closed_form_error(samples, x_max);
  r.z_distance = flow.distance_to_z();
  const CornerFlow finer(params, jump, 10.0 * delta2);
  r.converged = finer.has_root() == flow.has_root();
  return r;
}

}  // namespace maslov
