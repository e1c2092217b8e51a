#include "maslov/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "maslov/errors.hpp"

namespace maslov {

double rest_state_u(const ModelParams& params) {
  const double eps = params.epsilon;
  const double a = eps * (params.alpha + params.beta);
  const double g = eps * params.gamma;
  double u = -1.0;
  for (int it = 0; it < 50; ++it) {
    const double f = u * u * u - u + a * u + g;
    const double df = 3.0 * u * u - 1.0 + a;
    if (df == 0.0) break;
    const double step = f / df;
    u -= step;
    if (!(u >= -1.5 && u <= -0.5)) break;
    if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(u))) {
      // one more polish step to land on the rounding floor
      u -= (u * u * u - u + a * u + g) / (3.0 * u * u - 1.0 + a);
      return u;
    }
  }
  std::ostringstream msg;
  msg << "Newton from U=-1 did not converge inside [-1.5,-0.5] (last iterate " << u << ")";
  throw Error(Errc::no_root_near_minus_one, msg.str());
}

PhasePoint fixed_point(const ModelParams& params) {
  const double u = rest_state_u(params);
  return PhasePoint(u, 0.0, u, 0.0, u, 0.0);
}

Vec6 vector_field(const PhasePoint& point, const ModelParams& params, Timescale timescale) {
  const double eps = params.epsilon;
  const double D = params.dd;
  const double U = point.U(), P = point.P(), V = point.V(), Q = point.Q(), W = point.W(),
               R = point.R();
  Vec6 f;
  f[0] = P;
  f[1] = -U + U * U * U + eps * (params.alpha * V + params.beta * W + params.gamma);
  f[2] = eps * Q;
  f[3] = eps * (V - U);
  f[4] = eps / D * R;
  f[5] = eps / D * (W - U);
  if (timescale == Timescale::slow) f /= eps;
  return f;
}

Mat6 vector_field_jacobian(const PhasePoint& point, const ModelParams& params) {
  const double eps = params.epsilon;
  const double D = params.dd;
  const double U = point.U();
  Mat6 J = Mat6::Zero();
  J(0, 1) = 1.0;
  J(1, 0) = -1.0 + 3.0 * U * U;
  J(1, 2) = eps * params.alpha;
  J(1, 4) = eps * params.beta;
  J(2, 3) = eps;
  J(3, 0) = -eps;
  J(3, 2) = eps;
  J(4, 5) = eps / D;
  J(5, 0) = -eps / D;
  J(5, 4) = eps / D;
  return J;
}

Mat6 linearization_matrix(double lambda, double u, const ModelParams& params) {
  const double eps = params.epsilon;
  const double D = params.dd;
  Mat6 A = Mat6::Zero();
  // rows/cols: u v w p q r
  A(0, 3) = 1.0;
  A(1, 4) = eps;
  A(2, 5) = eps / D;
  A(3, 0) = lambda - 1.0 + 3.0 * u * u;
  A(3, 1) = params.alpha * eps;
  A(3, 2) = params.beta * eps;
  A(4, 0) = -eps;
  A(4, 1) = eps * (lambda * params.tau + 1.0);
  A(5, 0) = -eps / D;
  A(5, 2) = eps / D * (lambda * params.theta + 1.0);
  return A;
}

namespace {

void normalize_sign(Eigen::Ref<Vec6> v) {
  v.normalize();
  const double scale = v.cwiseAbs().maxCoeff();
  for (int i = 0; i < 6; ++i) {
    if (std::abs(v[i]) > 1e-12 * scale) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

EigenSplitting asymptotic_splitting(double lambda, const ModelParams& params) {
  const Mat6 A = linearization_matrix(lambda, rest_state_u(params), params);
  Eigen::EigenSolver<Mat6> solver(A);
  if (solver.info() != Eigen::Success)
    throw Error(Errc::not_hyperbolic, "eigen-decomposition of A_inf failed");
  const auto values = solver.eigenvalues();
  const auto vectors = solver.eigenvectors();

  std::array<int, 6> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a].real() < values[b].real(); });

  EigenSplitting out;
  const double scale = A.cwiseAbs().maxCoeff();
  for (int k = 0; k < 6; ++k) {
    const auto ev = values[order[k]];
    if (std::abs(ev.real()) < 1e-10) {
      std::ostringstream msg;
      msg << "A_inf(" << lambda << ") has eigenvalue " << ev.real() << "+" << ev.imag()
          << "i on the imaginary axis";
      throw Error(Errc::not_hyperbolic, msg.str());
    }
    if (std::abs(ev.imag()) > 1e-12 * std::max(1.0, scale))
      throw Error(Errc::not_hyperbolic, "A_inf has complex eigenvalues for real lambda");
    out.mu[k] = ev.real();
    Vec6 v = vectors.col(order[k]).real();
    normalize_sign(v);
    out.eta.col(k) = v;
  }
  if (!(out.mu[2] < 0.0 && out.mu[3] > 0.0))
    throw Error(Errc::not_hyperbolic, "splitting of A_inf is not 3/3");
  out.left = out.eta.inverse();
  return out;
}

Mat6 singular_eta_basis() {
  const double s2 = std::sqrt(2.0);
  Mat6 E = Mat6::Zero();
  // linear ordering u v w p q r
  E(0, 0) = 1.0; E(3, 0) = -s2;  // eta_1: fast stable
  E(1, 1) = 1.0; E(4, 1) = -1.0; // eta_2: (v,q) stable
  E(2, 2) = 1.0; E(5, 2) = -1.0; // eta_3: (w,r) stable
  E(2, 3) = 1.0; E(5, 3) = 1.0;  // eta_4: (w,r) unstable
  E(1, 4) = 1.0; E(4, 4) = 1.0;  // eta_5: (v,q) unstable
  E(0, 5) = 1.0; E(3, 5) = s2;   // eta_6: fast unstable
  return E;
}

std::array<double, 6> singular_eigenvalues(const ModelParams& params) {
  const double s2 = std::sqrt(2.0);
  const double e = params.epsilon, D = params.dd;
  return {-s2, -e, -e / D, e / D, e, s2};
}

}  // namespace maslov
