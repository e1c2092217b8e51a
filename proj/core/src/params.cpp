#include "maslov/params.hpp"

#include <cmath>
#include <sstream>

#include "maslov/errors.hpp"

namespace maslov {

namespace {
// nonlinear index -> linear index
constexpr int kToLinear[6] = {0, 3, 1, 4, 2, 5};
}  // namespace

void ModelParams::validate() const {
  std::ostringstream why;
  if (!(epsilon > 0.0)) why << "epsilon must be positive; ";
  if (alpha == 0.0) why << "alpha must be nonzero; ";
  if (beta == 0.0) why << "beta must be nonzero; ";
  if (!(dd > 1.0)) why << "D must exceed 1; ";
  if (!(tau > 0.0)) why << "tau must be positive; ";
  if (!(theta > 0.0)) why << "theta must be positive; ";
  for (double v : {epsilon, alpha, beta, gamma, dd, tau, theta}) {
    if (!std::isfinite(v)) {
      why << "non-finite parameter; ";
      break;
    }
  }
  const std::string msg = why.str();
  if (!msg.empty()) throw Error(Errc::invalid_params, msg);
}

Vec6 to_linear_order(const Vec6& nonlinear) {
  Vec6 out;
  for (int i = 0; i < 6; ++i) out[kToLinear[i]] = nonlinear[i];
  return out;
}

Vec6 to_nonlinear_order(const Vec6& linear) {
  Vec6 out;
  for (int i = 0; i < 6; ++i) out[i] = linear[kToLinear[i]];
  return out;
}

Mat6 ordering_permutation() {
  Mat6 perm = Mat6::Zero();
  for (int i = 0; i < 6; ++i) perm(kToLinear[i], i) = 1.0;
  return perm;
}

Vec6 PhasePoint::linear_order() const { return to_linear_order(y); }

PhasePoint PhasePoint::from_linear_order(const Vec6& lin) {
  return PhasePoint(to_nonlinear_order(lin));
}

PhasePoint PhasePoint::reflected() const {
  return PhasePoint(y[0], -y[1], y[2], -y[3], y[4], -y[5]);
}

}  // namespace maslov
