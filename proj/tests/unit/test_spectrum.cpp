#include <doctest.h>

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "maslov/errors.hpp"
#include "maslov/model.hpp"
#include "maslov/spectrum.hpp"
#include "fixtures.hpp"

using namespace maslov;

namespace {

// Rightmost real part of B^{-1} M(k) at the rest state, from the 3x3 matrix
// written out here directly.
double symbol_oracle(const ModelParams& p, double k) {
  const double u = rest_state_u(p);
  Eigen::Matrix3d m;
  m << -p.epsilon * p.epsilon * k * k + 1.0 - 3.0 * u * u, -p.epsilon * p.alpha, -p.epsilon * p.beta,
      1.0 / p.tau, (-k * k - 1.0) / p.tau, 0.0,
      1.0 / p.theta, 0.0, (-p.dd * p.dd * k * k - 1.0) / p.theta;
  const Eigen::Vector3cd ev = m.eigenvalues();
  double best = -1e300;
  for (int i = 0; i < 3; ++i) best = std::max(best, ev[i].real());
  return best;
}

SpectrumOptions quick(int nodes = 400) {
  SpectrumOptions o;
  o.nodes = nodes;
  o.richardson = false;
  o.localization = false;
  return o;
}

}  // namespace

TEST_CASE("symbol and essential edge") {
  ModelParams p;
  p.tau = 0.7;
  p.theta = 2.0;
  for (double k : {0.0, 0.3, 2.0, 17.0}) CHECK(symbol_rightmost(p, k) == doctest::Approx(symbol_oracle(p, k)).epsilon(1e-12));

  double prev = symbol_rightmost(p, 5.0);
  for (double k : {10.0, 20.0, 40.0, 80.0}) {
    const double r = symbol_rightmost(p, k);
    CHECK(r < prev);
    prev = r;
  }

  ModelParams lim;
  lim.epsilon = 1e-9;
  // decoupled limit: reaction Jacobian diag(-2, -1, -1)
  CHECK(symbol_rightmost(lim, 0.0) == doctest::Approx(-1.0).epsilon(1e-6));

  const double edge = essential_edge(ModelParams{});
  CHECK(edge < -0.5);
  double sampled = -1e300;
  for (int i = 0; i <= 2000; ++i) sampled = std::max(sampled, symbol_oracle(ModelParams{}, 50.0 * i / 2000));
  CHECK(edge == doctest::Approx(sampled).epsilon(1e-12));
}

TEST_CASE("spectrum grid") {
  const auto x = spectrum_grid(80.0, 401, 0.93, 0.01);
  REQUIRE(x.size() == 401);
  CHECK(x.front() == -80.0);
  CHECK(x.back() == 80.0);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(-x[x.size() - 1 - i]));
  double near_front = 1e9, far = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    if (std::abs(x[i] - 0.93) < 0.05) near_front = std::min(near_front, h);
    far = std::max(far, h);
  }
  CHECK(near_front < far / 10.0);
}

TEST_CASE("stable case point spectrum") {
  const PulseProfile& prof = fixtures::stable_pulse();
  const SpectrumReport r = point_spectrum(prof, quick());
  CHECK(r.unstable_count == 0);
  CHECK(std::abs(r.translation_eigenvalue) < 1e-3);
  CHECK(r.translation_overlap > 0.99);
  CHECK(r.eigenvalues.size() == 10);
  for (std::size_t i = 0; i + 1 < r.eigenvalues.size(); ++i)
    CHECK(r.eigenvalues[i].real() >= r.eigenvalues[i + 1].real());
  CHECK(r.half_width == doctest::Approx(prof.params().epsilon * prof.half_width()));
  const MaslovReport m = maslov_index(prof);
  CHECK(validate_counts(m, r).pass);
}

TEST_CASE("stable case refinement diagnostics") {
  const SpectrumReport r = point_spectrum(fixtures::stable_pulse(), SpectrumOptions{});
  // second-order differences: halving h quarters the translation eigenvalue
  CHECK(r.richardson_ratio > 3.0);
  CHECK(r.richardson_ratio < 5.0);
  // the nearest neighbour is the even breathing mode of the two fronts
  CHECK(r.translation_gap > 10.0 * r.mesh_error_estimate);
  CHECK(std::abs(r.translation_eigenvalue) < 10.0 * r.mesh_error_estimate);
  CHECK(r.max_outer_mass < 0.01);
}

TEST_CASE("unstable case point spectrum") {
  const PulseProfile& prof = fixtures::unstable_pulse();
  const SpectrumReport r = point_spectrum(prof, quick());
  REQUIRE(r.unstable_count == 1);
  CHECK(r.unstable_eigenvalues[0].imag() == 0.0);
  CHECK(r.unstable_eigenvalues[0].real() > 1e-3);

  // unchanged under a longer domain and a finer grid
  SpectrumOptions wide = quick();
  wide.half_width = 1.5 * r.half_width;
  CHECK(point_spectrum(prof, wide).unstable_count == 1);
  CHECK(point_spectrum(prof, quick(800)).unstable_count == 1);

  const MaslovReport m = maslov_index(prof);
  const CountAgreement a = validate_counts(m, r);
  CHECK(a.pass);
  CHECK(a.maslov_index == -1);
  CHECK(a.unstable_count == 1);
}

TEST_CASE("count mismatch is reported") {
  MaslovReport m;
  m.total_index = -1;
  SpectrumReport s;
  s.unstable_count = 0;
  const CountAgreement a = validate_counts(m, s);
  CHECK_FALSE(a.pass);
  CHECK(a.maslov_index == -1);
  CHECK(a.unstable_count == 0);
}

TEST_CASE("translation eigenfunction is the profile derivative") {
  const PulseProfile& prof = fixtures::stable_pulse();
  const SpectrumReport r = point_spectrum(prof, quick());
  const Eigenfunction ef = eigenfunction_near(prof, r.translation_eigenvalue.real(), quick());
  CHECK(std::abs(ef.eigenvalue) < 1e-3);
  CHECK(ef.values.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  // U_x is odd and peaks at the fronts
  Eigen::Index row = 0;
  ef.values.col(0).cwiseAbs().maxCoeff(&row);
  const double x = ef.x[static_cast<std::size_t>(row)];
  CHECK(std::abs(std::abs(x) - prof.jump().x_star) < 0.05);
  const std::size_t n = ef.x.size();
  for (std::size_t i = 0; i < n; i += 37)
    CHECK(std::abs(ef.values(static_cast<Eigen::Index>(i), 0) + ef.values(static_cast<Eigen::Index>(n - 1 - i), 0)) < 1e-3);
}

TEST_CASE("spectrum argument checks") {
  const PulseProfile& prof = fixtures::stable_pulse();
  SpectrumOptions o = quick();
  o.half_width = 0.5 * prof.params().epsilon * prof.half_width();
  CHECK_THROWS_AS(point_spectrum(prof, o), Error);
  o = quick(10);
  CHECK_THROWS_AS(point_spectrum(prof, o), Error);
}
