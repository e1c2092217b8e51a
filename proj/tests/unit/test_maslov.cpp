#include <doctest.h>

#include <cmath>
#include <random>

#include "maslov/bundle.hpp"
#include "maslov/errors.hpp"
#include "maslov/maslov.hpp"
#include "maslov/model.hpp"
#include "maslov/symplectic.hpp"
#include "fixtures.hpp"

using namespace maslov;

TEST_CASE("Gauss-Legendre steps are symplectic") {
  const PulseProfile& prof = fixtures::stable_pulse();
  const Mat6 om = omega_matrix(prof.params());
  for (double xi : {-200.0, -93.1, -10.0, 0.0, 92.5}) {
    const Mat6 m = gauss_step(prof, xi, 0.7);
    CHECK((m.transpose() * om * m - om).norm() < 1e-12);
  }
}

TEST_CASE("omega is conserved along solutions") {
  const PulseProfile& prof = fixtures::stable_pulse();
  std::mt19937 rng(5);
  std::normal_distribution<double> n;
  for (int t = 0; t < 3; ++t) {
    Vec6 a, b;
    for (int i = 0; i < 6; ++i) {
      a[i] = n(rng);
      b[i] = n(rng);
    }
    CHECK(omega_drift(prof, a, b).max_relative_drift < 1e-8);
  }
}

TEST_CASE("forward bundle") {
  const PulseProfile& prof = fixtures::stable_pulse();
  // past the back front phi' decays into the stable directions and forward
  // integration loses it to rounding, so stop at the Maslov endpoint
  const BundleTrajectory fw = evolve_bundle(prof, BundleDirection::forward, prof.back_crossing());
  CHECK(fw.start_gap < 1e-6);
  CHECK(fw.max_lagrangian_residual < 1e-8);
  CHECK(derivative_fit_residual(fw, prof) < 1e-6);
  for (std::size_t i = 0; i < fw.frames.size(); i += 97)
    CHECK((fw.frames[i].transpose() * fw.frames[i] - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  const Frame mid = frame_at(fw, prof, 0.3);
  CHECK(is_lagrangian(mid, prof.params(), 1e-8).lagrangian);
}

TEST_CASE("reference plane") {
  const PulseProfile& prof = fixtures::stable_pulse();
  const ReferencePlane ref = reference_plane(prof);
  CHECK(ref.xi_infinity == doctest::Approx(prof.back_crossing()).epsilon(1e-12));
  CHECK(ref.singular_gap < 0.1);
  CHECK(ref.min_cutoff_det > 0.0);
  CHECK(is_lagrangian(ref.frame, prof.params(), 1e-8).lagrangian);
}

TEST_CASE("stable case conjugate points") {
  const PulseProfile& prof = fixtures::stable_pulse();
  const MaslovReport m = maslov_index(prof);
  CHECK(m.total_index == 0);
  REQUIRE(m.interior_points.size() == 2);
  const ConjugatePoint& front = m.interior_points[0];
  CHECK(front.kind == CrossingKind::front);
  CHECK(front.signature == -1);
  CHECK(front.dim == 1);
  CHECK(std::abs(front.u) < 1e-3);
  // the intersection is spanned by e_u
  CHECK(std::abs(std::abs(front.witness.col(0)[0]) - 1.0) < 1e-2);
  const ConjugatePoint& corner = m.interior_points[1];
  CHECK(corner.kind == CrossingKind::corner);
  CHECK(corner.signature == 1);
  CHECK(corner.form_eigenvalues[0] > 0.0);
  CHECK(m.endpoint.kind == CrossingKind::endpoint);
  CHECK(m.endpoint.signature == -1);
  CHECK(m.endpoint_positive_count == 0);
  REQUIRE(m.prediction);
  CHECK(m.agrees_with_prediction);
  CHECK(inventory_matches(m.interior_points, m.prediction->interior));
  CHECK_FALSE(inventory_matches(m.interior_points, {{CrossingKind::front, -1}}));
}

TEST_CASE("unstable case conjugate points") {
  const MaslovReport m = maslov_index(fixtures::unstable_pulse());
  CHECK(m.total_index == -1);
  REQUIRE(m.interior_points.size() == 1);
  CHECK(m.interior_points[0].kind == CrossingKind::front);
  CHECK(m.interior_points[0].signature == -1);
  CHECK(m.agrees_with_prediction);
}

TEST_CASE("index is invariant under numerical parameters") {
  const ModelParams p = fixtures::stable_params();
  const JumpSolution j = solve_jump_condition(p).at(0);
  PulseOptions longer;
  longer.half_width = default_half_width(p, j.x_star) + 10.0;
  CHECK(maslov_index(solve_pulse(p, j, longer)).total_index == 0);

  MaslovOptions fine;
  fine.bundle.reorth_interval = 0.5;
  fine.bundle.max_step = 0.5;
  const MaslovReport m = maslov_index(fixtures::stable_pulse(), fine);
  CHECK(m.total_index == 0);
  CHECK(m.interior_points.size() == 2);
}

TEST_CASE("plateau determinant has no zero on the plateau") {
  const ModelParams p = fixtures::stable_params();
  const JumpSolution j = solve_jump_condition(p).at(0);
  const double first = plateau_determinant(p, j, -j.x_star);
  for (int i = 0; i <= 20; ++i) {
    const double x = -j.x_star + 2.0 * j.x_star * i / 20.0;
    CHECK(plateau_determinant(p, j, x) * first > 0.0);
  }
}
