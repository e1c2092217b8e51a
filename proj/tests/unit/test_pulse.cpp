#include <doctest.h>

#include <cmath>
#include <random>

#include "maslov/errors.hpp"
#include "maslov/model.hpp"
#include "maslov/pulse.hpp"
#include "maslov/singular_orbit.hpp"
#include "fixtures.hpp"

using namespace maslov;

TEST_CASE("stable pulse profile") {
  const PulseProfile& prof = fixtures::stable_pulse();
  const ModelParams& p = prof.params();
  CHECK(prof.stats().residual < 1e-10);
  CHECK(prof.stats().endpoint_error < 1e-6);
  CHECK(reversibility_error(prof) < 1e-12);
  CHECK(prof.u_zero_count() == 2);

  double umax = -2.0;
  for (const Vec6& y : prof.values()) umax = std::max(umax, y[0]);
  CHECK(umax > 0.9);
  CHECK(umax < 1.1);

  const JumpOffData z = jump_off_data(prof.jump().x_star, p.dd);
  const PhasePoint mid = prof.value(0.0);
  CHECK(std::abs(mid.V() - (2.0 * z.c1 + 1.0)) < 5.0 * p.epsilon);
  CHECK(std::abs(mid.W() - (2.0 * z.c3 + 1.0)) < 5.0 * p.epsilon);
  CHECK(std::abs(mid.P()) < 1e-12);

  // fronts sit near +-x*/eps
  CHECK(std::abs(prof.back_crossing() - prof.jump().x_star / p.epsilon) < 10.0);
  CHECK(prof.back_crossing() == doctest::Approx(-prof.front_crossing()).epsilon(1e-10));
  const PhasePoint back = prof.value(prof.back_crossing());
  CHECK(std::abs(back.U()) < 1e-9);
  CHECK(std::abs(back.P() + 1.0 / std::sqrt(2.0)) < 0.05);
  CHECK(std::abs(prof.value(prof.front_crossing()).P() - 1.0 / std::sqrt(2.0)) < 0.05);
}

TEST_CASE("profile interpolation") {
  const PulseProfile& prof = fixtures::stable_pulse();
  const std::size_t k = prof.grid().size() / 3;
  CHECK((prof.value(prof.grid()[k]).y - prof.values()[k]).norm() == 0.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> xi(-prof.half_width(), prof.half_width());
  for (int i = 0; i < 50; ++i) {
    const double x = xi(rng);
    const Vec6 d = prof.derivative(x) - vector_field(prof.value(x), prof.params());
    CHECK(d.lpNorm<Eigen::Infinity>() < 1e-6);
  }
  CHECK_THROWS_AS(prof.value(prof.half_width() + 1.0), Error);
  CHECK((prof.value_extended(prof.half_width() + 1.0).y - prof.rest_state().y).norm() == 0.0);
}

TEST_CASE("pulse solver argument checks") {
  const ModelParams p = fixtures::stable_params();
  const JumpSolution j = solve_jump_condition(p).at(0);
  PulseOptions o;
  o.half_width = j.x_star / p.epsilon;
  try {
    solve_pulse(p, j, o);
    FAIL("short half width accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::domain_error);
  }
  o = PulseOptions{};
  o.nodes = 101;
  try {
    solve_pulse(p, j, o);
    FAIL("coarse mesh accepted");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::mesh_too_coarse);
  }
  CHECK(default_half_width(p, j.x_star) >= 2.0 * j.x_star / p.epsilon + 40.0);
}

TEST_CASE("unstable pulse and its partner") {
  const PulseProfile& thin = fixtures::unstable_pulse();
  CHECK(thin.stats().residual < 1e-10);
  CHECK(thin.u_zero_count() == 2);
  CHECK(std::abs(thin.back_crossing() - thin.jump().x_star / thin.params().epsilon) < 5.0);

  const ModelParams p = fixtures::unstable_params();
  const PulseProfile wide = solve_pulse(p, solve_jump_condition(p).at(1));
  CHECK(wide.stats().residual < 1e-10);
  CHECK(wide.back_crossing() > 500.0);
}

TEST_CASE("front search for a strongly shifted front") {
  // alpha = -6 moves the eps = 0.01 back front two fast units off x*/eps, more
  // than plain Newton will track from the singular guess
  ModelParams p = fixtures::unstable_params();
  p.alpha = -6.0;
  p.beta = 1.5;
  const auto roots = solve_jump_condition(p);
  REQUIRE(roots.size() == 2);
  PulseOptions o;
  o.continuation_start = 0.0;
  const PulseProfile prof = solve_pulse(p, roots[0], o);
  CHECK(prof.stats().front_search_steps > 0);
  CHECK(prof.stats().residual < 1e-10);
  CHECK(prof.stats().max_defect < 1e-4);
  CHECK(std::abs(prof.back_crossing() - 140.107) < 0.01);
}

TEST_CASE("profile depends continuously on alpha") {
  const PulseProfile& base = fixtures::stable_pulse();
  ModelParams p = base.params();
  const double d = 1e-4;
  p.alpha += d;
  const PulseProfile moved = solve_pulse(p, solve_jump_condition(p).at(0));
  double worst = 0.0;
  for (double xi = -100.0; xi <= 100.0; xi += 0.05)
    worst = std::max(worst, (moved.value(xi).y - base.value(xi).y).cwiseAbs().maxCoeff());
  CHECK(worst > 0.0);
  CHECK(worst < 100.0 * d);
}
