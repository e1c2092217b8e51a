#include <doctest.h>

#include <cmath>

#include "maslov/corner.hpp"
#include "maslov/errors.hpp"
#include "maslov/maslov.hpp"
#include "maslov/singular_orbit.hpp"
#include "oracles.hpp"

using namespace maslov;

namespace {

ModelParams make(double alpha, double beta, double gamma, double dd = 5.0) {
  ModelParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.dd = dd;
  return p;
}

}  // namespace

TEST_CASE("jump roots against a sweep oracle") {
  CHECK(solve_jump_condition(make(1, 1, 3)).empty());

  const auto stable = solve_jump_condition(make(2, 1, 1));
  REQUIRE(stable.size() == 1);
  const auto ref = oracle::jump_roots(2, 1, 1, 5);
  REQUIRE(ref.size() == 1);
  CHECK(std::abs(stable[0].x_star - ref[0]) < 1e-12);
  CHECK(std::abs(stable[0].x_star - 0.930779039785725) < 1e-12);
  CHECK(std::abs(jump_function(make(2, 1, 1), stable[0].x_star)) < 1e-12);
  CHECK(stable[0].root_index == 1);

  const auto two = solve_jump_condition(make(-5, 5, 0.5));
  REQUIRE(two.size() == 2);
  CHECK(std::abs(two[0].x_star - 0.0677612380485235) < 1e-12);
  CHECK(std::abs(two[1].x_star - 5.75621261990922) < 1e-10);
  CHECK(two[1].root_index == 2);

  for (double a : {-4.0, -1.5, 0.7, 3.0})
    for (double b : {-2.0, 0.5, 2.5, 6.0})
      for (double g : {0.3, 1.0, 2.0}) {
        const auto got = solve_jump_condition(make(a, b, g, 3.0));
        const auto want = oracle::jump_roots(a, b, g, 3.0);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i].x_star - want[i]) < 1e-10);
      }
}

TEST_CASE("jump function derivative") {
  const ModelParams p = make(-3, 4, 0.5, 2.5);
  for (double x : {0.1, 0.8, 3.0}) {
    const double fd = (jump_function(p, x + 1e-6) - jump_function(p, x - 1e-6)) / 2e-6;
    CHECK(jump_function_derivative(p, x) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("fast heteroclinics") {
  CHECK(fast_heteroclinic_p(0.0, Branch::front) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(fast_heteroclinic_p(0.0, Branch::back) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(fast_heteroclinic_p(1.0, Branch::front) == 0.0);
  CHECK(fast_heteroclinic_p(-1.0, Branch::back) == 0.0);
  CHECK_THROWS_AS(fast_heteroclinic_p(1.5, Branch::front), Error);
  const auto at0 = fast_heteroclinic_at(0.0, Branch::front);
  CHECK(at0[0] == 0.0);
  for (double xi : {-3.0, -0.5, 1.0, 4.0})
    for (Branch b : {Branch::front, Branch::back}) {
      const auto up = fast_heteroclinic_at(xi, b);
      CHECK(std::abs(fast_hamiltonian(up[0], up[1]) - 0.25) < 1e-12);
    }
}

TEST_CASE("singular orbit corners and plateau") {
  const ModelParams p = make(2, 1, 1);
  const JumpSolution j = solve_jump_condition(p).at(0);
  const SingularOrbit orbit(p, j);
  const PhasePoint z1 = orbit.corner(1);
  CHECK(z1.U() == -1.0);
  CHECK(z1.P() == 0.0);
  CHECK(z1.V() == doctest::Approx(-std::exp(-2 * j.x_star)));
  CHECK(z1.Q() == doctest::Approx(1 - std::exp(-2 * j.x_star)));
  CHECK(z1.W() == doctest::Approx(-std::exp(-2 * j.x_star / 5)));
  CHECK(z1.R() == doctest::Approx(1 - std::exp(-2 * j.x_star / 5)));
  CHECK(z1.V() == doctest::Approx(-0.156).epsilon(0.01));
  CHECK(z1.W() == doctest::Approx(-0.689).epsilon(0.01));
  CHECK(std::abs(p.alpha * z1.V() + p.beta * z1.W() + p.gamma) < 1e-12);

  const PhasePoint start = slow_arc(SegmentKind::slow_plateau, j.x_star, p.dd, -j.x_star);
  CHECK(start.V() == doctest::Approx(z1.V()));
  CHECK(start.W() == doctest::Approx(z1.W()));
  const PhasePoint mid = slow_arc(SegmentKind::slow_plateau, j.x_star, p.dd, 0.0);
  CHECK(mid.Q() == 0.0);
  CHECK(mid.R() == 0.0);
  CHECK_THROWS_AS(slow_arc(SegmentKind::fast_front, j.x_star, p.dd, 0.0), Error);

  for (SegmentKind k : {SegmentKind::fast_front, SegmentKind::fast_back})
    for (int i = 0; i < 20; ++i) {
      const PhasePoint q = orbit.evaluate(k, -6.0 + 0.6 * i);
      CHECK(std::abs(fast_hamiltonian(q.U(), q.P()) - 0.25) < 1e-12);
    }
  const auto lines = orbit.polylines(50);
  CHECK(lines.size() == 5);
}

TEST_CASE("stability criterion") {
  const ModelParams p = make(2, 1, 1);
  const JumpSolution j = solve_jump_condition(p).at(0);
  const StabilityResult s = stability_criterion(p, j);
  CHECK(s.verdict == StabilityVerdict::stable);
  CHECK(s.margin == doctest::Approx(oracle::margin(2, 1, 5, j.x_star)).epsilon(1e-12));
  CHECK(std::abs(s.margin + 0.448688430209693) < 1e-12);

  const ModelParams q = make(-5, 5, 0.5);
  const auto roots = solve_jump_condition(q);
  CHECK(stability_criterion(q, roots[0]).verdict == StabilityVerdict::unstable);
  CHECK(std::abs(stability_criterion(q, roots[0]).margin - 3.39303814096737) < 1e-10);
  CHECK(stability_criterion(q, roots[1]).verdict == StabilityVerdict::stable);
  CHECK(std::abs(stability_criterion(q, roots[1]).margin + 0.0999599799859886) < 1e-10);

  // both coefficients positive: every root is stable
  for (double a : {0.2, 1.0, 4.0})
    for (double b : {0.3, 2.0, 5.0})
      for (const auto& r : solve_jump_condition(make(a, b, 0.5)))
        CHECK(stability_criterion(make(a, b, 0.5), r).verdict == StabilityVerdict::stable);
}

TEST_CASE("singular limit report") {
  const ModelParams p = make(2, 1, 1);
  const SingularLimitReport s = singular_limit_report(p, solve_jump_condition(p).at(0));
  CHECK(s.predicted_index == 0);
  REQUIRE(s.interior.size() == 2);
  CHECK(s.interior[0].kind == CrossingKind::front);
  CHECK(s.interior[0].signature == -1);
  CHECK(s.interior[1].kind == CrossingKind::corner);
  CHECK(s.interior[1].signature == 1);
  CHECK(s.endpoint_positive == 0);
  CHECK(s.plateau_crossings == 0);
  CHECK(s.plateau_factor == doctest::Approx(s.plateau_factor_closed).epsilon(1e-10));

  const ModelParams q = make(-5, 5, 0.5);
  const SingularLimitReport u = singular_limit_report(q, solve_jump_condition(q).at(0));
  CHECK(u.predicted_index == -1);
  REQUIRE(u.interior.size() == 1);
  CHECK(u.interior[0].kind == CrossingKind::front);
  CHECK_FALSE(u.corner_crossing);
}

TEST_CASE("corner flow closed form") {
  const ModelParams p = make(2, 1, 1);
  const JumpSolution j = solve_jump_condition(p).at(0);
  const CornerFlow flow(p, j);
  CHECK(flow.max_closed_form_error(100, 5.0) < 1e-10);
  CHECK(flow.has_root());
  CHECK(flow.root() <= 0.0);
  CHECK(std::abs(flow.determinant(flow.root())) < 1e-8);
  CHECK(flow.delta2() / flow.delta3() == doctest::Approx(p.dd));

  // delta6 sign follows -(alpha V_z1 + beta W_z1 / D)
  const JumpOffData z = jump_off_data(j.x_star, p.dd);
  CHECK((flow.delta6() > 0) == (-(p.alpha * z.v + p.beta * z.w / p.dd) > 0));

  const ModelParams q = make(-5, 5, 0.5);
  const CornerFlow unstable(q, solve_jump_condition(q).at(0));
  CHECK_FALSE(unstable.has_root());

  const CornerReport r = corner_flow(p, j);
  CHECK(r.has_root);
  CHECK(r.converged);
  CHECK(r.closed_form_error < 1e-10);
}

TEST_CASE("corner root position") {
  const ModelParams p = make(2, 1, 1);
  const CornerFlow flow(p, solve_jump_condition(p).at(0));
  CHECK(flow.root() == doctest::Approx(std::log(flow.delta6()) / (2.0 * flow.mu()[0])));
  // delta6 = 2 with mu1 = -sqrt2 puts the root at -ln2 / (2 sqrt2)
  CHECK(std::log(2.0) / (2.0 * -std::sqrt(2.0)) == doctest::Approx(-0.2451).epsilon(1e-3));
}
