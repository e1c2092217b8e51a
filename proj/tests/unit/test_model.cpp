#include <doctest.h>

#include <cmath>

#include "maslov/errors.hpp"
#include "maslov/mesh.hpp"
#include "maslov/model.hpp"
#include "oracles.hpp"

using namespace maslov;

TEST_CASE("params validation") {
  ModelParams p;
  CHECK_NOTHROW(p.validate());
  auto rejects = [](ModelParams q) {
    try {
      q.validate();
    } catch (const Error& e) {
      return e.code() == Errc::invalid_params;
    }
    return false;
  };
  ModelParams q = p;
  q.epsilon = 0.0;
  CHECK(rejects(q));
  q = p;
  q.dd = 1.0;
  CHECK(rejects(q));
  q = p;
  q.alpha = 0.0;
  CHECK(rejects(q));
  q = p;
  q.tau = -1.0;
  CHECK(rejects(q));
}

TEST_CASE("orderings are inverse permutations") {
  const Vec6 y = (Vec6() << 1, 2, 3, 4, 5, 6).finished();
  const Vec6 lin = to_linear_order(y);
  CHECK(lin[0] == 1);
  CHECK(lin[1] == 3);
  CHECK(lin[2] == 5);
  CHECK(lin[3] == 2);
  CHECK(lin[4] == 4);
  CHECK(lin[5] == 6);
  CHECK((to_nonlinear_order(lin) - y).norm() == 0.0);
  CHECK((ordering_permutation() * y - lin).norm() == 0.0);
  const PhasePoint r = PhasePoint(y).reflected();
  CHECK(r.P() == -2);
  CHECK(r.V() == 3);
}

TEST_CASE("rest state") {
  ModelParams p;
  p.epsilon = 1e-8;
  CHECK(std::abs(rest_state_u(p) + 1.0) < 1e-6);

  p = ModelParams{};
  p.alpha = p.beta = p.gamma = 0.0;
  CHECK(rest_state_u(p) == -1.0);

  p = ModelParams{};
  const double oracle = oracle::bisect(
      [](double u) { return u * u * u - u + 0.01 * (3.0 * u + 1.0); }, -1.2, -0.8);
  CHECK(std::abs(rest_state_u(p) - oracle) < 1e-13);
  CHECK(std::abs(rest_state_u(p) - (-0.990000507536535)) < 1e-12);

  const Vec6 f = vector_field(fixed_point(p), p);
  CHECK(f.norm() < 1e-12);
}

TEST_CASE("vector field") {
  ModelParams p;
  p.epsilon = 0.0;
  const Vec6 f = vector_field(PhasePoint(0.0, 1.0 / std::sqrt(2.0), 0.3, -0.2, 0.7, 0.1), p);
  CHECK(std::abs(f[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  for (int i = 1; i < 6; ++i) CHECK(f[i] == 0.0);

  p = ModelParams{};
  p.alpha = p.beta = 1.0;
  p.gamma = 0.0;
  const Vec6 g = vector_field(PhasePoint(1, 0, 0, 0, 0, 0), p);
  CHECK(g[1] == doctest::Approx(0.0));
  CHECK(g[2] == 0.0);
  CHECK(g[3] == doctest::Approx(-0.01));

  const Vec6 slow = vector_field(PhasePoint(0.2, 0.1, 0.3, 0.4, 0.5, 0.6), p, Timescale::slow);
  const Vec6 fast = vector_field(PhasePoint(0.2, 0.1, 0.3, 0.4, 0.5, 0.6), p, Timescale::fast);
  CHECK((slow * p.epsilon - fast).norm() < 1e-15);
}

TEST_CASE("vector field jacobian matches differences") {
  ModelParams p;
  p.alpha = -3.0;
  p.beta = 2.5;
  const PhasePoint pt(0.4, -0.3, 0.2, 0.1, -0.6, 0.05);
  const Mat6 J = vector_field_jacobian(pt, p);
  for (int c = 0; c < 6; ++c) {
    PhasePoint a = pt, b = pt;
    a.y[c] += 1e-6;
    b.y[c] -= 1e-6;
    const Vec6 col = (vector_field(a, p) - vector_field(b, p)) / 2e-6;
    CHECK((col - J.col(c)).norm() < 1e-8);
  }
}

TEST_CASE("linearization matrix entries") {
  ModelParams p;
  p.epsilon = 0.0;
  Mat6 A = linearization_matrix(0.0, 0.0, p);
  CHECK(A(0, 3) == 1.0);
  CHECK(A(3, 0) == -1.0);
  int nonzero = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) nonzero += A(i, j) != 0.0;
  CHECK(nonzero == 2);

  A = linearization_matrix(0.0, -1.0, p);
  CHECK(A(3, 0) == 2.0);

  p = ModelParams{};
  p.alpha = 2.0;
  p.beta = 3.0;
  p.dd = 2.0;
  A = linearization_matrix(0.5, 1.0, p);
  CHECK(A(3, 0) == doctest::Approx(2.5));
  CHECK(A(3, 1) == doctest::Approx(0.02));
  CHECK(A(3, 2) == doctest::Approx(0.03));
  CHECK(A(4, 0) == doctest::Approx(-0.01));
  CHECK(A(4, 1) == doctest::Approx(0.015));
  CHECK(A(5, 2) == doctest::Approx(0.0075));
}

TEST_CASE("asymptotic splitting") {
  ModelParams p;
  p.dd = 2.0;
  const EigenSplitting s = asymptotic_splitting(0.0, p);
  // slow pair within eps^2 of +-eps, +-eps/D; the fast pair feels U- = -1 + O(eps)
  // at first order, so it is compared with sqrt(3 U-^2 - 1)
  const double slow[4] = {-0.01, -0.005, 0.005, 0.01};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(s.mu[i + 1] - slow[i]) < 1e-4);
  const double u = rest_state_u(p);
  CHECK(std::abs(s.mu[5] - std::sqrt(3.0 * u * u - 1.0)) < 1e-4);
  CHECK(std::abs(s.mu[5] - std::sqrt(2.0)) < 3.0 * p.epsilon);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s.mu[i] + s.mu[5 - i]) < 1e-10);
  CHECK((s.left * s.eta - Mat6::Identity()).norm() < 1e-10);

  // each mu is a root of the characteristic polynomial
  const Mat6 A = linearization_matrix(0.0, rest_state_u(p), p);
  for (int i = 0; i < 6; ++i) {
    const Vec6 r = A * s.eta.col(i) - s.mu[i] * s.eta.col(i);
    CHECK(r.norm() < 1e-12);
  }
  const auto lead = singular_eigenvalues(p);
  CHECK(lead[0] == doctest::Approx(-std::sqrt(2.0)));
  CHECK(lead[4] == doctest::Approx(0.01));
}

TEST_CASE("singular eta basis spans the eps = 0 eigenspaces") {
  ModelParams p;
  p.epsilon = 0.0;
  const Mat6 A = linearization_matrix(0.0, -1.0, p);
  const Mat6 eta = singular_eta_basis();
  CHECK((A * eta.col(0) + std::sqrt(2.0) * eta.col(0)).norm() < 1e-14);
  CHECK((A * eta.col(5) - std::sqrt(2.0) * eta.col(5)).norm() < 1e-14);
  for (int i = 1; i < 5; ++i) CHECK((A * eta.col(i)).norm() < 1e-14);
  CHECK(std::abs(eta.determinant()) > 0.1);

  // eps -> 0: the computed unit eigenvectors line up with eta
  p = ModelParams{};
  p.epsilon = 1e-6;
  const EigenSplitting s = asymptotic_splitting(0.0, p);
  for (int i : {0, 5}) {
    const Vec6 e = eta.col(i).normalized();
    CHECK(std::abs(std::abs(e.dot(s.eta.col(i))) - 1.0) < 1e-5);
  }
}

TEST_CASE("splitting is not hyperbolic at eps = 0") {
  ModelParams p;
  p.epsilon = 0.0;
  CHECK_THROWS_AS(asymptotic_splitting(0.0, p), Error);
}

TEST_CASE("mapped mesh") {
  const std::vector<MeshFocus> foci{{5.0, 1.0, 50.0}};
  const auto x = mapped_mesh(0.0, 20.0, 401, foci);
  REQUIRE(x.size() == 401);
  CHECK(x.front() == 0.0);
  CHECK(x.back() == 20.0);
  double hmin = 1e9, hmax = 0.0, at_focus = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    CHECK(h > 0.0);
    hmin = std::min(hmin, h);
    hmax = std::max(hmax, h);
    if (x[i] <= 5.0 && x[i + 1] > 5.0) at_focus = h;
  }
  CHECK(hmax / hmin > 20.0);
  CHECK(at_focus == doctest::Approx(hmin).epsilon(0.05));
  CHECK(mapped_spacing(5.0, 0.0, 20.0, 401, foci) == doctest::Approx(at_focus).epsilon(0.05));
  CHECK(locate_interval(x, 5.0) < x.size() - 1);
  CHECK(locate_interval(x, -1.0) == 0);
  CHECK(locate_interval(x, 25.0) == x.size() - 2);
}

TEST_CASE("error names") {
  CHECK(errc_name(Errc::newton_diverged) == "NewtonDiverged");
  const Error e(Errc::cfl_violation, "dt");
  CHECK(e.name() == "CFLViolation");
  CHECK(std::string(e.what()) == "dt");
}
