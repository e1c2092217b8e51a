#include "maslov/pulse.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/mesh.hpp"
#include "maslov/model.hpp"

namespace maslov {

namespace {

// Front refinement: a narrow strong bump for the layer and a wide weak one for
// the exponential approach to the slow manifolds.
constexpr double kNarrowWidth = 3.0;
constexpr double kNarrowAmp = 250.0;
constexpr double kWideWidth = 40.0;
constexpr double kWideAmp = 20.0;
constexpr double kTargetFrontSpacing = 0.01;

std::vector<MeshFocus> front_foci(double center) {
  return {{center, kNarrowWidth, kNarrowAmp}, {center, kWideWidth, kWideAmp}};
}

struct HalfSolution {
  std::vector<double> grid;
  std::vector<Vec6> values;
  std::vector<Vec6> derivs;
};

Vec6 hermite(const std::vector<double>& grid, const std::vector<Vec6>& y,
             const std::vector<Vec6>& f, double x, bool derivative) {
  const std::size_t i = locate_interval(grid, x);
  const double h = grid[i + 1] - grid[i];
  const double t = (x - grid[i]) / h;
  if (!derivative) {
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y[i] + h10 * h * f[i] + h01 * y[i + 1] + h11 * h * f[i + 1];
  }
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h, d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h, d11 = 3 * t2 - 2 * t;
  return d00 * y[i] + d10 * f[i] + d01 * y[i + 1] + d11 * f[i + 1];
}

Vec6 half_value(const HalfSolution& s, double xi) {
  xi = std::clamp(xi, s.grid.front(), s.grid.back());
  return hermite(s.grid, s.values, s.derivs, xi, false);
}

double back_front_position(const HalfSolution& s) {
  for (std::size_t i = 0; i + 1 < s.grid.size(); ++i) {
    const double a = s.values[i][0], b = s.values[i + 1][0];
    if (a >= 0.0 && b < 0.0) {
      double lo = s.grid[i], hi = s.grid[i + 1];
      for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hermite(s.grid, s.values, s.derivs, mid, false)[0] >= 0.0) lo = mid; else hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  throw Error(Errc::newton_diverged, "solution has no U = 0 crossing on the back");
}

int half_nodes_for(double length, double focus, int requested_total) {
  if (requested_total > 0) return (requested_total + 1) / 2;
  // with two nodes the mapped spacing at the focus is the whole mapped extent
  // divided by the peak density, so it scales as 1 / (n - 1)
  const double single = mapped_spacing(focus, 0.0, length, 2, front_foci(focus));
  return std::max(201, static_cast<int>(std::ceil(single / kTargetFrontSpacing)) + 1);
}

class CollocationSolver {
 public:
  CollocationSolver(const ModelParams& params, std::vector<double> grid)
      : p_(params), grid_(std::move(grid)), n_(static_cast<int>(grid_.size())) {
    set_gamma(params.gamma);
  }

  // Frees gamma and adds the phase condition U(xi) = 0 on the cubic interpolant.
  void pin(double xi) {
    pin_ = static_cast<int>(locate_interval(grid_, xi));
    const auto i = static_cast<std::size_t>(pin_);
    const double h = grid_[i + 1] - grid_[i];
    const double t = (xi - grid_[i]) / h, t2 = t * t, t3 = t2 * t;
    // U' = P, so the interpolated U is linear in the unknowns
    pin_weights_ = {2 * t3 - 3 * t2 + 1, h * (t3 - 2 * t2 + t), -2 * t3 + 3 * t2, h * (t3 - t2)};
  }
  double gamma() const { return p_.gamma; }

  // Damped Newton from `y`; returns iterations used. Throws on failure.
  int solve(std::vector<Vec6>& y, double tol, int max_iter, double& residual) {
    const int dim = 6 * n_ + (pin_ >= 0 ? 1 : 0);
    Eigen::VectorXd x(dim);
    for (int i = 0; i < n_; ++i) x.segment<6>(6 * i) = y[static_cast<std::size_t>(i)];
    if (pin_ >= 0) x[dim - 1] = p_.gamma;

    Eigen::VectorXd F(dim);
    Eigen::SparseMatrix<double> J(dim, dim);
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;

    assemble(x, F, &J);
    double res = F.lpNorm<Eigen::Infinity>();
    int it = 0;
    for (; it < max_iter; ++it) {
      if (1.5 * res < tol) break;
      if (!analyzed) {
        lu.analyzePattern(J);
        analyzed = true;
      }
      lu.factorize(J);
      if (lu.info() != Eigen::Success) {
        residual = 1.5 * res;
        throw Error(Errc::newton_diverged, "singular collocation Jacobian");
      }
      const Eigen::VectorXd dx = lu.solve(-F);
      const double dx_norm = dx.norm();
      // natural monotonicity test: the simplified Newton correction at the
      // trial point, computed with the old Jacobian, must shrink
      double lambda = 1.0;
      Eigen::VectorXd xt(dim), Ft(dim);
      bool accepted = false;
      for (int ls = 0; ls < 12; ++ls) {
        xt = x + lambda * dx;
        assemble(xt, Ft, nullptr);
        if (Ft.allFinite()) {
          const double bar = lu.solve(-Ft).norm();
          if (bar <= (1.0 - 0.25 * lambda) * dx_norm || bar < 1e-13 * (1.0 + xt.norm())) {
            accepted = true;
            break;
          }
        }
        lambda *= 0.5;
      }
      if (!accepted) {
        // stagnation: a full step that no longer decreases the merit
        residual = 1.5 * res;
        if (1.5 * res < 1e-10 && dx.lpNorm<Eigen::Infinity>() < 1e-9) break;
        std::ostringstream msg;
        msg << "Newton stagnated at residual " << residual;
        throw Error(residual < 1e-8 ? Errc::mesh_too_coarse : Errc::newton_diverged, msg.str());
      }
      x = xt;
      assemble(x, F, &J);
      res = F.lpNorm<Eigen::Infinity>();
      if (!std::isfinite(res)) throw Error(Errc::newton_diverged, "Newton iterate blew up");
    }
    residual = 1.5 * res;
    if (!(residual < std::max(tol, 1e-10))) {
      std::ostringstream msg;
      msg << "Newton did not converge in " << max_iter << " iterations, residual " << residual;
      throw Error(residual < 1e-8 ? Errc::mesh_too_coarse : Errc::newton_diverged, msg.str());
    }
    for (int i = 0; i < n_; ++i) y[static_cast<std::size_t>(i)] = x.segment<6>(6 * i);
    if (pin_ >= 0) set_gamma(x[dim - 1]);
    return it;
  }

 private:
  void set_gamma(double gamma) {
    p_.gamma = gamma;
    rest_ = fixed_point(p_);
    const EigenSplitting split = asymptotic_splitting(0.0, p_);
    proj_ = split.unstable_projector() * ordering_permutation();
  }

  void assemble(const Eigen::VectorXd& x, Eigen::VectorXd& F, Eigen::SparseMatrix<double>* J) {
    if (pin_ < 0) {
      assemble_orbit(x, F, J);
      return;
    }
    const int last = 6 * n_;
    const double gamma = p_.gamma;
    set_gamma(x[last]);
    std::vector<Eigen::Triplet<double>> trip;
    assemble_rows(x, F, J ? &trip : nullptr);
    const int c0 = 6 * pin_;
    F[last] = pin_weights_[0] * x[c0] + pin_weights_[1] * x[c0 + 1] + pin_weights_[2] * x[c0 + 6] +
              pin_weights_[3] * x[c0 + 7];
    if (J) {
      // gamma enters every row and the rest state; difference it
      const double d = 1e-7 * std::max(1.0, std::abs(x[last]));
      Eigen::VectorXd Fd(F.size());
      set_gamma(x[last] + d);
      assemble_rows(x, Fd, nullptr);
      for (int r = 0; r < last; ++r) {
        const double v = (Fd[r] - F[r]) / d;
        if (v != 0.0) trip.emplace_back(r, last, v);
      }
      for (int k = 0; k < 4; ++k) trip.emplace_back(last, c0 + (k / 2) * 6 + k % 2, pin_weights_[k]);
      J->setFromTriplets(trip.begin(), trip.end());
    }
    set_gamma(gamma);
  }

  void assemble_orbit(const Eigen::VectorXd& x, Eigen::VectorXd& F,
                      Eigen::SparseMatrix<double>* J) const {
    std::vector<Eigen::Triplet<double>> trip;
    assemble_rows(x, F, J ? &trip : nullptr);
    if (J) J->setFromTriplets(trip.begin(), trip.end());
  }

  void assemble_rows(const Eigen::VectorXd& x, Eigen::VectorXd& F,
                     std::vector<Eigen::Triplet<double>>* J) const {
    const Mat6 I = Mat6::Identity();
    std::vector<Vec6> f(static_cast<std::size_t>(n_));
    std::vector<Mat6> jac(J ? static_cast<std::size_t>(n_) : 0);
    for (int i = 0; i < n_; ++i) {
      const PhasePoint pt(Vec6(x.segment<6>(6 * i)));
      f[static_cast<std::size_t>(i)] = vector_field(pt, p_);
      if (J) jac[static_cast<std::size_t>(i)] = vector_field_jacobian(pt, p_);
    }
    std::vector<Eigen::Triplet<double>>& trip = J ? *J : scratch_;
    if (J) trip.reserve(static_cast<std::size_t>(72 * n_ + 24 + 6 * n_));

    // symmetry at xi = 0: P = Q = R = 0
    for (int k = 0; k < 3; ++k) {
      F[k] = x[2 * k + 1];
      if (J) trip.emplace_back(k, 2 * k + 1, 1.0);
    }
    for (int i = 0; i + 1 < n_; ++i) {
      const auto si = static_cast<std::size_t>(i);
      const double h = grid_[si + 1] - grid_[si];
      const Vec6 yi = x.segment<6>(6 * i), yj = x.segment<6>(6 * i + 6);
      const Vec6 ym = 0.5 * (yi + yj) + h / 8.0 * (f[si] - f[si + 1]);
      const PhasePoint pm(ym);
      const Vec6 fm = vector_field(pm, p_);
      const int row = 3 + 6 * i;
      F.segment<6>(row) = (yj - yi - h / 6.0 * (f[si] + 4.0 * fm + f[si + 1])) / h;
      if (J) {
        const Mat6 Jm = vector_field_jacobian(pm, p_);
        const Mat6 Ai = (-I - h / 6.0 * (jac[si] + 4.0 * Jm * (0.5 * I + h / 8.0 * jac[si]))) / h;
        const Mat6 Aj = (I - h / 6.0 * (jac[si + 1] + 4.0 * Jm * (0.5 * I - h / 8.0 * jac[si + 1]))) / h;
        for (int r = 0; r < 6; ++r)
          for (int c = 0; c < 6; ++c) {
            trip.emplace_back(row + r, 6 * i + c, Ai(r, c));
            trip.emplace_back(row + r, 6 * i + 6 + c, Aj(r, c));
          }
      }
    }
    // no component of y(L) - X^- along the unstable directions
    const int last = 6 * (n_ - 1);
    const int row = 3 + 6 * (n_ - 1);
    F.segment<3>(row) = proj_ * (Vec6(x.segment<6>(last)) - rest_.y);
    if (J) {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 6; ++c) trip.emplace_back(row + r, last + c, proj_(r, c));
    }
  }

  ModelParams p_;
  int pin_ = -1;
  std::array<double, 4> pin_weights_{};
  mutable std::vector<Eigen::Triplet<double>> scratch_;
  std::vector<double> grid_;
  int n_;
  PhasePoint rest_;
  Eigen::Matrix<double, 3, 6> proj_;
};

HalfSolution solve_half(const ModelParams& params, double length, double focus, int half_nodes,
                        const std::function<Vec6(double)>& guess, const PulseOptions& opt,
                        PulseStats& stats) {
  HalfSolution s;
  s.grid = mapped_mesh(0.0, length, half_nodes, front_foci(focus));
  s.values.resize(s.grid.size());
  for (std::size_t i = 0; i < s.grid.size(); ++i) s.values[i] = guess(s.grid[i]);
  CollocationSolver solver(params, s.grid);
  double residual = 0.0;
  stats.newton_iterations +=
      solver.solve(s.values, opt.newton_tolerance, opt.max_newton_iterations, residual);
  stats.residual = residual;
  s.derivs.resize(s.grid.size());
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    s.derivs[i] = vector_field(PhasePoint(s.values[i]), params);
  return s;
}

// Solve on a mesh focused at the guessed back front, then re-focus the mesh on
// the actual front if it moved.
HalfSolution solve_with_remesh(const ModelParams& params, double length, int requested_nodes,
                               double focus, std::function<Vec6(double)> guess,
                               const PulseOptions& opt, PulseStats& stats) {
  HalfSolution s = solve_half(params, length, focus, half_nodes_for(length, focus, requested_nodes),
                              guess, opt, stats);
  for (int pass = 0; pass < opt.remesh_passes; ++pass) {
    const double actual = back_front_position(s);
    if (std::abs(actual - focus) <= 2.0) break;
    focus = actual;
    const HalfSolution prev = s;
    s = solve_half(params, length, focus, half_nodes_for(length, focus, requested_nodes),
                   [&prev](double xi) { return half_value(prev, xi); }, opt, stats);
    ++stats.remeshes;
  }
  return s;
}

// Newton moves a front by about one front width per damped step, so a large
// O(eps) shift of the front away from x*/eps stalls it. Instead pin the back
// front at a mesh node with gamma free, then move the pin by secant steps until
// the pinned gamma matches the actual one.
HalfSolution front_search(const ModelParams& params, double length, int requested_nodes,
                          double focus, const std::function<Vec6(double)>& guess,
                          const PulseOptions& opt, PulseStats& stats) {
  auto pinned = [&](double front, const std::function<Vec6(double)>& g, double gamma0,
                    HalfSolution& out) {
    out.grid = mapped_mesh(0.0, length, half_nodes_for(length, front, requested_nodes),
                           front_foci(front));
    out.values.resize(out.grid.size());
    for (std::size_t i = 0; i < out.grid.size(); ++i) out.values[i] = g(out.grid[i]);
    ModelParams pg = params;
    pg.gamma = gamma0;
    CollocationSolver solver(pg, out.grid);
    solver.pin(front);
    ++stats.front_search_steps;
    double residual = 0.0;
    stats.newton_iterations +=
        solver.solve(out.values, opt.newton_tolerance, opt.max_newton_iterations, residual);
    stats.residual = residual;
    pg.gamma = solver.gamma();
    out.derivs.resize(out.grid.size());
    for (std::size_t i = 0; i < out.grid.size(); ++i)
      out.derivs[i] = vector_field(PhasePoint(out.values[i]), pg);
    return pg.gamma - params.gamma;
  };
  auto shifted = [](const HalfSolution& prev, double from, double to) {
    return [&prev, from, to](double xi) {
      Vec6 y = half_value(prev, xi);
      const Vec6 fast = half_value(prev, xi - to + from);
      y[0] = fast[0];
      y[1] = fast[1];
      return y;
    };
  };

  HalfSolution a, b;
  double xa = focus, xb = focus + 2.0;
  double ga = pinned(xa, guess, params.gamma, a);
  double gb = pinned(xb, shifted(a, xa, xb), params.gamma + ga, b);
  const double tol = 1e-11 * std::max(1.0, std::abs(params.gamma));
  for (int it = 0; it < 40; ++it) {
    if (std::abs(gb) < tol) return b;
    if (!(std::abs(gb - ga) > 0.0)) break;
    const double step = std::clamp(-gb * (xb - xa) / (gb - ga), -20.0, 20.0);
    const double xc = std::clamp(xb + step, 1.0, length - 20.0);
    HalfSolution c;
    const double gc = pinned(xc, shifted(b, xb, xc), params.gamma + gb, c);
    a = std::move(b);
    xa = xb;
    ga = gb;
    b = std::move(c);
    xb = xc;
    gb = gc;
  }
  throw Error(Errc::newton_diverged, "front search did not settle");
}

}  // namespace

double default_half_width(const ModelParams& params, double x_star) {
  const double tail = (x_star + params.dd * std::log(1e7)) / params.epsilon;
  return std::max(2.0 * x_star / params.epsilon + 40.0, tail);
}

PulseProfile solve_pulse(const ModelParams& params, const JumpSolution& jump,
                         const PulseOptions& options) {
  params.validate();
  if (!(jump.x_star > 0.0)) throw Error(Errc::domain_error, "x* must be positive");
  const double eps = params.epsilon;
  const double length = options.half_width > 0.0 ? options.half_width
                                                 : default_half_width(params, jump.x_star);
  if (length < 2.0 * jump.x_star / eps + 10.0) {
    std::ostringstream msg;
    msg << "half width " << length << " is below 2x*/eps + 10 = " << 2.0 * jump.x_star / eps + 10.0;
    throw Error(Errc::domain_error, msg.str());
  }
  const double focus0 = jump.x_star / eps;
  if (options.nodes > 0) {
    const int half = (options.nodes + 1) / 2;
    const double h = mapped_spacing(focus0, 0.0, length, half, front_foci(focus0));
    if (h > 1.0 / 12.0) {
      std::ostringstream msg;
      msg << options.nodes << " nodes give spacing " << h << " at the fronts; need <= 1/12";
      throw Error(Errc::mesh_too_coarse, msg.str());
    }
  }

  PulseStats stats;
  HalfSolution half;
  const SingularOrbit orbit(params, jump);
  const auto singular_guess = [&](double xi) { return orbit.half_pulse_guess(xi, eps, focus0).y; };
  std::optional<Error> direct;
  try {
    half = solve_with_remesh(params, length, options.nodes, focus0, singular_guess, options, stats);
  } catch (const Error& e) {
    direct = e;
  }
  if (direct) {
    try {
      half = front_search(params, length, options.nodes, focus0, singular_guess, options, stats);
      direct.reset();
    } catch (const Error&) {
    }
  }
  if (direct) {
    if (options.continuation_start <= eps) throw *direct;
    // geometric continuation from a larger eps, where the fronts are wider
    std::vector<double> path;
    const int steps = std::max(2, static_cast<int>(std::ceil(std::log(options.continuation_start / eps) /
                                                             std::log(1.25))));
    for (int k = 0; k <= steps; ++k)
      path.push_back(options.continuation_start * std::pow(eps / options.continuation_start,
                                                           static_cast<double>(k) / steps));
    HalfSolution prev;
    double prev_eps = 0.0, prev_focus = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      ModelParams pk = params;
      pk.epsilon = path[k];
      const double lk = k + 1 == path.size() ? length : default_half_width(pk, jump.x_star);
      double focus = jump.x_star / path[k];
      std::function<Vec6(double)> guess;
      if (k == 0) {
        const SingularOrbit ok(pk, jump);
        guess = [ok, pk, focus](double xi) { return ok.half_pulse_guess(xi, pk.epsilon, focus).y; };
      } else {
        focus = prev_focus * prev_eps / path[k];
        const double scale = path[k] / prev_eps;
        guess = [&prev, scale, focus, prev_focus](double xi) {
          Vec6 y = half_value(prev, xi * scale);
          const Vec6 fast = half_value(prev, xi - focus + prev_focus);
          y[0] = fast[0];
          y[1] = fast[1];
          return y;
        };
      }
      try {
        HalfSolution next = solve_with_remesh(pk, lk, k + 1 == path.size() ? options.nodes : 0,
                                              focus, guess, options, stats);
        prev = std::move(next);
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "continuation failed at eps = " << path[k] << " (" << e.what()
            << "); direct solve: " << direct->what();
        throw Error(e.code(), msg.str());
      }
      prev_eps = path[k];
      prev_focus = back_front_position(prev);
      ++stats.continuation_steps;
    }
    half = std::move(prev);
  }

  // mirror through the reversor
  const std::size_t m = half.grid.size();
  std::vector<double> grid(2 * m - 1);
  std::vector<Vec6> values(2 * m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    grid[m - 1 + i] = half.grid[i];
    values[m - 1 + i] = half.values[i];
    grid[m - 1 - i] = -half.grid[i];
    values[m - 1 - i] = PhasePoint(half.values[i]).reflected().y;
  }
  grid[m - 1] = 0.0;
  values[m - 1][1] = values[m - 1][3] = values[m - 1][5] = 0.0;

  const double focus = back_front_position(half);
  stats.front_spacing = mapped_spacing(focus, 0.0, length, static_cast<int>(m), front_foci(focus));
  PulseProfile profile(params, jump, std::move(grid), std::move(values), stats);

  // defect of the cubic interpolant away from the collocation points
  double defect = 0.0;
  const auto& g = profile.grid();
  for (std::size_t i = m - 1; i + 1 < g.size(); ++i) {
    for (double t : {0.25, 0.75}) {
      const double xi = g[i] + t * (g[i + 1] - g[i]);
      const Vec6 d = profile.derivative(xi) - vector_field(profile.value(xi), params);
      defect = std::max(defect, d.lpNorm<Eigen::Infinity>());
    }
  }
  profile.stats().max_defect = defect;
  profile.stats().endpoint_error = (profile.values().back() - profile.rest_state().y).lpNorm<Eigen::Infinity>();
  return profile;
}

PulseProfile::PulseProfile(ModelParams params, JumpSolution jump, std::vector<double> grid,
                           std::vector<Vec6> values, PulseStats stats)
    : params_(params), jump_(jump), grid_(std::move(grid)), values_(std::move(values)),
      stats_(stats) {
  if (grid_.size() < 3 || grid_.size() != values_.size())
    throw Error(Errc::domain_error, "profile needs matching grid and values with >= 3 nodes");
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
    if (!(grid_[i + 1] > grid_[i])) throw Error(Errc::domain_error, "profile grid not increasing");
  derivs_.resize(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i)
    derivs_[i] = vector_field(PhasePoint(values_[i]), params_);
  mid_ = static_cast<std::size_t>(
      std::min_element(grid_.begin(), grid_.end(),
                       [](double a, double b) { return std::abs(a) < std::abs(b); }) -
      grid_.begin());
  rest_ = fixed_point(params_);
}

PhasePoint PulseProfile::value(double xi) const {
  return PhasePoint(evaluate_profile(*this, xi, ProfileOrder::value));
}

Vec6 PulseProfile::derivative(double xi) const {
  return evaluate_profile(*this, xi, ProfileOrder::derivative);
}

double PulseProfile::u_at(double xi) const { return value(xi).U(); }

PhasePoint PulseProfile::value_extended(double xi) const {
  if (xi <= grid_.front() || xi >= grid_.back()) return rest_;
  return value(xi);
}

double PulseProfile::locate_u_zero(double a, double b) const {
  double ua = u_at(a);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (a + b);
    const double um = u_at(mid);
    if (std::abs(um) < 1e-10 && b - a < 1e-12 * std::max(1.0, std::abs(mid))) return mid;
    if ((um > 0.0) == (ua > 0.0)) {
      a = mid;
      ua = um;
    } else {
      b = mid;
    }
    if (b - a <= 4e-16 * std::max(1.0, std::abs(mid))) break;
  }
  return 0.5 * (a + b);
}

double PulseProfile::front_crossing() const {
  for (std::size_t i = mid_; i > 0; --i)
    if (values_[i - 1][0] < 0.0 && values_[i][0] >= 0.0) return locate_u_zero(grid_[i - 1], grid_[i]);
  throw Error(Errc::domain_error, "profile has no U = 0 crossing on the front");
}

double PulseProfile::back_crossing() const {
  for (std::size_t i = mid_; i + 1 < grid_.size(); ++i)
    if (values_[i][0] >= 0.0 && values_[i + 1][0] < 0.0) return locate_u_zero(grid_[i], grid_[i + 1]);
  throw Error(Errc::domain_error, "profile has no U = 0 crossing on the back");
}

int PulseProfile::u_zero_count() const {
  int count = 0;
  int last = 0;
  for (const auto& v : values_) {
    const int s = (v[0] > 0.0) - (v[0] < 0.0);
    if (s != 0 && last != 0 && s != last) ++count;
    if (s != 0) last = s;
  }
  return count;
}

Vec6 evaluate_profile(const PulseProfile& profile, double xi, ProfileOrder order) {
  const auto& g = profile.grid();
  const double slack = 1e-12 * std::max(1.0, g.back());
  if (!(xi >= g.front() - slack && xi <= g.back() + slack)) {
    std::ostringstream msg;
    msg << "xi = " << xi << " outside [" << g.front() << ", " << g.back() << "]";
    throw Error(Errc::domain_error, msg.str());
  }
  xi = std::clamp(xi, g.front(), g.back());
  return hermite(g, profile.values(), profile.derivatives(), xi, order == ProfileOrder::derivative);
}

double reversibility_error(const PulseProfile& profile) {
  const auto& v = profile.values();
  const std::size_t n = v.size();
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    err = std::max(err, (v[i] - PhasePoint(v[n - 1 - i]).reflected().y).lpNorm<Eigen::Infinity>());
  return err;
}

double skeleton_distance(const PulseProfile& profile) {
  const double r2 = std::sqrt(2.0);
  auto arc = [r2](double u, double sign) { return std::array<double, 2>{u, sign * (1.0 - u * u) / r2}; };
  auto to_arc = [&](double u, double p, double sign) {
    auto d = [&](double s) {
      const auto a = arc(s, sign);
      return std::hypot(u - a[0], p - a[1]);
    };
    constexpr int kSamples = 200;
    int best = 0;
    for (int i = 1; i <= kSamples; ++i)
      if (d(-1.0 + 2.0 * i / kSamples) < d(-1.0 + 2.0 * best / kSamples)) best = i;
    double lo = std::max(-1.0, -1.0 + 2.0 * (best - 1) / kSamples);
    double hi = std::min(1.0, -1.0 + 2.0 * (best + 1) / kSamples);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    while (hi - lo > 1e-12) {
      const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
      if (d(a) < d(b)) hi = b; else lo = a;
    }
    return d(0.5 * (lo + hi));
  };

  const auto& v = profile.values();
  double to_skeleton = 0.0;
  for (const Vec6& y : v)
    to_skeleton = std::max(to_skeleton, std::min(to_arc(y[0], y[1], 1.0), to_arc(y[0], y[1], -1.0)));

  // skeleton to the profile polyline
  double to_profile = 0.0;
  constexpr int kArcSamples = 1000;
  for (double sign : {1.0, -1.0})
    for (int k = 0; k <= kArcSamples; ++k) {
      const auto a = arc(-1.0 + 2.0 * k / kArcSamples, sign);
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double ex = v[i + 1][0] - v[i][0], ey = v[i + 1][1] - v[i][1];
        const double len2 = ex * ex + ey * ey;
        double t = len2 > 0.0 ? ((a[0] - v[i][0]) * ex + (a[1] - v[i][1]) * ey) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::hypot(a[0] - v[i][0] - t * ex, a[1] - v[i][1] - t * ey));
      }
      to_profile = std::max(to_profile, best);
    }
  return std::max(to_skeleton, to_profile);
}

}  // namespace maslov
