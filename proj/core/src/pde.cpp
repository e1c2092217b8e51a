#include "maslov/pde.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/mesh.hpp"
#include "maslov/model.hpp"
#include "maslov/spectrum.hpp"

namespace maslov {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Three-point second difference with mirrored ghost nodes at both ends.
SpMat neumann_laplacian(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(3 * n));
  for (int j = 0; j < n; ++j) {
    if (j == 0) {
      const double h = x[1] - x[0];
      t.emplace_back(0, 0, -2.0 / (h * h));
      t.emplace_back(0, 1, 2.0 / (h * h));
    } else if (j == n - 1) {
      const double h = x[j] - x[j - 1];
      t.emplace_back(j, j, -2.0 / (h * h));
      t.emplace_back(j, j - 1, 2.0 / (h * h));
    } else {
      const double hl = x[j] - x[j - 1], hr = x[j + 1] - x[j];
      const double wl = 2.0 / (hl * (hl + hr)), wr = 2.0 / (hr * (hl + hr));
      t.emplace_back(j, j - 1, wl);
      t.emplace_back(j, j, -wl - wr);
      t.emplace_back(j, j + 1, wr);
    }
  }
  SpMat m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double abs_mass(const SimState& s) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    m += 0.5 * (std::abs(s.u[static_cast<Eigen::Index>(i)]) + std::abs(s.u[static_cast<Eigen::Index>(i + 1)])) *
         (s.x[i + 1] - s.x[i]);
  return m;
}

void check_grid(const std::vector<double>& x) {
  if (x.size() < 3) throw Error(Errc::domain_error, "grid needs at least 3 nodes");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i + 1] > x[i])) throw Error(Errc::domain_error, "grid must be strictly increasing");
}

std::vector<double> u_zero_crossings(const std::vector<double>& x, const Eigen::VectorXd& u) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = u[static_cast<Eigen::Index>(i)], b = u[static_cast<Eigen::Index>(i + 1)];
    if ((a < 0.0) != (b < 0.0)) out.push_back(x[i] + (x[i + 1] - x[i]) * a / (a - b));
  }
  return out;
}

double sup_difference(const SimState& s, const PulseProfile& profile, double k) {
  const double eps = s.params.epsilon;
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const PhasePoint p = profile.value_extended((s.x[i] - k) / eps);
    const auto j = static_cast<Eigen::Index>(i);
    d = std::max({d, std::abs(s.u[j] - p.U()), std::abs(s.v[j] - p.V()), std::abs(s.w[j] - p.W())});
  }
  return d;
}

// Derivatives at the nodes from the three-point formula (one-sided at the ends).
Eigen::MatrixX3d node_slopes(const SimState& s) {
  const std::size_t n = s.size();
  Eigen::MatrixX3d f(static_cast<Eigen::Index>(n), 3), d(static_cast<Eigen::Index>(n), 3);
  f.col(0) = s.u;
  f.col(1) = s.v;
  f.col(2) = s.w;
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    if (i == 0) {
      d.row(j) = (f.row(1) - f.row(0)) / (s.x[1] - s.x[0]);
    } else if (i + 1 == n) {
      d.row(j) = (f.row(j) - f.row(j - 1)) / (s.x[i] - s.x[i - 1]);
    } else {
      const double hl = s.x[i] - s.x[i - 1], hr = s.x[i + 1] - s.x[i];
      d.row(j) = (hl * hl * f.row(j + 1) - hr * hr * f.row(j - 1) + (hr * hr - hl * hl) * f.row(j)) /
                 (hl * hr * (hl + hr));
    }
  }
  return d;
}

// Cubic Hermite value of the reference at x; constant beyond the grid.
Eigen::RowVector3d resample(const SimState& ref, const Eigen::MatrixX3d& slopes, double x) {
  auto row = [&](std::size_t i) { return Eigen::RowVector3d(ref.u[static_cast<Eigen::Index>(i)], ref.v[static_cast<Eigen::Index>(i)], ref.w[static_cast<Eigen::Index>(i)]); };
  if (x <= ref.x.front()) return row(0);
  if (x >= ref.x.back()) return row(ref.size() - 1);
  const std::size_t i = locate_interval(ref.x, x);
  const double h = ref.x[i + 1] - ref.x[i], t = (x - ref.x[i]) / h;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
  return h00 * row(i) + h10 * h * slopes.row(static_cast<Eigen::Index>(i)) + h01 * row(i + 1) +
         h11 * h * slopes.row(static_cast<Eigen::Index>(i + 1));
}

// Golden-section minimization of dist(k), bracketed by aligning the first and
// last U = 0 crossings of the state with the reference ones.
template <typename Dist>
DeviationResult shift_search(const SimState& state, double ref_front, double ref_back, Dist dist) {
  const auto cs = u_zero_crossings(state.x, state.u);
  double lo = 0.0, hi = 0.0;
  if (cs.size() >= 2) {
    const double k1 = cs.front() - ref_front, k2 = cs.back() - ref_back;
    const double mid = 0.5 * (k1 + k2), half = 0.05 + std::abs(k1 - k2);
    lo = mid - half;
    hi = mid + half;
  } else {
    const double span = state.x.back() - state.x.front();
    lo = -0.5 * span;
    hi = 0.5 * span;
  }
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = dist(a), fb = dist(b);
  while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = dist(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = dist(b);
    }
  }
  return fa < fb ? DeviationResult{fa, a} : DeviationResult{fb, b};
}

}  // namespace

SimState state_from_profile(const PulseProfile& profile, const std::vector<double>& grid) {
  check_grid(grid);
  SimState s;
  s.params = profile.params();
  s.x = grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  s.u.resize(n);
  s.v.resize(n);
  s.w.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const PhasePoint p = profile.value_extended(grid[static_cast<std::size_t>(i)] / s.params.epsilon);
    s.u[i] = p.U();
    s.v[i] = p.V();
    s.w[i] = p.W();
  }
  return s;
}

SimState rest_state(const ModelParams& params, const std::vector<double>& grid) {
  check_grid(grid);
  SimState s;
  s.params = params;
  s.x = grid;
  const double um = rest_state_u(params);
  const auto n = static_cast<Eigen::Index>(grid.size());
  s.u = Eigen::VectorXd::Constant(n, um);
  s.v = s.u;
  s.w = s.u;
  return s;
}

void add_noise(SimState& state, double amplitude, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-amplitude, amplitude);
  for (Eigen::VectorXd* f : {&state.u, &state.v, &state.w})
    for (Eigen::Index i = 0; i < f->size(); ++i) (*f)[i] += dist(rng);
}

void add_mode(SimState& state, const Eigenfunction& mode, double amplitude) {
  if (mode.x.size() < 2) throw Error(Errc::domain_error, "empty eigenfunction");
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double x = state.x[i];
    if (x < mode.x.front() || x > mode.x.back()) continue;
    const std::size_t k = locate_interval(mode.x, x);
    const double s = (x - mode.x[k]) / (mode.x[k + 1] - mode.x[k]);
    const Eigen::RowVector3d val = (1.0 - s) * mode.values.row(static_cast<Eigen::Index>(k)) +
                                   s * mode.values.row(static_cast<Eigen::Index>(k + 1));
    const auto j = static_cast<Eigen::Index>(i);
    state.u[j] += amplitude * val[0];
    state.v[j] += amplitude * val[1];
    state.w[j] += amplitude * val[2];
  }
}

double max_stable_dt(const SimState& state) {
  const double stiff = (1.0 - 3.0 * state.u.array().square()).abs().maxCoeff();
  return stiff > 0.0 ? 0.2 / stiff : std::numeric_limits<double>::infinity();
}

std::vector<SimState> evolve(const SimState& initial, double t_final, double dt, const EvolveOptions& options) {
  check_grid(initial.x);
  initial.params.validate();
  if (!(dt > 0.0)) throw Error(Errc::domain_error, "time step must be positive");
  if (!(t_final >= initial.t)) throw Error(Errc::domain_error, "final time precedes the initial time");
  const ModelParams& p = initial.params;
  const double span = t_final - initial.t;
  const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / dt - 1e-9)) : 0;
  const double h = steps > 0 ? span / static_cast<double>(steps) : dt;

  const SpMat lap = neumann_laplacian(initial.x);
  const auto n = static_cast<Eigen::Index>(initial.size());
  SpMat id(n, n);
  id.setIdentity();
  const double coef[3] = {p.epsilon * p.epsilon, 1.0 / p.tau, p.dd * p.dd / p.theta};
  Eigen::SparseLU<SpMat> solver[3];
  for (int c = 0; c < 3; ++c) {
    solver[c].compute(SpMat(id - (h * coef[c]) * lap));
    if (solver[c].info() != Eigen::Success) throw Error(Errc::domain_error, "diffusion system is singular");
  }

  const double mass0 = abs_mass(initial);
  std::vector<SimState> out{initial};
  SimState s = initial;
  double next_snapshot = options.snapshot_interval > 0.0 ? initial.t + options.snapshot_interval : t_final;
  for (long k = 1; k <= steps; ++k) {
    const double limit = max_stable_dt(s);
    if (h > limit) {
      std::ostringstream msg;
      msg << "dt = " << h << " exceeds the reaction limit " << limit << " at t = " << s.t;
      throw Error(Errc::cfl_violation, msg.str());
    }
    const Eigen::ArrayXd u = s.u.array();
    const Eigen::VectorXd fu = (u - u.cube() - p.epsilon * (p.alpha * s.v.array() + p.beta * s.w.array() + p.gamma)).matrix();
    const Eigen::VectorXd fv = ((s.u - s.v) / p.tau);
    const Eigen::VectorXd fw = ((s.u - s.w) / p.theta);
    // right-hand sides are formed before the solves write into the same fields
    const Eigen::VectorXd ru = s.u + h * fu, rv = s.v + h * fv, rw = s.w + h * fw;
    s.u = solver[0].solve(ru);
    s.v = solver[1].solve(rv);
    s.w = solver[2].solve(rw);
    s.t = initial.t + h * static_cast<double>(k);
    if (!s.u.allFinite() || !s.v.allFinite() || !s.w.allFinite() || s.sup_u() > options.blowup_limit ||
        abs_mass(s) > 2.0 * mass0) {
      std::ostringstream msg;
      msg << "solution left the admissible range at t = " << s.t;
      throw Error(Errc::blowup, msg.str());
    }
    if (k == steps) {
      out.push_back(s);
    } else if (s.t >= next_snapshot - 0.5 * h) {
      out.push_back(s);
      next_snapshot += options.snapshot_interval;
    }
  }
  return out;
}

DeviationResult deviation(const SimState& state, const PulseProfile& profile) {
  const double eps = state.params.epsilon;
  return shift_search(state, eps * profile.front_crossing(), eps * profile.back_crossing(),
                      [&](double k) { return sup_difference(state, profile, k); });
}

DeviationResult deviation(const SimState& state, const SimState& reference) {
  const auto cr = u_zero_crossings(reference.x, reference.u);
  const double front = cr.empty() ? 0.0 : cr.front(), back = cr.empty() ? 0.0 : cr.back();
  const Eigen::MatrixX3d slopes = node_slopes(reference);
  return shift_search(state, front, back, [&](double k) {
    double d = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      const Eigen::RowVector3d r = resample(reference, slopes, state.x[i] - k);
      const auto j = static_cast<Eigen::Index>(i);
      d = std::max({d, std::abs(state.u[j] - r[0]), std::abs(state.v[j] - r[1]), std::abs(state.w[j] - r[2])});
    }
    return d;
  });
}

SimState discrete_equilibrium(const PulseProfile& profile, const std::vector<double>& grid) {
  SimState s = state_from_profile(profile, grid);
  const ModelParams& p = s.params;
  const SpMat lap = neumann_laplacian(grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double eps = p.epsilon;
  const double coef[3] = {eps * eps, 1.0, p.dd * p.dd};
  auto residual = [&](const SimState& st) {
    Eigen::VectorXd f(3 * n);
    const Eigen::VectorXd lu = lap * st.u, lv = lap * st.v, lw = lap * st.w;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double u = st.u[i];
      f[3 * i] = coef[0] * lu[i] + u - u * u * u - eps * (p.alpha * st.v[i] + p.beta * st.w[i] + p.gamma);
      f[3 * i + 1] = coef[1] * lv[i] + u - st.v[i];
      f[3 * i + 2] = coef[2] * lw[i] + u - st.w[i];
    }
    return f;
  };
  Eigen::VectorXd f = residual(s);
  for (int it = 0; it < 40; ++it) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(13 * n));
    for (int k = 0; k < lap.outerSize(); ++k)
      for (SpMat::InnerIterator e(lap, k); e; ++e)
        for (int c = 0; c < 3; ++c)
          t.emplace_back(3 * static_cast<int>(e.row()) + c, 3 * static_cast<int>(e.col()) + c, coef[c] * e.value());
    for (Eigen::Index i = 0; i < n; ++i) {
      const int r = 3 * static_cast<int>(i);
      t.emplace_back(r, r, 1.0 - 3.0 * s.u[i] * s.u[i]);
      t.emplace_back(r, r + 1, -eps * p.alpha);
      t.emplace_back(r, r + 2, -eps * p.beta);
      t.emplace_back(r + 1, r, 1.0);
      t.emplace_back(r + 1, r + 1, -1.0);
      t.emplace_back(r + 2, r, 1.0);
      t.emplace_back(r + 2, r + 2, -1.0);
    }
    SpMat jac(3 * n, 3 * n);
    jac.setFromTriplets(t.begin(), t.end());
    Eigen::SparseLU<SpMat> lu(jac);
    if (lu.info() != Eigen::Success) throw Error(Errc::newton_diverged, "singular Jacobian for the discrete steady state");
    const Eigen::VectorXd step = lu.solve(f);
    for (Eigen::Index i = 0; i < n; ++i) {
      s.u[i] -= step[3 * i];
      s.v[i] -= step[3 * i + 1];
      s.w[i] -= step[3 * i + 2];
    }
    f = residual(s);
    // rounding in D^2 / h^2 floors the residual near 1e-7 and, through the
    // nearly neutral translation mode, the step near 1e-9
    if (step.cwiseAbs().maxCoeff() < 1e-8) return s;
  }
  std::ostringstream msg;
  msg << "discrete steady state did not converge, residual " << f.cwiseAbs().maxCoeff();
  throw Error(Errc::newton_diverged, msg.str());
}

template <typename Ref>
DeviationSeries series_against(const std::vector<SimState>& snapshots, const Ref& reference) {
  DeviationSeries s;
  for (const SimState& st : snapshots) {
    const DeviationResult d = deviation(st, reference);
    s.t.push_back(st.t);
    s.value.push_back(d.value);
    s.shift.push_back(d.shift);
  }
  return s;
}

DeviationSeries deviation_series(const std::vector<SimState>& snapshots, const PulseProfile& profile) {
  return series_against(snapshots, profile);
}

DeviationSeries deviation_series(const std::vector<SimState>& snapshots, const SimState& reference) {
  return series_against(snapshots, reference);
}

double growth_rate(const DeviationSeries& series, double t0, double t1) {
  double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    const double t = series.t[i];
    if (t < t0 - 1e-9 || t > t1 + 1e-9 || !(series.value[i] > 0.0)) continue;
    const double y = std::log(series.value[i]);
    n += 1.0;
    st += t;
    sy += y;
    stt += t * t;
    sty += t * y;
  }
  const double den = n * stt - st * st;
  if (n < 2.0 || den <= 0.0) throw Error(Errc::domain_error, "growth-rate window holds fewer than two samples");
  return (n * sty - st * sy) / den;
}

std::vector<double> pde_grid(const PulseProfile& profile, int nodes, double half_width) {
  const double eps = profile.params().epsilon;
  const double lx = half_width > 0.0 ? half_width : eps * profile.half_width();
  return spectrum_grid(lx, nodes, -eps * profile.front_crossing(), eps);
}

}  // namespace maslov
