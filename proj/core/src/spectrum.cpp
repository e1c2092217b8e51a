#include "maslov/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "maslov/errors.hpp"
#include "maslov/mesh.hpp"
#include "maslov/model.hpp"

namespace maslov {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Cplx = std::complex<double>;

struct Discretization {
  std::vector<double> x;        // all grid points
  std::vector<int> unknown;     // grid index of each unknown node
  std::vector<double> weight;   // quadrature weight per unknown node
  SpMat a;                      // B^{-1} L, 3 unknowns per node interleaved
};

Discretization discretize(const PulseProfile& profile, double half_width, int nodes,
                          BoundaryCondition bc) {
  const ModelParams& p = profile.params();
  const double eps = p.epsilon;
  const double x_front = -eps * profile.front_crossing();
  Discretization d;
  d.x = spectrum_grid(half_width, nodes, x_front, eps);
  const int n = static_cast<int>(d.x.size());
  const int first = bc == BoundaryCondition::dirichlet ? 1 : 0;
  const int last = bc == BoundaryCondition::dirichlet ? n - 2 : n - 1;
  for (int j = first; j <= last; ++j) {
    d.unknown.push_back(j);
    const double left = j > 0 ? d.x[j] - d.x[j - 1] : 0.0;
    const double right = j + 1 < n ? d.x[j + 1] - d.x[j] : 0.0;
    d.weight.push_back(0.5 * (left + right));
  }
  const int m = static_cast<int>(d.unknown.size());
  const double diff[3] = {eps * eps, 1.0, p.dd * p.dd};
  const double inv_b[3] = {1.0, 1.0 / p.tau, 1.0 / p.theta};
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(m) * 13);
  for (int r = 0; r < m; ++r) {
    const int j = d.unknown[static_cast<std::size_t>(r)];
    // second difference weights on the nonuniform grid
    double wl = 0.0, wc = 0.0, wr = 0.0;
    if (j == 0) {
      const double h = d.x[1] - d.x[0];
      wc = -2.0 / (h * h);
      wr = 2.0 / (h * h);
    } else if (j == n - 1) {
      const double h = d.x[j] - d.x[j - 1];
      wc = -2.0 / (h * h);
      wl = 2.0 / (h * h);
    } else {
      const double hl = d.x[j] - d.x[j - 1], hr = d.x[j + 1] - d.x[j];
      wl = 2.0 / (hl * (hl + hr));
      wr = 2.0 / (hr * (hl + hr));
      wc = -wl - wr;
    }
    const double u = profile.value_extended(d.x[static_cast<std::size_t>(j)] / eps).U();
    for (int c = 0; c < 3; ++c) {
      const int row = 3 * r + c;
      const double s = inv_b[c];
      if (wl != 0.0 && r > 0) t.emplace_back(row, row - 3, s * diff[c] * wl);
      if (wr != 0.0 && r + 1 < m) t.emplace_back(row, row + 3, s * diff[c] * wr);
      double diag = diff[c] * wc;
      if (c == 0) diag += 1.0 - 3.0 * u * u;
      else diag -= 1.0;
      t.emplace_back(row, row, s * diag);
    }
    t.emplace_back(3 * r, 3 * r + 1, -eps * p.alpha);
    t.emplace_back(3 * r, 3 * r + 2, -eps * p.beta);
    t.emplace_back(3 * r + 1, 3 * r, inv_b[1]);
    t.emplace_back(3 * r + 2, 3 * r, inv_b[2]);
  }
  d.a.resize(3 * m, 3 * m);
  d.a.setFromTriplets(t.begin(), t.end());
  return d;
}

std::vector<Cplx> dense_eigenvalues(const SpMat& a) {
  Eigen::MatrixXd dense(a);
  const lapack_int n = static_cast<lapack_int>(dense.rows());
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, dense.data(), n, wr.data(),
                                        wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0) {
    std::ostringstream msg;
    msg << "dgeev failed with info = " << info;
    throw Error(Errc::eigensolver_failure, msg.str());
  }
  std::vector<Cplx> out(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {wr[i], wi[i]};
  return out;
}

// Inverse iteration for the eigenvalue nearest `shift`; returns the refined
// eigenvalue and the eigenvector.
template <typename Scalar>
std::pair<Cplx, Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> inverse_iteration(const SpMat& a, Scalar shift,
                                                                            int max_iter = 60) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::SparseMatrix<Scalar>;
  const Eigen::Index n = a.rows();
  Mat m = a.template cast<Scalar>();
  Mat id(n, n);
  id.setIdentity();
  m = m - shift * id;
  Eigen::SparseLU<Mat> lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw Error(Errc::eigensolver_failure, "shifted operator is singular");
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = Scalar(dist(rng));
  x.normalize();
  Cplx lambda = shift;
  for (int it = 0; it < max_iter; ++it) {
    const Vec y = lu.solve(x);
    const Scalar q = x.dot(y);  // conjugates x for complex scalars
    const Cplx next = Cplx(shift) + Cplx(1.0) / Cplx(q);
    x = y.normalized();
    const bool done = std::abs(next - lambda) <= 1e-13 * std::max(1.0, std::abs(next));
    lambda = next;
    if (done && it > 2) break;
  }
  // polish: Rayleigh-type quotient with the final vector
  const Vec ax = a.template cast<Scalar>() * x;
  lambda = Cplx(x.dot(ax)) / Cplx(x.squaredNorm());
  return {lambda, x};
}

double weighted_overlap(const Eigen::VectorXcd& v, const Eigen::VectorXd& e, const std::vector<double>& w) {
  Cplx num = 0.0;
  double nv = 0.0, ne = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (int c = 0; c < 3; ++c) {
      const auto k = static_cast<Eigen::Index>(3 * i + static_cast<std::size_t>(c));
      num += w[i] * std::conj(v[k]) * e[k];
      nv += w[i] * std::norm(v[k]);
      ne += w[i] * e[k] * e[k];
    }
  return std::abs(num) / std::sqrt(nv * ne);
}

Eigen::VectorXd profile_derivative(const PulseProfile& profile, const Discretization& d) {
  const double eps = profile.params().epsilon;
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(3 * d.unknown.size()));
  const double L = profile.half_width();
  for (std::size_t i = 0; i < d.unknown.size(); ++i) {
    const double xi = d.x[static_cast<std::size_t>(d.unknown[i])] / eps;
    if (std::abs(xi) >= L) continue;
    const Vec6 f = profile.derivative(xi);
    e[static_cast<Eigen::Index>(3 * i)] = f[0];
    e[static_cast<Eigen::Index>(3 * i + 1)] = f[2];
    e[static_cast<Eigen::Index>(3 * i + 2)] = f[4];
  }
  return e;
}

double outer_mass(const Eigen::VectorXcd& v, const Discretization& d, double half_width) {
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < d.unknown.size(); ++i) {
    double m = 0.0;
    for (int c = 0; c < 3; ++c) m += std::norm(v[static_cast<Eigen::Index>(3 * i + static_cast<std::size_t>(c))]);
    m *= d.weight[i];
    total += m;
    if (std::abs(d.x[static_cast<std::size_t>(d.unknown[i])]) > 0.9 * half_width) outer += m;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

std::string_view boundary_name(BoundaryCondition bc) {
  return bc == BoundaryCondition::dirichlet ? "dirichlet" : "neumann";
}

std::vector<double> spectrum_grid(double half_width, int nodes, double x_front, double eps) {
  // 60% of the mapped extent in narrow bumps at the fronts, 25% in wide ones
  // for the slow tails; the rest uniform
  const double narrow = 2.0 * eps, wide = 60.0 * eps;
  const double a_narrow = 0.6 * half_width / narrow;
  const double a_wide = 0.25 * half_width / wide;
  std::vector<MeshFocus> foci;
  for (double c : {-x_front, x_front}) {
    foci.push_back({c, narrow, a_narrow});
    foci.push_back({c, wide, a_wide});
  }
  return mapped_mesh(-half_width, half_width, nodes, foci);
}

double symbol_rightmost(const ModelParams& p, double k) {
  const double um = rest_state_u(p);
  Eigen::Matrix3d m;
  m << -p.epsilon * p.epsilon * k * k + 1.0 - 3.0 * um * um, -p.epsilon * p.alpha, -p.epsilon * p.beta,
      1.0 / p.tau, (-k * k - 1.0) / p.tau, 0.0,
      1.0 / p.theta, 0.0, (-p.dd * p.dd * k * k - 1.0) / p.theta;
  const Eigen::EigenSolver<Eigen::Matrix3d> es(m, false);
  return es.eigenvalues().real().maxCoeff();
}

double essential_edge(const ModelParams& params, double k_max, int k_samples) {
  params.validate();
  double edge = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < k_samples; ++i) {
    const double k = k_samples > 1 ? k_max * i / (k_samples - 1) : 0.0;
    edge = std::max(edge, symbol_rightmost(params, k));
  }
  return edge;
}

SpectrumReport point_spectrum(const PulseProfile& profile, const SpectrumOptions& options) {
  const ModelParams& p = profile.params();
  const double min_width = p.epsilon * profile.half_width();
  const double lx = options.half_width > 0.0 ? options.half_width : min_width;
  if (lx < min_width * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "L_x = " << lx << " is shorter than the pulse domain eps L = " << min_width;
    throw Error(Errc::domain_error, msg.str());
  }
  if (options.nodes < 20) throw Error(Errc::domain_error, "spectrum needs at least 20 nodes");

  SpectrumReport rep;
  rep.nodes = options.nodes;
  rep.half_width = lx;
  rep.boundary = options.boundary;
  rep.essential_edge = essential_edge(p, options.essential_k_max, options.essential_k_samples);

  const Discretization d = discretize(profile, lx, options.nodes, options.boundary);
  rep.min_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < d.x.size(); ++i) rep.min_spacing = std::min(rep.min_spacing, d.x[i + 1] - d.x[i]);

  std::vector<Cplx> all = dense_eigenvalues(d.a);
  std::sort(all.begin(), all.end(), [](Cplx a, Cplx b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  const std::size_t count = std::min(all.size(), static_cast<std::size_t>(std::max(options.count, 1)));
  rep.eigenvalues.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(count));
  for (const Cplx& l : rep.eigenvalues) rep.in_complex_pair.push_back(l.imag() != 0.0);

  // translation eigenvalue: among the real eigenvalues closest to 0, the one
  // whose eigenfunction matches the profile derivative
  const Eigen::VectorXd deriv = profile_derivative(profile, d);
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(all[a]) < std::abs(all[b]); });
  for (std::size_t c = 0; c < std::min<std::size_t>(order.size(), 4); ++c) {
    const Cplx lam = all[order[c]];
    if (lam.imag() != 0.0) continue;
    const double shift = lam.real() + 1e-9 * std::max(1.0, std::abs(lam.real()));
    const auto [refined, vec] = inverse_iteration<double>(d.a, shift);
    const double ov = weighted_overlap(vec.cast<Cplx>(), deriv, d.weight);
    if (ov > 0.99) {
      rep.translation_eigenvalue = all[order[c]];
      rep.translation_overlap = ov;
      for (std::size_t i = 0; i < count; ++i)
        if (rep.eigenvalues[i] == all[order[c]]) rep.translation_index = static_cast<int>(i);
      rep.translation_gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < all.size(); ++i)
        if (i != order[c]) rep.translation_gap = std::min(rep.translation_gap, std::abs(all[i] - lam));
      break;
    }
    rep.translation_overlap = std::max(rep.translation_overlap, ov);
  }
  if (!(rep.translation_overlap > 0.99)) {
    std::ostringstream msg;
    msg << "no eigenfunction near 0 correlates with the profile derivative (best overlap "
        << rep.translation_overlap << ")";
    throw Error(Errc::translation_not_found, msg.str());
  }

  for (const Cplx& l : all) {
    if (l == rep.translation_eigenvalue) continue;
    if (l.real() > options.unstable_threshold) {
      ++rep.unstable_count;
      rep.unstable_eigenvalues.push_back(l);
    }
  }

  if (options.richardson) {
    const Discretization fine = discretize(profile, lx, 2 * options.nodes - 1, options.boundary);
    const double lam = rep.translation_eigenvalue.real();
    const double shift = 0.25 * lam + 1e-9;
    const auto [refined, vec] = inverse_iteration<double>(fine.a, shift);
    rep.translation_refined = refined.real();
    rep.richardson_ratio = std::abs(lam) / std::abs(rep.translation_refined);
    rep.mesh_error_estimate = std::abs(lam - rep.translation_refined) * 4.0 / 3.0;
  }

  if (options.localization) {
    for (const Cplx& l : all) {
      if (!(l.real() > rep.essential_edge + 0.1)) continue;
      if (l.imag() < 0.0) continue;  // conjugate shares the mass profile
      const Cplx shift = l + Cplx(1e-9 * std::max(1.0, std::abs(l)), 0.0);
      Eigen::VectorXcd vec;
      if (l.imag() == 0.0) vec = inverse_iteration<double>(d.a, shift.real()).second.cast<Cplx>();
      else vec = inverse_iteration<Cplx>(d.a, shift).second;
      rep.max_outer_mass = std::max(rep.max_outer_mass, outer_mass(vec, d, lx));
    }
  }
  return rep;
}

Eigenfunction eigenfunction_near(const PulseProfile& profile, double shift, const SpectrumOptions& options) {
  const double lx = options.half_width > 0.0 ? options.half_width : profile.params().epsilon * profile.half_width();
  const Discretization d = discretize(profile, lx, options.nodes, options.boundary);
  const auto [lambda, vec] = inverse_iteration<double>(d.a, shift + 1e-9);
  Eigenfunction ef;
  ef.eigenvalue = lambda;
  ef.x = d.x;
  ef.values = Eigen::MatrixX3d::Zero(static_cast<Eigen::Index>(d.x.size()), 3);
  for (std::size_t i = 0; i < d.unknown.size(); ++i)
    for (int c = 0; c < 3; ++c)
      ef.values(d.unknown[i], c) = vec[static_cast<Eigen::Index>(3 * i + static_cast<std::size_t>(c))];
  Eigen::Index r = 0, c = 0;
  const double peak = ef.values.cwiseAbs().maxCoeff(&r, &c);
  ef.values *= (ef.values(r, c) < 0.0 ? -1.0 : 1.0) / peak;
  return ef;
}

CountAgreement validate_counts(const MaslovReport& maslov, const SpectrumReport& spectrum) {
  CountAgreement c;
  c.maslov_index = maslov.total_index;
  c.unstable_count = spectrum.unstable_count;
  c.pass = std::abs(maslov.total_index) == spectrum.unstable_count;
  return c;
}

}  // namespace maslov
