#include "maslov/symplectic.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "maslov/errors.hpp"
#include "maslov/model.hpp"

namespace maslov {

namespace {

void require_rank3(const Frame& frame) {
  const Eigen::JacobiSVD<Frame> svd(frame);
  const auto& s = svd.singularValues();
  if (!(s[0] > 0.0) || !(s[2] > 1e-12 * s[0]) || !frame.allFinite())
    throw Error(Errc::rank_deficient, "frame does not span a 3-plane");
}

std::array<int, 4> sorted_signature(int i, int j, int k) {
  // returns {a, b, c, sign} with a < b < c, or sign 0 if indices repeat
  int v[3] = {i, j, k};
  int sign = 1;
  for (int pass = 0; pass < 2; ++pass)
    for (int m = 0; m < 2 - pass; ++m)
      if (v[m] > v[m + 1]) {
        std::swap(v[m], v[m + 1]);
        sign = -sign;
      }
  if (v[0] == v[1] || v[1] == v[2]) sign = 0;
  return {v[0], v[1], v[2], sign};
}

}  // namespace

Mat6 omega_matrix(const ModelParams& params) {
  if (params.alpha == 0.0 || params.beta == 0.0)
    throw Error(Errc::invalid_params, "omega is degenerate when alpha or beta vanishes");
  Mat6 om = Mat6::Zero();
  om(0, 3) = 1.0;
  om(1, 4) = -params.alpha;
  om(2, 5) = -params.beta * params.dd;
  return om - om.transpose();
}

double omega_form(const Vec6& x, const Vec6& y, const ModelParams& params) {
  return x.dot(omega_matrix(params) * y);
}

LagrangianCheck is_lagrangian(const Frame& frame, const ModelParams& params, double tol) {
  require_rank3(frame);
  const Eigen::Matrix3d g = frame.transpose() * omega_matrix(params) * frame;
  LagrangianCheck out;
  out.max_residual = g.cwiseAbs().maxCoeff();
  out.lagrangian = out.max_residual < tol;
  return out;
}

Frame orthonormalize(const Frame& frame) {
  const Eigen::HouseholderQR<Frame> qr(frame);
  Frame q = qr.householderQ() * Frame::Identity();
  const Eigen::Matrix3d r = qr.matrixQR().topRows<3>().triangularView<Eigen::Upper>();
  const double scale = frame.colwise().norm().maxCoeff();
  for (int c = 0; c < 3; ++c) {
    if (!(std::abs(r(c, c)) > 1e-12 * scale))
      throw Error(Errc::rank_deficient, "frame lost rank during orthonormalization");
    if (r(c, c) < 0.0) q.col(c) = -q.col(c);
  }
  return q;
}

double frame_conditioning(const Frame& frame) {
  const Eigen::JacobiSVD<Frame> svd(frame);
  const auto& s = svd.singularValues();
  return s[0] > 0.0 ? s[2] / s[0] : 0.0;
}

PluckerVector::PluckerVector(const std::array<double, 20>& coords, PluckerBasis basis)
    : p_(coords), basis_(basis) {}

int PluckerVector::index(int i, int j, int k) {
  if (!(1 <= i && i < j && j < k && k <= 6))
    throw Error(Errc::domain_error, "Pluecker index needs 1 <= i < j < k <= 6");
  int idx = 0;
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 5; ++b)
      for (int c = b + 1; c <= 6; ++c, ++idx)
        if (a == i && b == j && c == k) return idx;
  return -1;
}

std::array<int, 3> PluckerVector::triple(int index) {
  int idx = 0;
  for (int a = 1; a <= 4; ++a)
    for (int b = a + 1; b <= 5; ++b)
      for (int c = b + 1; c <= 6; ++c, ++idx)
        if (idx == index) return {a, b, c};
  throw Error(Errc::domain_error, "Pluecker index out of range");
}

std::string PluckerVector::key(int index) {
  const auto t = triple(index);
  return std::to_string(t[0]) + std::to_string(t[1]) + std::to_string(t[2]);
}

double PluckerVector::at(int i, int j, int k) const {
  return p_[static_cast<std::size_t>(index(i, j, k))];
}

double PluckerVector::signed_at(int i, int j, int k) const {
  const auto s = sorted_signature(i, j, k);
  if (s[3] == 0) return 0.0;
  return s[3] * at(s[0], s[1], s[2]);
}

PluckerVector PluckerVector::normalized() const {
  std::size_t arg = 0;
  for (std::size_t m = 1; m < p_.size(); ++m)
    if (std::abs(p_[m]) > std::abs(p_[arg])) arg = m;
  if (p_[arg] == 0.0) throw Error(Errc::rank_deficient, "zero Pluecker vector");
  PluckerVector out = *this;
  for (auto& v : out.p_) v /= p_[arg];
  return out;
}

double PluckerVector::relation_residual() const {
  // sum_{l=1}^{4} (-1)^l p_{i1 i2 j_l} p_{j1..^j_l..j4} = 0 for all i1<i2, j1<..<j4
  const PluckerVector n = normalized();
  double worst = 0.0;
  for (int i1 = 1; i1 <= 6; ++i1)
    for (int i2 = i1 + 1; i2 <= 6; ++i2)
      for (int j1 = 1; j1 <= 6; ++j1)
        for (int j2 = j1 + 1; j2 <= 6; ++j2)
          for (int j3 = j2 + 1; j3 <= 6; ++j3)
            for (int j4 = j3 + 1; j4 <= 6; ++j4) {
              const int j[4] = {j1, j2, j3, j4};
              double sum = 0.0;
              for (int l = 0; l < 4; ++l) {
                int rest[3], r = 0;
                for (int m = 0; m < 4; ++m)
                  if (m != l) rest[r++] = j[m];
                const double sgn = (l % 2 == 0) ? -1.0 : 1.0;
                sum += sgn * n.signed_at(i1, i2, j[l]) * n.signed_at(rest[0], rest[1], rest[2]);
              }
              worst = std::max(worst, std::abs(sum));
            }
  return worst;
}

double PluckerVector::distance(const PluckerVector& other) const {
  const auto a = normalized().coords();
  const auto b = other.normalized().coords();
  double plus = 0.0, minus = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    plus = std::max(plus, std::abs(a[m] - b[m]));
    minus = std::max(minus, std::abs(a[m] + b[m]));
  }
  return std::min(plus, minus);
}

PluckerVector plucker_coords(const Frame& frame, PluckerBasis basis) {
  require_rank3(frame);
  Frame c = frame;
  if (basis == PluckerBasis::eta) c = singular_eta_basis().partialPivLu().solve(frame);
  std::array<double, 20> p{};
  for (int idx = 0; idx < 20; ++idx) {
    const auto t = PluckerVector::triple(idx);
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) m.row(r) = c.row(t[static_cast<std::size_t>(r)] - 1);
    p[static_cast<std::size_t>(idx)] = m.determinant();
  }
  return PluckerVector(p, basis).normalized();
}

double plane_gap(const Frame& a, const Frame& b) {
  const Frame qa = orthonormalize(a);
  const Frame qb = orthonormalize(b);
  const Mat6 diff = qa * qa.transpose() - qb * qb.transpose();
  const Eigen::SelfAdjointEigenSolver<Mat6> es(diff, Eigen::EigenvaluesOnly);
  return std::min(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
}

Frame frame_from_eta(const Frame& eta_coords) { return singular_eta_basis() * eta_coords; }

}  // namespace maslov
