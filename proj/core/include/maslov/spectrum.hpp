#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "maslov/maslov.hpp"
#include "maslov/params.hpp"
#include "maslov/pulse.hpp"

namespace maslov {

enum class BoundaryCondition { dirichlet, neumann };
std::string_view boundary_name(BoundaryCondition bc);

struct SpectrumOptions {
  int nodes = 800;          // grid points in x (three unknowns each)
  double half_width = 0.0;  // L_x on the slow scale; 0 selects eps * L of the profile
  int count = 10;           // rightmost eigenvalues reported
  double unstable_threshold = 1e-3;
  BoundaryCondition boundary = BoundaryCondition::dirichlet;
  /// Re-solve the translation eigenvalue on 2 * nodes by inverse iteration.
  bool richardson = true;
  /// Inverse-iterate the eigenvectors right of the essential edge and measure
  /// their mass near the ends.
  bool localization = true;
  double essential_k_max = 50.0;
  int essential_k_samples = 2001;
};

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;  // rightmost first
  std::vector<bool> in_complex_pair;
  std::complex<double> translation_eigenvalue{0.0, 0.0};
  int translation_index = -1;
  double translation_overlap = 0.0;
  double translation_gap = 0.0;  // distance to the nearest other eigenvalue
  int unstable_count = 0;
  std::vector<std::complex<double>> unstable_eigenvalues;
  double essential_edge = 0.0;
  // discretization
  int nodes = 0;
  double half_width = 0.0;
  BoundaryCondition boundary = BoundaryCondition::dirichlet;
  double min_spacing = 0.0;
  // translation eigenvalue on the doubled grid, ratio |lambda_N| / |lambda_2N|,
  // and the Richardson error estimate |lambda_N - lambda_2N| * 4/3
  double translation_refined = 0.0;
  double richardson_ratio = 0.0;
  double mesh_error_estimate = 0.0;
  double max_outer_mass = 0.0;  // over eigenfunctions right of edge + 0.1
};

/// Grid on [-L_x, L_x] concentrated at the two fronts (+-x_front, slow scale).
std::vector<double> spectrum_grid(double half_width, int nodes, double x_front, double eps);

/// Eigenvalue problem L p = lambda B p, B = diag(1, tau, theta), with
/// L = [eps^2 d_xx + 1 - 3U^2, -eps alpha, -eps beta; 1, d_xx - 1, 0; 1, 0, D^2 d_xx - 1]
/// on the slow variable, coefficients from the profile (held at the rest state
/// beyond its range). Second-order differences on the mapped grid.
/// Errors: EigensolverFailure, TranslationNotFound, DomainError (L_x < eps L).
SpectrumReport point_spectrum(const PulseProfile& profile, const SpectrumOptions& options = {});

/// sup over k in [0, k_max] of the largest real part of the 3x3 symbol problem
/// lambda B v = M(k) v at the rest state.
double essential_edge(const ModelParams& params, double k_max = 50.0, int k_samples = 2001);

struct Eigenfunction {
  std::complex<double> eigenvalue{0.0, 0.0};
  std::vector<double> x;   // full grid, boundary nodes included
  Eigen::MatrixX3d values;  // real part of (u, v, w), sup norm 1, largest entry positive
};

/// Eigenfunction of the eigenvalue nearest `shift` on the grid of `options`,
/// by shift-invert iteration.
Eigenfunction eigenfunction_near(const PulseProfile& profile, double shift,
                                 const SpectrumOptions& options = {});

/// Rightmost real part of the symbol problem at one wavenumber.
double symbol_rightmost(const ModelParams& params, double k);

struct CountAgreement {
  bool pass = false;
  int maslov_index = 0;
  int unstable_count = 0;
};

/// pass iff |total_index| == unstable_count.
CountAgreement validate_counts(const MaslovReport& maslov, const SpectrumReport& spectrum);

}  // namespace maslov
