#pragma once

#include <optional>
#include <string>
#include <vector>

#include "maslov/params.hpp"
#include "maslov/singular_orbit.hpp"

namespace maslov::cli {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 1;
  double at(int i) const { return count > 1 ? lo + (hi - lo) * i / (count - 1) : lo; }
};

/// "lo:hi:n", or a single value.
Range parse_range(const std::string& text);

// degenerate: alpha or beta is zero, roots listed but omega is singular so no index is computed
enum class CellClass { no_pulse, stable, unstable, mixed, marginal, degenerate };
std::string_view cell_class_name(CellClass c);

struct RootResult {
  JumpSolution jump;
  double margin = 0.0;
  bool marginal = false;  // |margin| below the scan's marginal band
  // full pipeline
  bool evaluated = false;
  bool failed = false;
  std::string failure;
  int maslov_index = 0;
  int predicted_index = 0;
  int unstable_count = -1;  // -1 when the spectrum was not computed
  bool agrees = false;            // Maslov index equals the singular-limit index
  bool inventory_agrees = false;  // crossing inventory matches as well
  int spectrum_agrees = -1;       // 0/1, -1 when the spectrum was not computed
};

struct ScanCell {
  int i = 0;  // alpha index
  int j = 0;  // beta index
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<RootResult> roots;
  CellClass cls = CellClass::no_pulse;
  bool boundary_adjacent = false;
};

struct ScanOptions {
  Range alpha{-6.0, 2.0, 33};
  Range beta{-2.0, 6.0, 33};
  ModelParams base;
  double marginal_band = 0.05;
  bool full = false;
  /// Cells upgraded to the full pipeline: 0 = all, otherwise this many
  /// boundary-adjacent cells spread evenly over the boundary.
  int full_cells = 0;
  bool spectrum = true;
  int spectrum_nodes = 400;
  int threads = 0;  // 0 = hardware concurrency
};

struct ScanResult {
  ScanOptions options;
  std::vector<ScanCell> cells;  // row-major in (alpha, beta)
  const ScanCell& at(int i, int j) const {
    return cells.at(static_cast<std::size_t>(i * options.beta.count + j));
  }
};

ScanResult run_scan(const ScanOptions& options);

/// Pulse, Maslov index and (optionally) spectrum for one root; fills the
/// pipeline fields of `root`.
void evaluate_root(RootResult& root, const ModelParams& params, bool spectrum, int spectrum_nodes);

std::string scan_csv(const ScanResult& result);

struct Segment2 {
  double x0, y0, x1, y1;
};
/// Marching squares on the margin of the first root (cells without a root are
/// skipped): line segments of the zero level set in (alpha, beta).
std::vector<Segment2> margin_zero_contour(const ScanResult& result);

std::string scan_svg(const ScanResult& result);

}  // namespace maslov::cli
