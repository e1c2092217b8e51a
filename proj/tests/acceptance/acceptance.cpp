// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion; with
// --criterion N only that one runs. Exit status is nonzero if any check fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maslov/bundle.hpp"
#include "maslov/corner.hpp"
#include "maslov/errors.hpp"
#include "maslov/maslov.hpp"
#include "maslov/model.hpp"
#include "maslov/pde.hpp"
#include "maslov/pulse.hpp"
#include "maslov/singular_orbit.hpp"
#include "maslov/spectrum.hpp"
#include "maslov/symplectic.hpp"
#include "maslov_cli/sampling.hpp"
#include "maslov_cli/scan.hpp"

using namespace maslov;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

ModelParams params(double alpha, double beta, double gamma, double dd = 5.0, double eps = 0.01) {
  ModelParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.dd = dd;
  p.epsilon = eps;
  return p;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool interior_is(const MaslovReport& m, const std::vector<PredictedCrossing>& want) {
  if (m.interior_points.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i)
    if (m.interior_points[i].kind != want[i].kind || m.interior_points[i].signature != want[i].signature)
      return false;
  return true;
}

void stable_case(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams p = params(2, 1, 1);
  const auto roots = solve_jump_condition(p);
  o.require(roots.size() == 1, "one root");
  if (roots.empty()) return;
  const JumpSolution j = roots[0];
  const double f = jump_function(p, j.x_star);
  o.require(std::abs(j.x_star - 0.93) < 0.01 && std::abs(f) < 1e-12, "x* ~ 0.93 with |f| < 1e-12");
  const StabilityResult s = stability_criterion(p, j);
  o.require(s.margin < 0.0 && std::abs(s.margin + 0.45) < 0.01, "margin ~ -0.45");

  const PulseProfile prof = solve_pulse(p, j);
  const MaslovReport m = maslov_index(prof);
  o.require(m.total_index == 0, "Maslov index 0");
  o.require(interior_is(m, {{CrossingKind::front, -1}, {CrossingKind::corner, 1}}),
            "interior crossings {front -1, corner +1}");
  o.require(m.endpoint_positive_count == 0, "endpoint n+ = 0");

  const SpectrumReport sr = point_spectrum(prof);
  o.require(sr.unstable_count == 0, "no unstable eigenvalues");
  o.require(std::abs(sr.translation_eigenvalue) < 1e-3, "|translation eigenvalue| < 1e-3");

  const auto grid = pde_grid(prof, 800);
  const SimState eq = discrete_equilibrium(prof, grid);
  SimState start = eq;
  add_noise(start, 1e-3, 42);
  const DeviationSeries dev = deviation_series(evolve(start, 200.0, 0.05), eq);
  o.require(dev.value.back() < 1e-3, "deviation below 1e-3 at t = 200");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 120.0, "runtime under 2 minutes");

  o.detail << "x*=" << j.x_star << " margin=" << s.margin << " maslov=" << m.total_index
           << " unstable=" << sr.unstable_count << " translation=" << std::abs(sr.translation_eigenvalue)
           << " deviation " << dev.value.front() << " -> " << dev.value.back() << " runtime=" << elapsed << "s";
}

void unstable_case(Outcome& o) {
  const ModelParams p = params(-5, 5, 0.5);
  const auto roots = solve_jump_condition(p);
  o.require(roots.size() == 2, "two roots");
  if (roots.size() != 2) return;
  o.require(std::abs(roots[0].x_star - 0.068) < 0.001, "x*1 ~ 0.068");
  o.require(std::abs(roots[1].x_star - 5.755) < 0.01, "x*2 ~ 5.755");

  const PulseProfile prof = solve_pulse(p, roots[0]);
  const MaslovReport m = maslov_index(prof);
  o.require(m.total_index == -1, "Maslov index -1");
  o.require(interior_is(m, {{CrossingKind::front, -1}}), "front crossing is the only interior point");

  SpectrumOptions so;
  so.localization = false;
  const SpectrumReport sr = point_spectrum(prof, so);
  o.require(sr.unstable_count == 1, "one unstable eigenvalue");
  const bool real = sr.unstable_count == 1 && sr.unstable_eigenvalues[0].imag() == 0.0;
  o.require(real, "unstable eigenvalue real");

  double rate = 0.0, lambda = 0.0;
  if (real) {
    lambda = sr.unstable_eigenvalues[0].real();
    SpectrumOptions eo;
    eo.nodes = 800;
    const Eigenfunction ef = eigenfunction_near(prof, lambda, eo);
    const auto grid = pde_grid(prof, 800);
    const SimState eq = discrete_equilibrium(prof, grid);
    SimState start = eq;
    add_mode(start, ef, 1e-3);
    const DeviationSeries dev = deviation_series(evolve(start, 200.0, 0.05), eq);
    rate = growth_rate(dev, 20.0, 60.0);
    o.require(std::abs(rate - lambda) <= 0.2 * lambda, "PDE growth rate within 20% of the eigenvalue");
  }

  const StabilityResult s2 = stability_criterion(p, roots[1]);
  o.require(s2.verdict == StabilityVerdict::stable && std::abs(s2.margin + 0.0999) < 1e-3,
            "second root stable with margin ~ -0.0999");
  const MaslovReport m2 = maslov_index(solve_pulse(p, roots[1]));
  o.require(m2.total_index == 0, "second root Maslov index 0");

  o.detail << "x*1=" << roots[0].x_star << " maslov=" << m.total_index << " unstable=" << sr.unstable_count
           << " lambda=" << lambda << " pde_rate=" << rate << " (rel err " << std::abs(rate - lambda) / lambda
           << ") x*2=" << roots[1].x_star << " margin2=" << s2.margin << " maslov2=" << m2.total_index;
}

void singular_limit(Outcome& o) {
  struct Case {
    ModelParams p;
    JumpSolution j;
  };
  std::vector<Case> cases;
  cases.push_back({params(2, 1, 1), solve_jump_condition(params(2, 1, 1)).at(0)});
  cases.push_back({params(-5, 5, 0.5), solve_jump_condition(params(-5, 5, 0.5)).at(0)});
  cases.push_back({params(-5, 5, 0.5), solve_jump_condition(params(-5, 5, 0.5)).at(1)});
  for (const auto& c : cli::sample_parameter_sets(5, 42)) cases.push_back({c.params, c.jump});
  int matched = 0;
  for (const Case& c : cases) {
    std::ostringstream id;
    id << "(" << c.p.alpha << "," << c.p.beta << "," << c.p.gamma << "," << c.p.dd << " x*=" << c.j.x_star << ")";
    try {
      const MaslovReport m = maslov_index(solve_pulse(c.p, c.j));
      const bool ok = m.prediction && m.agrees_with_prediction;
      matched += ok;
      double worst_u = 0.0;
      for (const ConjugatePoint& q : m.interior_points)
        if (q.kind == CrossingKind::front) worst_u = std::max(worst_u, std::abs(q.u));
      o.require(ok, "inventory " + id.str());
      o.detail << id.str() << " index " << m.total_index << " front |U| " << worst_u << "; ";
    } catch (const Error& e) {
      o.require(false, id.str() + " " + std::string(e.name()) + ": " + e.what());
    }
  }
  o.detail << matched << "/" << cases.size() << " inventories match";
}

void corner(Outcome& o) {
  const ModelParams p = params(2, 1, 1);
  const CornerReport r = corner_flow(p, solve_jump_condition(p).at(0), 1e3, 100);
  o.require(r.closed_form_error < 1e-10, "closed form within 1e-10");

  int points = 0, flips = 0, mismatches = 0;
  int prev_sign = 0;
  for (int i = 0; i < 50; ++i) {
    const double t = i / 49.0;
    const ModelParams q = params(2.0 + t * (-7.0), 1.0 + t * 4.0, 0.5);
    const auto roots = solve_jump_condition(q);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      const StabilityResult s = stability_criterion(q, roots[k]);
      ++points;
      mismatches += CornerFlow(q, roots[k]).has_root() != (s.margin < 0.0);
      if (k == 0) {
        const int sign = s.margin < 0.0 ? -1 : 1;
        flips += prev_sign != 0 && sign != prev_sign;
        prev_sign = sign;
      }
    }
  }
  o.require(mismatches == 0, "corner root exists iff margin < 0");
  o.require(flips > 0, "margin changes sign along the path");
  o.detail << "closed-form error " << r.closed_form_error << "; " << points << " roots on the path, "
           << mismatches << " mismatches, " << flips << " sign change(s) of the first root's margin";
}

void symplectic(Outcome& o) {
  const ModelParams p = params(2, 1, 1);
  const PulseProfile prof = solve_pulse(p, solve_jump_condition(p).at(0));
  std::mt19937 rng(42);
  std::normal_distribution<double> n;
  double drift = 0.0;
  for (int t = 0; t < 10; ++t) {
    Vec6 a, b;
    for (int i = 0; i < 6; ++i) {
      a[i] = n(rng);
      b[i] = n(rng);
    }
    drift = std::max(drift, omega_drift(prof, a, b).max_relative_drift);
  }
  o.require(drift < 1e-8, "omega drift < 1e-8");

  const BundleTrajectory fw = evolve_bundle(prof, BundleDirection::forward, prof.half_width());
  const BundleTrajectory bw = evolve_bundle(prof, BundleDirection::backward, -prof.half_width());
  double lag = 0.0, rel = 0.0;
  for (const BundleTrajectory* tr : {&fw, &bw})
    for (const Frame& f : tr->frames) {
      lag = std::max(lag, is_lagrangian(f, p, 1e-8).max_residual);
      rel = std::max(rel, plucker_coords(f, PluckerBasis::standard).relation_residual());
    }
  o.require(lag < 1e-8, "evolved frames Lagrangian within 1e-8");
  o.require(rel < 1e-9, "Grassmann-Pluecker relations within 1e-9");

  double ratio_err = 0.0;
  for (double dd : {2.0, 5.0, 3.7}) {
    const JumpOffData z = jump_off_data(0.93, dd);
    const PluckerVector pz = plucker_coords(frame_from_eta(plane_z_eta(2.0, 1.0, dd, z.v, z.w)), PluckerBasis::eta);
    ratio_err = std::max(ratio_err, std::abs(pz.at(2, 4, 6) / pz.at(3, 4, 6) - dd));
  }
  o.require(ratio_err < 1e-10, "p246:p346 = D within 1e-10");
  o.detail << "omega drift " << drift << ", Lagrangian residual " << lag << " over "
           << fw.frames.size() + bw.frames.size() << " frames, Pluecker relations " << rel
           << ", ratio error " << ratio_err;
}

void convergence(Outcome& o) {
  double dist[2] = {0.0, 0.0};
  const double eps[2] = {0.02, 0.01};
  for (int k = 0; k < 2; ++k) {
    const ModelParams p = params(2, 1, 1, 5.0, eps[k]);
    dist[k] = skeleton_distance(solve_pulse(p, solve_jump_condition(p).at(0)));
  }
  const double ratio = dist[0] / dist[1];
  o.require(ratio >= 1.4 && ratio <= 2.6, "distance ratio in [1.4, 2.6]");

  const ModelParams p = params(2, 1, 1);
  SpectrumOptions so;
  so.nodes = 800;
  so.localization = false;
  const SpectrumReport sr = point_spectrum(solve_pulse(p, solve_jump_condition(p).at(0)), so);
  o.require(sr.richardson_ratio >= 3.0 && sr.richardson_ratio <= 5.0, "translation ratio in [3, 5]");
  o.detail << "skeleton distance " << dist[0] << " (eps 0.02) / " << dist[1] << " (eps 0.01) = " << ratio
           << "; translation " << std::abs(sr.translation_eigenvalue) << " (N=800) / " << sr.translation_refined
           << " (N=1600) = " << sr.richardson_ratio;
}

void scan(Outcome& o) {
  cli::ScanOptions so;
  so.alpha = {-6.0, 2.0, 33};
  so.beta = {-2.0, 6.0, 33};
  so.base = params(1, 1, 0.5);
  const cli::ScanResult coarse = cli::run_scan(so);
  int positive = 0, wrong = 0;
  for (const cli::ScanCell& c : coarse.cells)
    if (c.alpha > 0 && c.beta > 0 && !c.roots.empty()) {
      ++positive;
      wrong += c.cls != cli::CellClass::stable;
    }
  o.require(positive > 0 && wrong == 0, "alpha, beta > 0 cells stable");

  so.full = true;
  so.full_cells = 10;
  const cli::ScanResult full = cli::run_scan(so);
  int cells = 0, roots = 0, agree = 0, marginal = 0, spectrum_agree = 0;
  for (const cli::ScanCell& c : full.cells) {
    bool evaluated = false;
    for (const cli::RootResult& r : c.roots) {
      if (!r.evaluated) continue;
      evaluated = true;
      if (r.marginal) {
        ++marginal;
        continue;
      }
      ++roots;
      spectrum_agree += r.spectrum_agrees == 1;
      if (!r.failed && r.agrees) {
        ++agree;
      } else {
        std::ostringstream id;
        id << "(" << c.alpha << "," << c.beta << ") x*=" << r.jump.x_star
           << (r.failed ? " " + r.failure : " index mismatch");
        o.require(false, id.str());
      }
    }
    cells += evaluated;
  }
  o.require(cells == 10, "10 boundary cells evaluated");
  o.detail << positive << " positive-quadrant cells, " << wrong << " misclassified; full pipeline on " << cells
           << " cells: " << agree << "/" << roots << " roots agree (" << marginal << " marginal skipped, "
           << spectrum_agree << " also match the spectrum count)";
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: maslov_acceptance [--criterion N]\n";
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"stable case end to end", stable_case},
      {"unstable case end to end", unstable_case},
      {"singular limit agreement", singular_limit},
      {"corner closed form and existence flip", corner},
      {"symplectic invariants", symplectic},
      {"convergence", convergence},
      {"scan sanity", scan},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i + 1) != only) continue;
    Outcome o;
    o.detail.precision(6);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const Error& e) {
      o.pass = false;
      o.detail << " [error " << e.name() << ": " << e.what() << "]";
    }
    all = all && o.pass;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << o.detail.str() << " (" << seconds_since(t0) << " s)" << std::endl;
  }
  return all ? 0 : 1;
}
