#include "maslov_cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>

#include "maslov/corner.hpp"
#include "maslov/errors.hpp"
#include "maslov/io.hpp"
#include "maslov/maslov.hpp"
#include "maslov/pde.hpp"
#include "maslov/pulse.hpp"
#include "maslov/spectrum.hpp"
#include "maslov_cli/scan.hpp"

namespace maslov::cli {

namespace {

// thrown for invalid flag values detected after parsing; maps to exit 2
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::pair<const char*, const char*> kKeys[] = {
    {"alpha", "coupling to V"},
    {"beta", "coupling to W"},
    {"gamma", "constant forcing"},
    {"dd", "diffusion ratio D of W (> 1)"},
    {"epsilon", "scale separation (default 0.01)"},
    {"tau", "time constant of V (default 1)"},
    {"theta", "time constant of W (default 1)"},
    {"root-index", "which jump root, 1-based (default 1)"},
    {"L", "fast-time half width of the pulse domain"},
    {"N", "collocation node count"},
    {"Nx", "spatial grid points for spectrum and evolve"},
    {"Lx", "slow-scale half width for spectrum and evolve"},
    {"seed", "noise seed (default 42)"},
    {"T", "final time of the evolution (default 200)"},
    {"dt", "time step (default 0.05)"},
    {"amplitude", "perturbation size (default 1e-3)"},
    {"perturb", "noise | mode"},
    {"boundary", "dirichlet | neumann truncation for the spectrum"},
    {"full-cells", "boundary-adjacent cells for --full (0 = all cells with roots)"},
    {"threads", "worker threads for scan (0 = hardware)"},
    {"spectrum-nodes", "spectrum grid size in --full scans"}};

struct Settings {
  std::map<std::string, std::string> flags;  // raw flag values as given
  std::string config;
  std::string out = ".";
  bool full = false;
  bool no_spectrum = false;
  bool out_given = false;

  std::map<std::string, std::string> merged() const {
    std::map<std::string, std::string> m;
    if (!config.empty()) m = parse_key_values(read_text_file(config));
    for (const auto& [k, v] : flags)
      if (!v.empty()) m[k] = v;
    return m;
  }
};

void add_common(CLI::App* app, Settings& s) {
  for (const auto& [k, help] : kKeys) app->add_option(std::string("--") + k, s.flags[k], help);
  app->add_option("--config", s.config, "key=value file; flags override it");
  app->add_option("--out", s.out, "output directory");
}

double number(const std::map<std::string, std::string>& m, const std::string& key, double fallback) {
  const auto it = m.find(key);
  if (it == m.end()) return fallback;
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != it->second.size()) throw UsageError("--" + key + ": not a number: " + it->second);
  return v;
}

int integer(const std::map<std::string, std::string>& m, const std::string& key, int fallback) {
  const double v = number(m, key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("--" + key + ": not an integer");
  return static_cast<int>(v);
}

ModelParams params_of(const std::map<std::string, std::string>& m) {
  ModelParams p;
  try {
    p = apply_params(m);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  p.validate();
  return p;
}

JumpSolution pick_root(const ModelParams& p, int index) {
  const auto roots = solve_jump_condition(p);
  if (roots.empty()) throw Error(Errc::domain_error, "no pulse: the jump condition has no positive root");
  if (index < 1 || index > static_cast<int>(roots.size()))
    throw Error(Errc::domain_error, "root index " + std::to_string(index) + " out of range (" +
                                        std::to_string(roots.size()) + " roots)");
  return roots[static_cast<std::size_t>(index - 1)];
}

PulseProfile pulse_of(const std::map<std::string, std::string>& m, const ModelParams& p) {
  PulseOptions po;
  po.half_width = number(m, "L", 0.0);
  po.nodes = integer(m, "N", 0);
  return solve_pulse(p, pick_root(p, integer(m, "root-index", 1)), po);
}

SpectrumOptions spectrum_options(const std::map<std::string, std::string>& m) {
  SpectrumOptions so;
  so.nodes = integer(m, "Nx", so.nodes);
  so.half_width = number(m, "Lx", 0.0);
  if (const auto it = m.find("boundary"); it != m.end()) {
    if (it->second == "dirichlet") so.boundary = BoundaryCondition::dirichlet;
    else if (it->second == "neumann") so.boundary = BoundaryCondition::neumann;
    else throw UsageError("--boundary must be dirichlet or neumann");
  }
  return so;
}

std::string out_path(const Settings& s, const std::string& name) {
  std::filesystem::create_directories(s.out);
  return (std::filesystem::path(s.out) / name).string();
}

int cmd_exist(const Settings& s, std::ostream& out) {
  const auto m = s.merged();
  const ModelParams p = params_of(m);
  const auto roots = solve_jump_condition(p);
  if (roots.empty()) {
    out << "no pulse\n";
  }
  for (const JumpSolution& r : roots) {
    const StabilityResult st = stability_criterion(p, r);
    out << "root " << r.root_index << ": x* = " << format_double(r.x_star) << ", margin = " << format_double(st.margin)
        << ", verdict " << verdict_name(st.verdict) << '\n';
  }
  if (s.out_given) write_text_file(out_path(s, "exist.json"), existence_json(p, roots));
  return 0;
}

int cmd_orbit(const Settings& s, std::ostream& out) {
  const auto m = s.merged();
  const ModelParams p = params_of(m);
  const SingularOrbit orbit = build_singular_orbit(p, pick_root(p, integer(m, "root-index", 1)));
  write_text_file(out_path(s, "orbit.csv"), orbit_csv(orbit));
  write_text_file(out_path(s, "orbit.json"), orbit_json(orbit));
  out << "x* = " << format_double(orbit.x_star()) << "; wrote orbit.csv, orbit.json\n";
  return 0;
}

int cmd_pulse(const Settings& s, std::ostream& out) {
  const auto m = s.merged();
  const ModelParams p = params_of(m);
  const PulseProfile prof = pulse_of(m, p);
  write_text_file(out_path(s, "pulse.csv"), profile_csv(prof));
  write_text_file(out_path(s, "pulse.json"), profile_json(prof));
  out << "pulse on [-" << format_double(prof.half_width()) << ", " << format_double(prof.half_width()) << "] with "
      << prof.grid().size() << " nodes, residual " << format_double(prof.stats().residual)
      << "; wrote pulse.csv, pulse.json\n";
  return 0;
}

int cmd_maslov(const Settings& s, std::ostream& out) {
  const auto m = s.merged();
  const ModelParams p = params_of(m);
  const PulseProfile prof = pulse_of(m, p);
  const MaslovReport rep = maslov_index(prof);
  write_text_file(out_path(s, "maslov.json"), maslov_json(rep));
  for (const ConjugatePoint& c : rep.interior_points)
    out << crossing_kind_name(c.kind) << " crossing at xi = " << format_double(c.xi_star)
        << ", U = " << format_double(c.u) << ", signature " << c.signature << '\n';
  out << "Maslov index " << rep.total_index;
  if (rep.prediction) out << " (predicted " << rep.prediction->predicted_index << ")";
  out << "; wrote maslov.json\n";
  return 0;
}

int cmd_spectrum(const Settings& s, std::ostream& out) {
  const auto m = s.merged();
  const ModelParams p = params_of(m);
  const PulseProfile prof = pulse_of(m, p);
  const SpectrumReport rep = point_spectrum(prof, spectrum_options(m));
  write_text_file(out_path(s, "spectrum.json"), spectrum_json(rep));
  out << "unstable eigenvalues: " << rep.unstable_count << ", translation eigenvalue "
      << format_double(rep.translation_eigenvalue.real()) << ", essential edge " << format_double(rep.essential_edge)
      << "; wrote spectrum.json\n";
  return 0;
}

struct EvolveOutcome {
  DeviationSeries series;
  SimState final_state;
  double eigenvalue = 0.0;
};

EvolveOutcome run_evolution(const std::map<std::string, std::string>& m, const PulseProfile& prof,
                            std::string perturb) {
  const int nodes = integer(m, "Nx", 800);
  const double t_final = number(m, "T", 200.0), dt = number(m, "dt", 0.05);
  const double amplitude = number(m, "amplitude", 1e-3);
  const auto seed = static_cast<std::uint32_t>(integer(m, "seed", 42));
  if (perturb.empty()) perturb = m.count("perturb") ? m.at("perturb") : "noise";
  const auto grid = pde_grid(prof, nodes, number(m, "Lx", 0.0));
  const SimState eq = discrete_equilibrium(prof, grid);
  SimState s = eq;
  EvolveOutcome o;
  if (perturb == "noise") {
    add_noise(s, amplitude, seed);
  } else if (perturb == "mode") {
    SpectrumOptions so = spectrum_options(m);
    so.nodes = nodes;
    so.richardson = false;
    so.localization = false;
    const SpectrumReport rep = point_spectrum(prof, so);
    const double target = rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.front().real();
    const Eigenfunction ef = eigenfunction_near(prof, target, so);
    o.eigenvalue = ef.eigenvalue.real();
    add_mode(s, ef, amplitude);
  } else {
    throw UsageError("--perturb must be noise or mode");
  }
  const auto snaps = evolve(s, t_final, dt);
  o.series = deviation_series(snaps, eq);
  o.final_state = snaps.back();
  return o;
}

int cmd_evolve(const Settings& s, std::ostream& out) {
  const auto m = s.merged();
  const ModelParams p = params_of(m);
  const PulseProfile prof = pulse_of(m, p);
  const EvolveOutcome o = run_evolution(m, prof, "");
  write_text_file(out_path(s, "deviation.csv"), deviation_csv(o.series));
  write_text_file(out_path(s, "final_state.csv"), state_csv(o.final_state));
  out << "deviation " << format_double(o.series.value.front()) << " -> " << format_double(o.series.value.back())
      << " at t = " << format_double(o.series.t.back()) << "; wrote deviation.csv, final_state.csv\n";
  return 0;
}

int cmd_scan(const Settings& s, std::ostream& out) {
  const auto m = s.merged();
  ScanOptions o;
  try {
    if (m.count("alpha")) o.alpha = parse_range(m.at("alpha"));
    if (m.count("beta")) o.beta = parse_range(m.at("beta"));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  auto rest = m;
  rest.erase("alpha");
  rest.erase("beta");
  o.base = apply_params(rest);
  o.base.alpha = 1.0;
  o.base.beta = 1.0;
  o.base.validate();
  o.full = s.full;
  o.full_cells = integer(m, "full-cells", 0);
  o.spectrum = !s.no_spectrum;
  o.spectrum_nodes = integer(m, "spectrum-nodes", o.spectrum_nodes);
  o.threads = integer(m, "threads", 0);
  const ScanResult r = run_scan(o);
  write_text_file(out_path(s, "scan.csv"), scan_csv(r));
  write_text_file(out_path(s, "scan.svg"), scan_svg(r));
  std::map<CellClass, int> counts;
  for (const ScanCell& c : r.cells) ++counts[c.cls];
  out << o.alpha.count << 'x' << o.beta.count << " cells:";
  for (const auto& [c, n] : counts) out << ' ' << cell_class_name(c) << '=' << n;
  if (o.full) {
    int evaluated = 0, failed = 0, agree = 0, spectrum_agree = 0;
    for (const ScanCell& c : r.cells)
      for (const RootResult& root : c.roots) {
        if (!root.evaluated) continue;
        ++evaluated;
        if (root.failed) ++failed;
        if (root.agrees) ++agree;
        if (root.spectrum_agrees == 1) ++spectrum_agree;
      }
    out << "; pipeline roots=" << evaluated << " failed=" << failed << " maslov_agrees=" << agree;
    if (o.spectrum) out << " spectrum_agrees=" << spectrum_agree;
  }
  out << "; wrote scan.csv, scan.svg\n";
  return 0;
}

int cmd_report(const Settings& s, std::ostream& out, std::ostream& err) {
  const auto m = s.merged();
  const ModelParams p = params_of(m);
  const PulseProfile prof = pulse_of(m, p);
  const MaslovReport mr = maslov_index(prof);
  const SpectrumReport sr = point_spectrum(prof, spectrum_options(m));
  const CountAgreement agree = validate_counts(mr, sr);
  const bool stable = mr.prediction && mr.prediction->stability.verdict == StabilityVerdict::stable;
  const EvolveOutcome ev = run_evolution(m, prof, stable ? "noise" : "mode");

  struct Check {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Check> checks;
  checks.push_back({"maslov_matches_singular_limit", mr.agrees_with_prediction,
                    "index " + std::to_string(mr.total_index)});
  checks.push_back({"maslov_matches_spectrum", agree.pass,
                    std::to_string(agree.maslov_index) + " vs " + std::to_string(agree.unstable_count) + " unstable"});
  if (stable) {
    const double last = ev.series.value.back();
    checks.push_back({"pde_perturbation_decays", last < number(m, "amplitude", 1e-3),
                      "final deviation " + format_double(last)});
  } else {
    const double t_final = ev.series.t.back();
    const double rate = growth_rate(ev.series, std::min(20.0, 0.1 * t_final), std::min(60.0, 0.3 * t_final));
    const bool ok = ev.eigenvalue > 0.0 && std::abs(rate - ev.eigenvalue) <= 0.2 * ev.eigenvalue;
    checks.push_back({"pde_growth_matches_eigenvalue", ok,
                      "rate " + format_double(rate) + " vs " + format_double(ev.eigenvalue)});
  }
  bool all = true;
  std::string json = "{\n  \"checks\": [\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Check& c = checks[i];
    all = all && c.pass;
    out << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    json += "    {\"name\": \"" + c.name + "\", \"pass\": " + (c.pass ? "true" : "false") + ", \"detail\": \"" +
            c.detail + "\"}" + (i + 1 < checks.size() ? ",\n" : "\n");
  }
  json += std::string("  ],\n  \"pass\": ") + (all ? "true" : "false") + "\n}\n";
  write_text_file(out_path(s, "report.json"), json);
  write_text_file(out_path(s, "maslov.json"), maslov_json(mr));
  write_text_file(out_path(s, "spectrum.json"), spectrum_json(sr));
  write_text_file(out_path(s, "deviation.csv"), deviation_csv(ev.series));
  if (!all) {
    err << error_json("validation_failed", "one or more cross-validation checks failed");
    return 1;
  }
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Standing pulses of a three-component reaction-diffusion system and their Maslov index",
               "pulsemaslov"};
  app.require_subcommand(1);
  Settings s;
  const std::pair<const char*, const char*> commands[] = {
      {"exist", "roots of the jump condition and stability margins"},
      {"orbit", "singular skeleton (CSV and JSON)"},
      {"pulse", "pulse profile by collocation (CSV and JSON)"},
      {"maslov", "conjugate points and Maslov index"},
      {"spectrum", "point spectrum of the linearization"},
      {"evolve", "PDE time evolution of a perturbed pulse"},
      {"scan", "stability map over an (alpha, beta) grid"},
      {"report", "Maslov index vs spectrum vs PDE for one pulse"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub, s);
    subs[name] = sub;
  }
  subs["scan"]->add_flag("--full", s.full, "run the Maslov and spectrum pipeline in each cell");
  subs["scan"]->add_flag("--no-spectrum", s.no_spectrum, "skip the spectrum in --full runs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    const auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return 2;
  }

  const CLI::App* sub = app.get_subcommands().front();
  s.out_given = sub->count("--out") > 0;
  const std::string name = sub->get_name();
  try {
    if (name == "exist") return cmd_exist(s, out);
    if (name == "orbit") return cmd_orbit(s, out);
    if (name == "pulse") return cmd_pulse(s, out);
    if (name == "maslov") return cmd_maslov(s, out);
    if (name == "spectrum") return cmd_spectrum(s, out);
    if (name == "evolve") return cmd_evolve(s, out);
    if (name == "scan") return cmd_scan(s, out);
    return cmd_report(s, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    if (e.code() == Errc::invalid_params || e.code() == Errc::io_error) {
      err << "error: " << e.what() << '\n';
      return 2;
    }
    err << error_json(e);
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << error_json("io_error", e.what());
    return 1;
  }
}

}  // namespace maslov::cli
