#include "maslov/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace maslov {

using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw Error(Errc::io_error, "malformed number for " + key + ": '" + text + "'");
  return v;
}

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json complex_json(std::complex<double> z) { return json::array({num(z.real()), num(z.imag())}); }

json params_json(const ModelParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta},   {"gamma", p.gamma}, {"dd", p.dd},
          {"epsilon", p.epsilon}, {"tau", p.tau}, {"theta", p.theta}};
}

json point_json(const PhasePoint& p) {
  return {{"U", p.U()}, {"P", p.P()}, {"V", p.V()}, {"Q", p.Q()}, {"W", p.W()}, {"R", p.R()}};
}

json conjugate_json(const ConjugatePoint& c) {
  json eig = json::array();
  for (Eigen::Index i = 0; i < c.form_eigenvalues.size(); ++i) eig.push_back(num(c.form_eigenvalues[i]));
  return {{"xi", num(c.xi_star)}, {"U", num(c.u)},  {"P", num(c.p)},
          {"kind", crossing_kind_name(c.kind)}, {"dim", c.dim}, {"signature", c.signature},
          {"regular", c.regular}, {"tangential", c.tangential}, {"det_gap", num(c.det_gap)},
          {"form_eigenvalues", eig}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::io_error, "line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    while (!key.empty() && key.front() == '-') key.erase(key.begin());
    if (key.empty()) throw Error(Errc::io_error, "line " + std::to_string(lineno) + ": empty key");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

ModelParams apply_params(const std::map<std::string, std::string>& values, ModelParams base) {
  const std::pair<const char*, double*> fields[] = {
      {"alpha", &base.alpha}, {"beta", &base.beta}, {"gamma", &base.gamma}, {"dd", &base.dd},
      {"D", &base.dd},        {"epsilon", &base.epsilon}, {"tau", &base.tau}, {"theta", &base.theta}};
  for (const auto& [key, target] : fields)
    if (const auto it = values.find(key); it != values.end()) *target = parse_number(key, it->second);
  return base;
}

ModelParams params_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::io_error, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(Errc::io_error, "parameter JSON must be an object");
  ModelParams p;
  const std::pair<const char*, double*> fields[] = {
      {"alpha", &p.alpha}, {"beta", &p.beta}, {"gamma", &p.gamma}, {"dd", &p.dd},
      {"D", &p.dd},        {"epsilon", &p.epsilon}, {"tau", &p.tau}, {"theta", &p.theta}};
  for (const auto& [key, target] : fields) {
    if (!j.contains(key)) continue;
    if (!j[key].is_number()) throw Error(Errc::io_error, std::string("parameter ") + key + " must be a number");
    *target = j[key].get<double>();
  }
  return p;
}

std::string params_to_json(const ModelParams& params) { return dump(params_json(params)); }

std::string existence_json(const ModelParams& params, const std::vector<JumpSolution>& roots) {
  json rs = json::array();
  for (const JumpSolution& r : roots) {
    const StabilityResult s = stability_criterion(params, r);
    rs.push_back({{"root_index", r.root_index}, {"x_star", r.x_star}, {"residual", r.residual},
                  {"margin", s.margin}, {"verdict", verdict_name(s.verdict)}});
  }
  return dump({{"params", params_json(params)}, {"roots", rs}, {"pulse_exists", !roots.empty()}});
}

std::string orbit_json(const SingularOrbit& orbit) {
  json segs = json::array();
  for (const Segment& s : orbit.segments())
    segs.push_back({{"kind", segment_name(s.kind)}, {"t_min", num(s.t_min)}, {"t_max", num(s.t_max)},
                    {"timescale", s.timescale == Timescale::fast ? "fast" : "slow"}});
  json corners = json::array();
  for (const PhasePoint& c : orbit.corners()) corners.push_back(point_json(c));
  const JumpOffData z = jump_off_data(orbit.x_star(), orbit.params().dd);
  return dump({{"params", params_json(orbit.params())},
               {"x_star", orbit.x_star()},
               {"root_index", orbit.jump().root_index},
               {"jump_off", {{"c1", z.c1}, {"c3", z.c3}, {"V", z.v}, {"W", z.w}}},
               {"segments", segs},
               {"corners", corners}});
}

std::string orbit_csv(const SingularOrbit& orbit, int n) {
  std::ostringstream out;
  out << "segment,index,U,P,V,Q,W,R\n";
  for (const auto& [kind, pts] : orbit.polylines(n)) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out << segment_name(kind) << ',' << i;
      for (int k = 0; k < 6; ++k) out << ',' << format_double(pts[i].y[k]);
      out << '\n';
    }
  }
  return out.str();
}

std::string profile_csv(const PulseProfile& profile) {
  std::ostringstream out;
  out << "xi,x,U,P,V,Q,W,R\n";
  const double eps = profile.params().epsilon;
  for (std::size_t i = 0; i < profile.grid().size(); ++i) {
    const double xi = profile.grid()[i];
    out << format_double(xi) << ',' << format_double(eps * xi);
    for (int k = 0; k < 6; ++k) out << ',' << format_double(profile.values()[i][k]);
    out << '\n';
  }
  return out.str();
}

std::string profile_json(const PulseProfile& profile) {
  const PulseStats& s = profile.stats();
  const PhasePoint mid = profile.value(0.0);
  return dump({{"params", params_json(profile.params())},
               {"x_star", profile.jump().x_star},
               {"root_index", profile.jump().root_index},
               {"half_width", profile.half_width()},
               {"nodes", profile.grid().size()},
               {"front_crossing", profile.front_crossing()},
               {"back_crossing", profile.back_crossing()},
               {"midpoint", point_json(mid)},
               {"reversibility_error", reversibility_error(profile)},
               {"stats",
                {{"newton_iterations", s.newton_iterations},
                 {"continuation_steps", s.continuation_steps},
                 {"front_search_steps", s.front_search_steps},
                 {"remeshes", s.remeshes},
                 {"residual", s.residual},
                 {"max_defect", s.max_defect},
                 {"endpoint_error", s.endpoint_error},
                 {"front_spacing", s.front_spacing}}}});
}

std::string plucker_json(const PluckerVector& p) {
  json c = json::object();
  for (int i = 0; i < 20; ++i) c[PluckerVector::key(i)] = p.coords()[static_cast<std::size_t>(i)];
  return dump({{"basis", p.basis() == PluckerBasis::eta ? "eta" : "standard"},
               {"coords", c},
               {"relation_residual", p.relation_residual()}});
}

std::string maslov_json(const MaslovReport& r) {
  json pts = json::array();
  for (const ConjugatePoint& c : r.interior_points) pts.push_back(conjugate_json(c));
  json j = {{"interior_points", pts},
            {"endpoint", conjugate_json(r.endpoint)},
            {"endpoint_positive_count", r.endpoint_positive_count},
            {"total_index", r.total_index},
            {"xi_infinity", r.xi_infinity},
            {"reference_singular_gap", r.reference_singular_gap},
            {"max_lagrangian_residual", r.max_lagrangian_residual},
            {"derivative_fit_residual", r.derivative_fit_residual},
            {"agrees_with_prediction", r.agrees_with_prediction}};
  if (r.prediction) {
    const SingularLimitReport& s = *r.prediction;
    json inter = json::array();
    for (const PredictedCrossing& c : s.interior)
      inter.push_back({{"kind", crossing_kind_name(c.kind)}, {"signature", c.signature}});
    j["prediction"] = {{"margin", s.stability.margin},
                       {"verdict", verdict_name(s.stability.verdict)},
                       {"interior", inter},
                       {"plateau_crossings", s.plateau_crossings},
                       {"plateau_factor", s.plateau_factor},
                       {"plateau_factor_closed", s.plateau_factor_closed},
                       {"corner_crossing", s.corner_crossing},
                       {"endpoint_positive", s.endpoint_positive},
                       {"predicted_index", s.predicted_index}};
  } else {
    j["prediction"] = nullptr;
  }
  return dump(j);
}

std::string spectrum_json(const SpectrumReport& r) {
  json eig = json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
    eig.push_back({{"value", complex_json(r.eigenvalues[i])}, {"complex_pair", static_cast<bool>(r.in_complex_pair[i])}});
  json unstable = json::array();
  for (const auto& z : r.unstable_eigenvalues) unstable.push_back(complex_json(z));
  return dump({{"eigenvalues", eig},
               {"translation_eigenvalue", complex_json(r.translation_eigenvalue)},
               {"translation_index", r.translation_index},
               {"translation_overlap", num(r.translation_overlap)},
               {"translation_gap", num(r.translation_gap)},
               {"unstable_count", r.unstable_count},
               {"unstable_eigenvalues", unstable},
               {"essential_edge", num(r.essential_edge)},
               {"discretization",
                {{"nodes", r.nodes},
                 {"half_width", r.half_width},
                 {"boundary", boundary_name(r.boundary)},
                 {"min_spacing", r.min_spacing}}},
               {"richardson",
                {{"translation_refined", num(r.translation_refined)},
                 {"ratio", num(r.richardson_ratio)},
                 {"error_estimate", num(r.mesh_error_estimate)}}},
               {"max_outer_mass", num(r.max_outer_mass)}});
}

std::string corner_json(const CornerReport& r) {
  return dump({{"delta2", r.delta2},
               {"delta3", r.delta3},
               {"delta6", r.delta6},
               {"has_root", r.has_root},
               {"root", num(r.root)},
               {"closed_form_error", r.closed_form_error},
               {"z_distance", r.z_distance},
               {"converged", r.converged}});
}

std::string deviation_csv(const DeviationSeries& s) {
  std::ostringstream out;
  out << "t,deviation,shift\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    out << format_double(s.t[i]) << ',' << format_double(s.value[i]) << ',' << format_double(s.shift[i]) << '\n';
  return out.str();
}

std::string state_csv(const SimState& s) {
  std::ostringstream out;
  out << "x,U,V,W\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto j = static_cast<Eigen::Index>(i);
    out << format_double(s.x[i]) << ',' << format_double(s.u[j]) << ',' << format_double(s.v[j]) << ','
        << format_double(s.w[j]) << '\n';
  }
  return out.str();
}

std::string error_json(const Error& e) { return error_json(e.name(), e.what()); }

std::string error_json(std::string_view name, std::string_view message) {
  return json({{"error", name}, {"message", message}}).dump() + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path);
  out << content;
  if (!out) throw Error(Errc::io_error, "write failed for " + path);
}

}  // namespace maslov
