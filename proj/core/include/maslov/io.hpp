#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "maslov/corner.hpp"
#include "maslov/errors.hpp"
#include "maslov/maslov.hpp"
#include "maslov/pde.hpp"
#include "maslov/spectrum.hpp"

namespace maslov {

/// key=value lines; '#' starts a comment, blank lines are skipped, keys may
/// carry leading dashes. Throws Error(io_error) on a line without '='.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Applies alpha, beta, gamma, dd (or D), epsilon, tau, theta from `values` to
/// `base`; other keys are ignored. Throws Error(io_error) on a malformed number.
ModelParams apply_params(const std::map<std::string, std::string>& values, ModelParams base = {});

ModelParams params_from_json(std::string_view json);
std::string params_to_json(const ModelParams& params);

/// Roots with their stability margins and verdicts.
std::string existence_json(const ModelParams& params, const std::vector<JumpSolution>& roots);

std::string orbit_json(const SingularOrbit& orbit);
/// segment,t,U,P,V,Q,W,R with n samples per segment.
std::string orbit_csv(const SingularOrbit& orbit, int n = 200);

/// xi,x,U,P,V,Q,W,R at the profile nodes.
std::string profile_csv(const PulseProfile& profile);
/// Parameters, solver statistics and crossing positions.
std::string profile_json(const PulseProfile& profile);

std::string plucker_json(const PluckerVector& p);
std::string maslov_json(const MaslovReport& report);
std::string spectrum_json(const SpectrumReport& report);
std::string corner_json(const CornerReport& report);

/// t,deviation,shift
std::string deviation_csv(const DeviationSeries& series);
/// x,U,V,W
std::string state_csv(const SimState& state);

/// {"error": name, "message": what}
std::string error_json(const Error& e);
std::string error_json(std::string_view name, std::string_view message);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// RFC 4180 quoting of one field.
std::string csv_field(std::string_view s);
/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace maslov
