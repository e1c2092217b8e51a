#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace maslov {

enum class Errc {
  invalid_params,
  no_root_near_minus_one,
  not_hyperbolic,
  domain_error,
  newton_diverged,
  mesh_too_coarse,
  rank_deficient,
  integrator_blowup,
  lagrangian_drift,
  cutoff_violation,
  unresolved_crossing,
  degenerate_crossing,
  marginal_case,
  eigensolver_failure,
  translation_not_found,
  cfl_violation,
  blowup,
  io_error,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// front ends can report it in machine-readable form.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

 private:
  Errc code_;
};

}  // namespace maslov
