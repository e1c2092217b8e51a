#include "maslov/errors.hpp"

namespace maslov {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_params: return "InvalidParams";
    case Errc::no_root_near_minus_one: return "NoRootNearMinusOne";
    case Errc::not_hyperbolic: return "NotHyperbolic";
    case Errc::domain_error: return "DomainError";
    case Errc::newton_diverged: return "NewtonDiverged";
    case Errc::mesh_too_coarse: return "MeshTooCoarse";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::integrator_blowup: return "IntegratorBlowup";
    case Errc::lagrangian_drift: return "LagrangianDrift";
    case Errc::cutoff_violation: return "CutoffViolation";
    case Errc::unresolved_crossing: return "UnresolvedCrossing";
    case Errc::degenerate_crossing: return "DegenerateCrossing";
    case Errc::marginal_case: return "MarginalCase";
    case Errc::eigensolver_failure: return "EigensolverFailure";
    case Errc::translation_not_found: return "TranslationNotFound";
    case Errc::cfl_violation: return "CFLViolation";
    case Errc::blowup: return "Blowup";
    case Errc::io_error: return "IOError";
  }
  return "Unknown";
}

}  // namespace maslov
