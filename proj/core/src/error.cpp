#include "slowmo/error.hpp"

namespace slowmo {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::validation_failure: return "validation-failure";
    case Errc::wrong_regime: return "wrong-regime";
    case Errc::quadrature_nonconvergence: return "quadrature-nonconvergence";
    case Errc::inversion_tolerance: return "inversion-tolerance-not-met";
    case Errc::target_out_of_range: return "target-out-of-range";
    case Errc::bisection_stall: return "bisection-stall";
    case Errc::epsilon_too_large: return "epsilon-too-large";
    case Errc::empty_set: return "empty-set";
    case Errc::inadmissible_a: return "inadmissible-A";
    case Errc::dt_underflow: return "dt-underflow";
    case Errc::insufficient_samples: return "insufficient-samples";
  }
  return "unknown";
}

}  // namespace slowmo
