#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace slowmo {

enum class Errc {
  invalid_argument,
  validation_failure,
  wrong_regime,
  quadrature_nonconvergence,
  inversion_tolerance,
  target_out_of_range,
  bisection_stall,
  epsilon_too_large,
  empty_set,
  inadmissible_a,
  dt_underflow,
  insufficient_samples,
};

std::string_view to_string(Errc code) noexcept;

/// True for errors caused by bad input rather than a numerical breakdown.
constexpr bool is_validation(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::validation_failure:
    case Errc::wrong_regime:
    case Errc::target_out_of_range:
    case Errc::epsilon_too_large:
    case Errc::inadmissible_a:
    case Errc::insufficient_samples:
    case Errc::empty_set:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace slowmo
