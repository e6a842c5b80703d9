#pragma once

#include <stdexcept>
#include <string>

namespace aaphase {

enum class Errc {
  invalid_argument,
  empty_spacing_set,
  incommensurable_input,
  state_spectrum_mismatch,
  non_cyclic,
  no_finite_period,
  inconsistent_phase,
  truncation_too_small,
  non_hermitian,
  no_period_detected,
  parse_error,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace aaphase
