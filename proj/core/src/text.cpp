#include "aaphase/text.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "aaphase/error.hpp"

namespace aaphase {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::empty_spacing_set: return "empty spacing set";
    case Errc::incommensurable_input: return "incommensurable input";
    case Errc::state_spectrum_mismatch: return "state/spectrum mismatch";
    case Errc::non_cyclic: return "non-cyclic";
    case Errc::no_finite_period: return "no finite period";
    case Errc::inconsistent_phase: return "inconsistent total phase";
    case Errc::truncation_too_small: return "truncation too small";
    case Errc::non_hermitian: return "non-Hermitian matrix";
    case Errc::no_period_detected: return "no period detected";
    case Errc::parse_error: return "parse error";
  }
  return "unknown";
}

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

bool parse_double_exact(const std::string& s, double& out) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

}  // namespace

std::string format_real(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_complex(std::complex<double> value) {
  if (value.imag() == 0.0) return format_real(value.real());
  std::string out = value.real() == 0.0 ? std::string{} : format_real(value.real());
  const std::string im = format_real(value.imag());
  if (!out.empty() && im.front() != '-') out += '+';
  return out + im + "i";
}

double parse_real(std::string_view text) {
  double value = 0.0;
  if (!parse_double_exact(strip_spaces(text), value)) {
    throw Error(Errc::parse_error, "malformed real '" + std::string(text) + "'");
  }
  return value;
}

std::complex<double> parse_complex(std::string_view text) {
  const std::string s = strip_spaces(text);
  const auto fail = [&]() -> std::complex<double> {
    throw Error(Errc::parse_error, "malformed complex '" + std::string(text) + "'");
  };
  if (s.empty()) return fail();
  if (s.back() != 'i') {
    double re = 0.0;
    if (!parse_double_exact(s, re)) return fail();
    return {re, 0.0};
  }
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not the leading sign and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  const auto imag_of = [&](const std::string& part, double& out) {
    if (part.empty() || part == "+") {
      out = 1.0;
      return true;
    }
    if (part == "-") {
      out = -1.0;
      return true;
    }
    return parse_double_exact(part, out);
  };
  double re = 0.0;
  double im = 0.0;
  if (split == std::string::npos) {
    if (!imag_of(body, im)) return fail();
  } else {
    if (!parse_double_exact(body.substr(0, split), re) || !imag_of(body.substr(split), im)) return fail();
  }
  return {re, im};
}

}  // namespace aaphase
