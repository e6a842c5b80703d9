#pragma once

#include <complex>
#include <string>
#include <string_view>

namespace aaphase {

/// 17 significant digits ("%.17g"), enough to read back the same double.
std::string format_real(double value);

/// "re+im i" form, e.g. "0.5+0.2i" or "1-3i"; purely real values print
/// without the imaginary part.
std::string format_complex(std::complex<double> value);

/// Accepts "a", "bi", "a+bi", "a-bi", "a+b i", "i", "-i". Throws
/// Errc::parse_error on anything else.
std::complex<double> parse_complex(std::string_view text);

double parse_real(std::string_view text);

}  // namespace aaphase
