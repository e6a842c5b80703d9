#include "aaphase/models.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>

#include <Eigen/Eigenvalues>

#include "aaphase/error.hpp"
#include "aaphase/report.hpp"
#include "aaphase/text.hpp"

namespace aaphase {

namespace {

constexpr double kNormTolerance = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::invalid_argument, what);
}

double mass(const std::vector<Complex>& amplitudes) {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return sum;
}

void require_normalized(const std::vector<Complex>& amplitudes, const std::string& name) {
  require(!amplitudes.empty(), name + " amplitudes are empty");
  const double m = mass(amplitudes);
  if (std::abs(m - 1.0) > kNormTolerance) {
    throw Error(Errc::invalid_argument, name + " amplitudes are not normalized (sum |c|^2 = " + format_real(m) + ")");
  }
}

double number_mean(const std::vector<Complex>& amplitudes) {
  double sum = 0.0;
  for (std::size_t n = 0; n < amplitudes.size(); ++n) sum += static_cast<double>(n) * std::norm(amplitudes[n]);
  return sum;
}

// Unnormalized coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!).
std::vector<Complex> coherent_raw(Complex alpha, int size) {
  std::vector<Complex> c(static_cast<std::size_t>(size));
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < size; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return c;
}

double poisson_tail(double mean, int from) {
  // Weight of n >= from for a Poisson distribution, summed term by term.
  double term = std::exp(-mean);
  for (int n = 1; n <= from; ++n) term *= mean / n;
  if (from == 0) return 1.0;
  // term now holds P(from); accumulate upward until negligible.
  double sum = 0.0;
  for (int n = from; n < from + 100000; ++n) {
    sum += term;
    term *= mean / (n + 1);
    if (n + 1 > mean && term < 1e-20 * sum) break;
    if (term == 0.0) break;
  }
  return sum;
}

void check_tail(double tail, int truncation, const std::string& what) {
  if (tail >= kTailMassLimit) {
    throw Error(Errc::truncation_too_small, what + ": truncation " + std::to_string(truncation) +
                                                " leaves tail mass " + format_real(tail) +
                                                " >= 1e-10; increase the truncation");
  }
}

std::vector<Complex> renormalized(std::vector<Complex> v) {
  const double s = std::sqrt(mass(v));
  for (auto& x : v) x /= s;
  return v;
}

std::string label3(int a, int b, int c) {
  return std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
}

}  // namespace

DenseModel dense_from_spectrum(const Spectrum& spectrum, const StateDecomposition& state) {
  state.check_paired(spectrum);
  const auto n = static_cast<Eigen::Index>(spectrum.levels().size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Level& level = spectrum.levels()[static_cast<std::size_t>(i)];
    h(i, i) = level.value;
    for (const auto& c : state.entries()) {
      if (c.label == level.label) psi(i) = c.amplitude;
    }
  }
  psi /= psi.norm();
  return DenseModel{DenseHamiltonian(std::move(h), spectrum.unit(), spectrum.hbar()), std::move(psi)};
}

ExactModel exact_from_dense(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi0,
                            const RationalizeOptions& options, double degeneracy) {
  if (psi0.size() != hamiltonian.dimension()) throw Error(Errc::invalid_argument, "state dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian.matrix());
  if (solver.info() != Eigen::Success) throw Error(Errc::invalid_argument, "eigendecomposition failed");
  const Eigen::VectorXd& e = solver.eigenvalues();
  const Eigen::VectorXcd c = solver.eigenvectors().adjoint() * psi0;
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());

  std::vector<Level> levels;
  std::vector<Component> components;
  Eigen::Index i = 0;
  while (i < e.size()) {
    Eigen::Index j = i;
    double weight = 0.0;
    double sum = 0.0;
    while (j < e.size() && e(j) - e(i) <= degeneracy * scale) {
      weight += std::norm(c(j));
      sum += e(j);
      ++j;
    }
    std::string label = "e" + std::to_string(levels.size());
    if (weight > 0.0) components.push_back({label, std::sqrt(weight)});
    levels.push_back(Level::from_real(std::move(label), sum / static_cast<double>(j - i), options));
    i = j;
  }
  return ExactModel{Spectrum(hamiltonian.unit(), std::move(levels), hamiltonian.hbar()),
                    StateDecomposition(std::move(components))};
}

CoherentExpansion coherent_amplitudes(Complex alpha, int truncation) {
  require(truncation >= 1, "coherent truncation must be >= 1");
  require(std::isfinite(alpha.real()) && std::isfinite(alpha.imag()), "coherent amplitude must be finite");
  CoherentExpansion out;
  out.tail_mass = poisson_tail(std::norm(alpha), truncation);
  check_tail(out.tail_mass, truncation, "coherent state |alpha| = " + format_real(std::abs(alpha)));
  out.amplitudes = renormalized(coherent_raw(alpha, truncation));
  return out;
}

CoherentExpansion displaced_amplitudes(const std::vector<Complex>& state, Complex d, int truncation) {
  require(truncation >= 1, "displacement truncation must be >= 1");
  require(!state.empty(), "state to displace is empty");
  const double r = std::abs(d);
  const int work = truncation + static_cast<int>(state.size()) + 64 + static_cast<int>(std::ceil(4.0 * r * r + 12.0 * r));
  // D(d)|n> = (c^dagger - d^*)^n / sqrt(n!) |d>
  std::vector<Complex> v = coherent_raw(d, work);
  std::vector<Complex> acc(static_cast<std::size_t>(work));
  for (std::size_t n = 0; n < state.size(); ++n) {
    if (n > 0) {
      std::vector<Complex> next(v.size());
      for (int k = 0; k < work; ++k) {
        Complex up = k > 0 ? std::sqrt(static_cast<double>(k)) * v[k - 1] : Complex{};
        next[k] = (up - std::conj(d) * v[k]) / std::sqrt(static_cast<double>(n));
      }
      v = std::move(next);
    }
    for (int k = 0; k < work; ++k) acc[k] += state[n] * v[k];
  }
  CoherentExpansion out;
  for (int k = truncation; k < work; ++k) out.tail_mass += std::norm(acc[k]);
  check_tail(out.tail_mass, truncation, "displacement |d| = " + format_real(r));
  acc.resize(static_cast<std::size_t>(truncation));
  out.amplitudes = renormalized(std::move(acc));
  return out;
}

// Spin-1/2

ExactModel spin_half(const SpinHalfParams& params) {
  require(params.mu_B0 > 0.0 && std::isfinite(params.mu_B0), "mu_B0 must be positive");
  require(params.theta >= 0.0 && params.theta <= kPi, "theta must lie in [0, pi]");
  Spectrum spectrum(params.mu_B0, {Level::exactly("up", Rational(-1)), Level::exactly("down", Rational(1))});
  StateDecomposition state({{"up", std::cos(params.theta / 2)}, {"down", std::sin(params.theta / 2)}});
  return ExactModel{std::move(spectrum), std::move(state)};
}

DenseModel spin_half_dense(const SpinHalfParams& params) {
  const ExactModel model = spin_half(params);
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
  h(0, 0) = -1.0;
  h(1, 1) = 1.0;
  Eigen::VectorXcd psi(2);
  psi << std::cos(params.theta / 2), std::sin(params.theta / 2);
  return DenseModel{DenseHamiltonian(std::move(h), params.mu_B0), std::move(psi)};
}

double spin_half_gamma_closed_form(const SpinHalfParams& params) {
  return wrap_two_pi(kPi * (1.0 - std::cos(params.theta)));
}

// Free field

ExactModel free_field(const FreeFieldParams& params) {
  require(params.omega > 0.0 && std::isfinite(params.omega), "omega must be positive");
  require(!params.amplitudes.empty(), "free field needs at least one occupied number state");
  int top = 0;
  std::set<int> seen;
  std::vector<Component> components;
  for (const auto& a : params.amplitudes) {
    require(a.n >= 0, "photon numbers must be non-negative");
    require(seen.insert(a.n).second, "photon number " + std::to_string(a.n) + " listed twice");
    top = std::max(top, a.n);
    components.push_back({"n=" + std::to_string(a.n), a.amplitude});
  }
  std::vector<Level> levels;
  levels.reserve(static_cast<std::size_t>(top) + 1);
  for (int n = 0; n <= top; ++n) levels.push_back(Level::exactly("n=" + std::to_string(n), Rational(n)));
  return ExactModel{Spectrum(params.omega, std::move(levels)), StateDecomposition(std::move(components))};
}

DenseModel free_field_dense(const FreeFieldParams& params) {
  const ExactModel model = free_field(params);
  return dense_from_spectrum(model.spectrum, model.state);
}

FreeFieldParams free_field_coherent(double omega, Complex alpha, int truncation) {
  FreeFieldParams params;
  params.omega = omega;
  const auto expansion = coherent_amplitudes(alpha, truncation);
  for (int n = 0; n < truncation; ++n) {
    if (expansion.amplitudes[n] != 0.0) params.amplitudes.push_back({n, expansion.amplitudes[n]});
  }
  return params;
}

// Two-mirror cavity

double TwoMirrorParams::k() const { return std::sqrt(k2.to_double()); }
double TwoMirrorParams::omega_f() const { return r.to_double() * omega_m; }
double TwoMirrorParams::g() const { return k() * omega_m; }

namespace {

void validate(const TwoMirrorParams& p) {
  require(p.omega_m > 0.0 && std::isfinite(p.omega_m), "omega_m must be positive");
  require(p.k2.sign() >= 0, "k2 must be non-negative");
  require(p.mirror_truncation >= 1, "mirror_truncation must be >= 1");
  require_normalized(p.field_amplitudes, "field");
}

void validate(const ThreeMirrorParams& p) {
  for (double w : {p.omega_D, p.omega_S, p.omega_m}) require(w > 0.0 && std::isfinite(w), "frequencies must be positive");
  require(std::isfinite(p.C_D) && std::isfinite(p.C_S), "couplings must be finite");
  require_normalized(p.A, "field a");
  require_normalized(p.B, "field b");
  require_normalized(p.M, "mirror");
}

}  // namespace

ExactModel two_mirror_spectrum(const TwoMirrorParams& params) {
  validate(params);
  const int nf = static_cast<int>(params.field_amplitudes.size());
  const int mt = params.mirror_truncation;
  const double k = params.k();
  std::vector<Level> levels;
  std::vector<Component> components;
  levels.reserve(static_cast<std::size_t>(nf) * mt);
  for (int n = 0; n < nf; ++n) {
    const Complex cn = params.field_amplitudes[n];
    std::vector<Complex> displaced;
    if (cn != 0.0) {
      const double kn = k * n;
      const Complex phase = std::polar(1.0, kn * params.beta.imag());
      displaced = coherent_amplitudes(params.beta - kn, mt).amplitudes;
      for (auto& a : displaced) a *= cn * phase;
    }
    for (int m = 0; m < mt; ++m) {
      const Rational lambda = params.r * Rational(n) + Rational(m) - params.k2 * Rational(n * n);
      std::string label = std::to_string(n) + "," + std::to_string(m);
      if (cn != 0.0) components.push_back({label, displaced[m]});
      levels.push_back(Level::exactly(std::move(label), lambda));
    }
  }
  return ExactModel{Spectrum(params.omega_m, std::move(levels)), StateDecomposition(std::move(components))};
}

DenseModel two_mirror_dense(const TwoMirrorParams& params) {
  validate(params);
  const int nf = static_cast<int>(params.field_amplitudes.size());
  const int mt = params.mirror_truncation;
  const Eigen::Index dim = static_cast<Eigen::Index>(nf) * mt;
  const double r = params.r.to_double();
  const double k = params.k();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n < nf; ++n) {
    for (int m = 0; m < mt; ++m) {
      const Eigen::Index i = static_cast<Eigen::Index>(n) * mt + m;
      h(i, i) = r * n + m;
      if (m + 1 < mt && n > 0) {
        h(i, i + 1) = -k * n * std::sqrt(static_cast<double>(m + 1));
        h(i + 1, i) = h(i, i + 1);
      }
    }
  }
  const auto mirror = coherent_amplitudes(params.beta, mt).amplitudes;
  Eigen::VectorXcd psi(dim);
  for (int n = 0; n < nf; ++n) {
    for (int m = 0; m < mt; ++m) psi(static_cast<Eigen::Index>(n) * mt + m) = params.field_amplitudes[n] * mirror[m];
  }
  return DenseModel{DenseHamiltonian(std::move(h), params.omega_m), std::move(psi)};
}

double two_mirror_mean_energy(const TwoMirrorParams& params) {
  validate(params);
  const double n_mean = number_mean(params.field_amplitudes);
  const double r = params.r.to_double();
  return params.omega_m * ((r - 2.0 * params.k() * params.beta.real()) * n_mean + std::norm(params.beta));
}

double two_mirror_gamma_closed_form(const TwoMirrorParams& params, int p) {
  require(p >= 1, "p must be >= 1");
  return wrap_two_pi(kTwoPi * (1.0 + p * two_mirror_mean_energy(params) / params.omega_m));
}

double two_mirror_gamma_printed_form(const TwoMirrorParams& params, int p) {
  require(p >= 1, "p must be >= 1");
  const double factor = static_cast<double>(p) / params.omega_m;
  return wrap_two_pi(kTwoPi * (1.0 + factor * two_mirror_mean_energy(params) / params.omega_m));
}

// Three-mirror cavity

ThreeMirrorParams three_mirror_coherent(double omega_D, double omega_S, double omega_m, double C_D, double C_S,
                                        Complex alpha, Complex beta, Complex mu, int truncation_a, int truncation_b,
                                        int truncation_m) {
  ThreeMirrorParams p;
  p.omega_D = omega_D;
  p.omega_S = omega_S;
  p.omega_m = omega_m;
  p.C_D = C_D;
  p.C_S = C_S;
  p.A = coherent_amplitudes(alpha, truncation_a).amplitudes;
  p.B = coherent_amplitudes(beta, truncation_b).amplitudes;
  p.M = coherent_amplitudes(mu, truncation_m).amplitudes;
  return p;
}

DenseModel three_mirror_dense(const ThreeMirrorParams& params) {
  validate(params);
  const int na = static_cast<int>(params.A.size());
  const int nb = static_cast<int>(params.B.size());
  const int nm = static_cast<int>(params.M.size());
  const Eigen::Index dim = static_cast<Eigen::Index>(na) * nb * nm;
  const double wd = params.omega_D / params.omega_m;
  const double ws = params.omega_S / params.omega_m;
  const double cd = params.C_D / params.omega_m;
  const double cs = params.C_S / params.omega_m;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::VectorXcd psi(dim);
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nb; ++b) {
      const Eigen::Index base = (static_cast<Eigen::Index>(a) * nb + b) * nm;
      for (int c = 0; c < nm; ++c) {
        const Eigen::Index i = base + c;
        h(i, i) = wd * a + ws * b + (1.0 + cs * b) * c + 0.5 * cs * b;
        if (c + 1 < nm && a > 0 && cd != 0.0) {
          h(i, i + 1) = cd * a * std::sqrt(static_cast<double>(c + 1));
          h(i + 1, i) = h(i, i + 1);
        }
        if (c + 2 < nm && b > 0 && cs != 0.0) {
          h(i, i + 2) = 0.5 * cs * b * std::sqrt(static_cast<double>((c + 1) * (c + 2)));
          h(i + 2, i) = h(i, i + 2);
        }
        psi(i) = params.A[a] * params.B[b] * params.M[c];
      }
    }
  }
  return DenseModel{DenseHamiltonian(std::move(h), params.omega_m), std::move(psi)};
}

ExactModel three_mirror_spectrum(const ThreeMirrorParams& params, const RationalizeOptions& options) {
  validate(params);
  if (params.C_S != 0.0) {
    throw Error(Errc::incommensurable_input, "exact three-mirror spectrum requires C_S = 0; use the dense oracle");
  }
  const int na = static_cast<int>(params.A.size());
  const int nb = static_cast<int>(params.B.size());
  const int nm = static_cast<int>(params.M.size());
  const double wd = params.omega_D / params.omega_m;
  const double ws = params.omega_S / params.omega_m;
  const double cd = params.C_D / params.omega_m;

  std::optional<Rational> rd, rs, rc;
  try {
    rd = rationalize(wd, options.max_denominator, options.tolerance);
    rs = rationalize(ws, options.max_denominator, options.tolerance);
    rc = rationalize(cd * cd, options.max_denominator, options.tolerance);
  } catch (const Error&) {
    rd.reset();
  }
  const bool exact = rd && rs && rc;

  std::vector<Level> levels;
  std::vector<Component> components;
  levels.reserve(static_cast<std::size_t>(na) * nb * nm);
  for (int a = 0; a < na; ++a) {
    // Mirror eigenvectors in block a are D(-d)|n_c> with d = C_D a / omega_m.
    std::vector<Complex> mirror;
    if (params.A[a] != 0.0) mirror = displaced_amplitudes(params.M, cd * a, nm).amplitudes;
    for (int b = 0; b < nb; ++b) {
      for (int c = 0; c < nm; ++c) {
        std::string label = label3(a, b, c);
        if (exact) {
          levels.push_back(Level::exactly(label, *rd * Rational(a) + *rs * Rational(b) + Rational(c) -
                                                     *rc * Rational(a * a)));
        } else if (a == 0 && b == 0) {
          levels.push_back(Level::exactly(label, Rational(c)));
        } else {
          levels.push_back(Level::inexact(label, wd * a + ws * b + c - cd * cd * a * a));
        }
        const Complex amp = params.A[a] * params.B[b];
        if (amp != 0.0 && mirror[c] != 0.0) components.push_back({std::move(label), amp * mirror[c]});
      }
    }
  }
  return ExactModel{Spectrum(params.omega_m, std::move(levels)), StateDecomposition(std::move(components))};
}

double three_mirror_chi(const ThreeMirrorParams& params, int n_b) {
  return std::sqrt(params.omega_m * (params.omega_m + 2.0 * params.C_S * n_b));
}

double three_mirror_mean_energy(const ThreeMirrorParams& params) {
  validate(params);
  const double a = number_mean(params.A);
  const double b = number_mean(params.B);
  const double m = number_mean(params.M);
  double x = 0.0;  // <c + c^dagger>
  double y = 0.0;  // <c^2 + c^dagger^2>
  const auto& M = params.M;
  for (std::size_t n = 0; n + 1 < M.size(); ++n) {
    x += 2.0 * std::sqrt(static_cast<double>(n + 1)) * (std::conj(M[n]) * M[n + 1]).real();
  }
  for (std::size_t n = 0; n + 2 < M.size(); ++n) {
    y += 2.0 * std::sqrt(static_cast<double>((n + 1) * (n + 2))) * (std::conj(M[n]) * M[n + 2]).real();
  }
  return params.omega_D * a + params.omega_S * b + params.C_D * a * x + params.omega_m * m + params.C_S * b * m +
         0.5 * params.C_S * b * (1.0 + y);
}

double three_mirror_gamma_closed_form(const ThreeMirrorParams& params, int p) {
  require(p >= 1, "p must be >= 1");
  return wrap_two_pi(kTwoPi * (1.0 + p * three_mirror_mean_energy(params) / params.omega_m));
}

double three_mirror_gamma_coherent(const ThreeMirrorParams& params, Complex alpha, Complex beta, Complex mu, int p) {
  require(p >= 1, "p must be >= 1");
  const double wm = params.omega_m;
  const double re_mu = mu.real();
  const double bracket = std::norm(alpha) * (params.omega_D / wm + 2.0 * (params.C_D / wm) * re_mu) +
                         std::norm(beta) * (params.omega_S / wm + (params.C_S / wm) * (0.5 + 2.0 * re_mu * re_mu)) +
                         std::norm(mu);
  return wrap_two_pi(kTwoPi * (1.0 + p * bracket));
}

}  // namespace aaphase
