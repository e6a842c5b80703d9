#include "aaphase/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "aaphase/error.hpp"
#include "aaphase/text.hpp"

namespace aaphase {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr int kResyncInterval = 1024;
// Grid peaks further than this from a full return are not refined.
constexpr double kPeakGate = 1e-3;

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

void check_state(const Eigen::VectorXcd& psi, Eigen::Index dimension) {
  if (psi.size() != dimension) {
    throw Error(Errc::invalid_argument, "state dimension " + std::to_string(psi.size()) +
                                            " does not match Hamiltonian dimension " + std::to_string(dimension));
  }
  if (std::abs(psi.squaredNorm() - 1.0) > kNormTolerance) {
    throw Error(Errc::invalid_argument, "initial state is not normalized (norm^2 = " +
                                            format_real(psi.squaredNorm()) + ")");
  }
}

EvolutionResult evolve_with(std::shared_ptr<const Propagator> propagator, double t_max, long long steps,
                            bool store_states) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(Errc::invalid_argument, "t_max must be positive");
  if (steps < 2) throw Error(Errc::invalid_argument, "evolution needs at least two grid points");
  const auto n = static_cast<std::size_t>(steps);
  const double dt = t_max / static_cast<double>(steps - 1);
  const auto& freqs = propagator->frequencies();
  const auto& weights = propagator->weights();
  const std::size_t k = freqs.size();

  EvolutionResult result;
  result.times.resize(n);
  result.overlaps.resize(n);
  result.fidelity_track.resize(n);

  // Each occupied component rotates by a fixed step per grid point; the
  // running products are re-seeded periodically to bound rounding drift.
  std::vector<std::complex<double>> term(k);
  std::vector<std::complex<double>> step(k);
  for (std::size_t i = 0; i < k; ++i) step[i] = std::polar(1.0, -freqs[i] * dt);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = j + 1 == n ? t_max : static_cast<double>(j) * dt;
    if (j % kResyncInterval == 0) {
      for (std::size_t i = 0; i < k; ++i) term[i] = std::polar(weights[i], -freqs[i] * t);
    }
    std::complex<double> sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      sum += term[i];
      term[i] *= step[i];
    }
    result.times[j] = t;
    result.overlaps[j] = sum;
    result.fidelity_track[j] = std::abs(sum);
  }
  if (store_states) {
    result.states.reserve(n);
    for (double t : result.times) result.states.push_back(propagator->state(t));
  }
  result.propagator = std::move(propagator);
  return result;
}

}  // namespace

DenseHamiltonian::DenseHamiltonian(Eigen::MatrixXcd matrix, double unit, double hbar)
    : matrix_(std::move(matrix)), unit_(unit), hbar_(hbar) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(Errc::invalid_argument, "Hamiltonian must be a non-empty square matrix");
  }
  if (!(unit_ > 0.0) || !std::isfinite(unit_)) throw Error(Errc::invalid_argument, "energy unit must be positive");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw Error(Errc::invalid_argument, "hbar must be positive");
  if (!matrix_.allFinite()) throw Error(Errc::invalid_argument, "Hamiltonian has non-finite entries");
  const double scale = matrix_.cwiseAbs().maxCoeff();
  const double skew = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (skew > kHermitianTolerance * scale) {
    throw Error(Errc::non_hermitian, "Hamiltonian is not Hermitian (max |H - H^dagger| = " + format_real(skew) + ")");
  }
}

DenseHamiltonian DenseHamiltonian::read(std::istream& in) {
  std::ostringstream body;
  Eigen::Index dimension = -1;
  double unit = 1.0;
  double hbar = 1.0;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    if (key == "dimension" || key == "unit" || key == "hbar") {
      std::string value;
      if (!(words >> value)) throw Error(Errc::parse_error, "missing value for '" + key + "'");
      if (key == "dimension") {
        try {
          dimension = std::stol(value);
        } catch (const std::exception&) {
          throw Error(Errc::parse_error, "bad dimension '" + value + "'");
        }
      } else if (key == "unit") {
        unit = parse_real(value);
      } else {
        hbar = parse_real(value);
      }
      continue;
    }
    body << line << '\n';
  }
  if (dimension <= 0) throw Error(Errc::parse_error, "matrix text needs a positive 'dimension'");
  Eigen::MatrixXcd m(dimension, dimension);
  std::istringstream entries(body.str());
  std::string token;
  Eigen::Index count = 0;
  while (entries >> token) {
    if (count >= dimension * dimension) throw Error(Errc::parse_error, "too many matrix entries");
    m(count / dimension, count % dimension) = parse_complex(token);
    ++count;
  }
  if (count != dimension * dimension) {
    throw Error(Errc::parse_error, "expected " + std::to_string(dimension * dimension) + " matrix entries, got " +
                                       std::to_string(count));
  }
  return DenseHamiltonian(std::move(m), unit, hbar);
}

void DenseHamiltonian::write(std::ostream& out) const {
  out << "dimension " << dimension() << '\n';
  out << "unit " << format_real(unit_) << '\n';
  out << "hbar " << format_real(hbar_) << '\n';
  for (Eigen::Index i = 0; i < dimension(); ++i) {
    for (Eigen::Index j = 0; j < dimension(); ++j) {
      if (j) out << ' ';
      out << format_complex(matrix_(i, j));
    }
    out << '\n';
  }
}

double mean_energy(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi) {
  if (psi.size() != hamiltonian.dimension()) throw Error(Errc::invalid_argument, "state dimension mismatch");
  return hamiltonian.unit() * psi.dot(hamiltonian.matrix() * psi).real();
}

Propagator::Propagator(const DenseHamiltonian& hamiltonian, Eigen::VectorXcd psi0)
    : psi0_(std::move(psi0)), unit_(hamiltonian.unit()), hbar_(hamiltonian.hbar()) {
  check_state(psi0_, hamiltonian.dimension());
  const auto& h = hamiltonian.matrix();
  const auto n = static_cast<std::size_t>(h.rows());

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0) {
        parent[find_root(parent, i)] = find_root(parent, j);
      }
    }
  }
  std::vector<std::vector<Eigen::Index>> groups(n);
  for (std::size_t i = 0; i < n; ++i) groups[find_root(parent, i)].push_back(static_cast<Eigen::Index>(i));

  for (auto& indices : groups) {
    if (indices.empty()) continue;
    Block block;
    const auto size = static_cast<Eigen::Index>(indices.size());
    block.matrix.resize(size, size);
    Eigen::VectorXcd local(size);
    for (Eigen::Index a = 0; a < size; ++a) {
      local(a) = psi0_(indices[a]);
      for (Eigen::Index b = 0; b < size; ++b) block.matrix(a, b) = h(indices[a], indices[b]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block.matrix);
    if (solver.info() != Eigen::Success) throw Error(Errc::invalid_argument, "eigendecomposition failed");
    block.energies = solver.eigenvalues();
    block.vectors = solver.eigenvectors();
    block.coefficients = block.vectors.adjoint() * local;
    block.indices = std::move(indices);
    for (Eigen::Index a = 0; a < size; ++a) {
      const double w = std::norm(block.coefficients(a));
      if (w > kOccupationFloor) {
        freqs_.push_back(unit_ * block.energies(a) / hbar_);
        weights_.push_back(w);
      }
    }
    blocks_.push_back(std::move(block));
  }
}

Eigen::VectorXcd Propagator::state(double t) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi0_.size());
  for (const auto& block : blocks_) {
    if (block.coefficients.isZero(0.0)) continue;
    Eigen::VectorXcd rotated(block.coefficients.size());
    for (Eigen::Index a = 0; a < rotated.size(); ++a) {
      rotated(a) = block.coefficients(a) * std::polar(1.0, -unit_ * block.energies(a) * t / hbar_);
    }
    const Eigen::VectorXcd local = block.vectors * rotated;
    for (Eigen::Index a = 0; a < local.size(); ++a) out(block.indices[a]) = local(a);
  }
  return out;
}

std::complex<double> Propagator::overlap(double t) const {
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < freqs_.size(); ++i) sum += std::polar(weights_[i], -freqs_[i] * t);
  return sum;
}

double Propagator::energy(const Eigen::VectorXcd& psi) const {
  if (psi.size() != psi0_.size()) throw Error(Errc::invalid_argument, "state dimension mismatch");
  double sum = 0.0;
  for (const auto& block : blocks_) {
    Eigen::VectorXcd local(static_cast<Eigen::Index>(block.indices.size()));
    for (Eigen::Index a = 0; a < local.size(); ++a) local(a) = psi(block.indices[a]);
    if (local.isZero(0.0)) continue;
    sum += local.dot(block.matrix * local).real();
  }
  return unit_ * sum;
}

double Propagator::bandwidth() const noexcept {
  if (freqs_.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(freqs_.begin(), freqs_.end());
  return *hi - *lo;
}

bool Propagator::stationary() const noexcept {
  double scale = 1.0;
  for (double f : freqs_) scale = std::max(scale, std::abs(f));
  return bandwidth() <= 1e-10 * scale;
}

EvolutionResult evolve(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi0, double t_max, int steps,
                       bool store_states) {
  auto propagator = std::make_shared<const Propagator>(hamiltonian, psi0);
  return evolve_with(std::move(propagator), t_max, steps, store_states);
}

PeriodEstimate detect_period(const EvolutionResult& result, double fidelity_tol, int golden_iterations) {
  if (!result.propagator) throw Error(Errc::invalid_argument, "evolution result has no propagator");
  const auto& f = result.fidelity_track;
  const auto& t = result.times;
  if (f.size() < 3) throw Error(Errc::no_period_detected, "evolution grid too short");
  const Propagator& prop = *result.propagator;
  if (prop.stationary()) return PeriodEstimate{t[1], std::arg(result.overlaps[1]), f[1], true};

  const double gate = std::max(kPeakGate, fidelity_tol);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t j = 1; j + 1 < f.size(); ++j) {
    if (!(f[j - 1] < f[j] && f[j] >= f[j + 1])) continue;
    if (1.0 - f[j] > gate) continue;
    double a = t[j - 1];
    double b = t[j + 1];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = std::abs(prop.overlap(c));
    double fd = std::abs(prop.overlap(d));
    for (int it = 0; it < golden_iterations; ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = std::abs(prop.overlap(c));
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = std::abs(prop.overlap(d));
      }
    }
    double best = 0.5 * (a + b);
    std::complex<double> z = prop.overlap(best);
    for (double cand : {t[j], c, d}) {
      const std::complex<double> zc = prop.overlap(cand);
      if (std::abs(zc) > std::abs(z)) {
        z = zc;
        best = cand;
      }
    }
    if (1.0 - std::abs(z) <= fidelity_tol) return PeriodEstimate{best, std::arg(z), std::abs(z), false};
  }
  throw Error(Errc::no_period_detected,
              "no return to the initial ray within t_max = " + format_real(t.back()) +
                  " (fidelity tolerance " + format_real(fidelity_tol) + ")");
}

double dynamical_phase(const DenseHamiltonian& hamiltonian, const EvolutionResult& result, double tau,
                       int intervals) {
  if (!result.propagator) throw Error(Errc::invalid_argument, "evolution result has no propagator");
  if (!(tau > 0.0)) throw Error(Errc::invalid_argument, "tau must be positive");
  if (intervals < 2 || intervals % 2) throw Error(Errc::invalid_argument, "Simpson rule needs an even panel count");
  const Propagator& prop = *result.propagator;
  const double h = tau / intervals;
  double sum = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double e = prop.energy(prop.state(h * i));
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * e;
  }
  return -(h / 3.0) * sum / hamiltonian.hbar();
}

PhaseReport generic_gamma(const DenseHamiltonian& hamiltonian, const Eigen::VectorXcd& psi0,
                          const OracleOptions& options) {
  if (!(options.t_max > 0.0)) throw Error(Errc::invalid_argument, "oracle needs a positive t_max");
  if (options.points_per_period < 8) throw Error(Errc::invalid_argument, "points_per_period must be >= 8");
  auto propagator = std::make_shared<const Propagator>(hamiltonian, psi0);
  const double mean = propagator->energy(psi0);

  PhaseReport report;
  report.method = Method::oracle;
  report.mean_energy = mean;
  if (propagator->stationary()) {
    report.stationary = true;
    report.gamma = 0.0;
    report.fidelity = 1.0;
    return report;
  }

  const double fastest = kTwoPi / propagator->bandwidth();
  const double wanted = std::ceil(options.t_max / fastest * options.points_per_period) + 1.0;
  if (wanted > static_cast<double>(options.max_steps)) {
    throw Error(Errc::invalid_argument, "evolution grid of " + format_real(wanted) + " points exceeds the limit of " +
                                            std::to_string(options.max_steps));
  }
  const auto steps = std::max<long long>(static_cast<long long>(wanted), options.points_per_period);
  const EvolutionResult result = evolve_with(propagator, options.t_max, steps, false);
  const PeriodEstimate estimate = detect_period(result, options.fidelity_tol, options.golden_iterations);

  const double phi_dyn = dynamical_phase(hamiltonian, result, estimate.tau, options.simpson_intervals);
  const double expected = estimate.tau * mean / hamiltonian.hbar();
  report.tau = estimate.tau;
  report.phi = estimate.phi;
  report.gamma = wrap_two_pi(estimate.phi - phi_dyn);
  report.fidelity = estimate.fidelity;
  report.quadrature_residual = std::abs(-phi_dyn - expected) / std::max(std::abs(expected), 1.0);
  return report;
}

}  // namespace aaphase
