#include "aaphase/constraint_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "aaphase/error.hpp"
#include "aaphase/report.hpp"

namespace aaphase {

namespace {

Rational canonical_half_turns(const Rational& x) {
  const BigInt k = ((x - Rational(1)) / Rational(2)).ceil();
  return x - Rational(2 * k);
}

BigInt branch_weight(const CyclicityCandidate& c) {
  return boost::multiprecision::abs(c.n) + boost::multiprecision::abs(c.m);
}

bool simpler(const CyclicityCandidate& a, const CyclicityCandidate& b) {
  const BigInt wa = branch_weight(a);
  const BigInt wb = branch_weight(b);
  if (wa != wb) return wa < wb;
  if (a.n != b.n) return a.n < b.n;
  return a.m < b.m;
}

}  // namespace

PartialSpectrum::PartialSpectrum(double unit, std::vector<Level> known) : unit_(unit), known_(std::move(known)) {
  if (!(unit_ > 0.0) || !std::isfinite(unit_)) throw Error(Errc::invalid_argument, "spectrum unit must be positive");
  if (known_.empty()) throw Error(Errc::invalid_argument, "partial spectrum needs at least one known eigenvalue");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < known_.size(); ++i) {
    if (!labels.insert(known_[i].label).second) {
      throw Error(Errc::invalid_argument, "duplicate level label '" + known_[i].label + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const bool equal = known_[i].exact && known_[j].exact ? *known_[i].exact == *known_[j].exact
                                                            : known_[i].value == known_[j].value;
      if (equal) throw Error(Errc::invalid_argument, "known eigenvalues must be distinct");
    }
  }
}

std::vector<CyclicityCandidate> enumerate_candidates(const PartialSpectrum& spectrum, int n_range) {
  if (spectrum.known().size() < 2) throw Error(Errc::invalid_argument, "need two known eigenvalues");
  if (n_range < 1) throw Error(Errc::invalid_argument, "n_range must be >= 1");
  const Level& first = spectrum.known()[0];
  const Level& second = spectrum.known()[1];
  if (!first.exact || !second.exact) {
    throw Error(Errc::non_cyclic, "no cyclic motion possible: eigenvalue ratio is not rational");
  }
  const Rational& l1 = *first.exact;
  const Rational& l2 = *second.exact;
  const Rational gap = l1 - l2;

  std::map<std::pair<Rational, Rational>, CyclicityCandidate> classes;
  for (int n = -n_range; n <= n_range; ++n) {
    for (int m = -n_range; m <= n_range; ++m) {
      if (n == m) continue;
      Rational tau = Rational(n - m) / gap;
      if (tau.sign() <= 0) continue;
      Rational phi = Rational(2) * (l1 * Rational(m) - l2 * Rational(n)) / gap;
      Rational canonical = canonical_half_turns(phi);
      CyclicityCandidate c{n, m, std::move(phi), canonical, tau};
      auto key = std::make_pair(std::move(tau), std::move(canonical));
      auto it = classes.find(key);
      if (it == classes.end()) {
        classes.emplace(std::move(key), std::move(c));
        continue;
      }
      CyclicityCandidate& held = it->second;
      const bool c_canonical = c.phi == c.phi_canonical;
      const bool held_canonical = held.phi == held.phi_canonical;
      if ((c_canonical && !held_canonical) || (c_canonical == held_canonical && simpler(c, held))) held = std::move(c);
    }
  }

  std::vector<CyclicityCandidate> out;
  out.reserve(classes.size());
  for (auto& [key, c] : classes) out.push_back(std::move(c));
  std::stable_sort(out.begin(), out.end(), [](const CyclicityCandidate& a, const CyclicityCandidate& b) {
    if (a.tau != b.tau) return a.tau < b.tau;
    return simpler(a, b);
  });
  return out;
}

GaugeFixedCandidate gauge_to_zero_phi(const CyclicityCandidate& candidate, const PartialSpectrum& spectrum) {
  if (candidate.tau.sign() <= 0) throw Error(Errc::invalid_argument, "candidate period must be positive");
  const Level& first = spectrum.known().front();
  if (!first.exact) throw Error(Errc::non_cyclic, "no cyclic motion possible: eigenvalue is not rational");
  // Shifting every eigenvalue by c changes phi by -c*tau/hbar; in these units
  // that is -2*c*tau half-turns.
  const Rational shift = candidate.phi / (Rational(2) * candidate.tau);
  const Rational lambda1 = *first.exact + shift;
  return GaugeFixedCandidate{candidate, shift, lambda1, candidate.tau};
}

bool constrain_unknown(const GaugeFixedCandidate& fixed, const Rational& trial) {
  const Rational shifted = trial + fixed.shift;
  if (fixed.lambda1.is_zero()) return (shifted * fixed.tau).is_integer();
  // L_k * n = L1 * k'  <=>  k' = L_k * n / L1 is an integer.
  const Rational k_prime = shifted * Rational(fixed.candidate.n) / fixed.lambda1;
  return k_prime.is_integer();
}

double gamma_for_candidate(const GaugeFixedCandidate& fixed, double mean_energy) {
  const double shifted_mean = mean_energy + fixed.shift.to_double();
  return wrap_two_pi(kTwoPi * fixed.tau.to_double() * shifted_mean);
}

std::vector<Rational> gamma_candidates(const Rational& mean_over_lambda1, const std::vector<BigInt>& branches) {
  std::set<Rational> distinct;
  for (const auto& n : branches) distinct.insert((Rational(n) * mean_over_lambda1).frac());
  return {distinct.begin(), distinct.end()};
}

}  // namespace aaphase
