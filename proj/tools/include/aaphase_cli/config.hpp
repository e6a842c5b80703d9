#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aaphase/constraint_solver.hpp"
#include "aaphase/models.hpp"

namespace aaphase::cli {

enum class ModelKind { spin_half, free_field, two_mirror, three_mirror, raw_spectrum, dense_matrix, partial_spectrum };

const char* to_string(ModelKind kind) noexcept;

struct RunOptions {
  int n_range = kDefaultNRange;
  std::optional<double> fidelity_tol;  ///< default depends on the model
  std::optional<double> t_max;
  double tolerance = 1e-6;             ///< verify pass threshold
  int points_per_period = 4096;
  RationalizeOptions rationalize;
};

/// One concrete system to analyze. Sweeps (a list of spin angles) expand to
/// several cases.
struct Case {
  std::string name;
  std::optional<ExactModel> exact;
  std::optional<DenseModel> dense;
  /// Closed-form geometric phase, when the model has one. It refers to the
  /// loop of duration `closed_form_loop` (units of 2*pi*hbar/unit) or, when
  /// that is unset, to one period.
  std::optional<double> closed_form;
  std::optional<Rational> closed_form_loop;
  int closed_form_p = 1;
  std::string closed_form_label;
  bool approximate = false;  ///< oracle uses approximate cyclicality
};

struct PartialConfig {
  std::optional<PartialSpectrum> spectrum;
  std::vector<Rational> trials;
  std::optional<Rational> mean_energy;
};

struct RunConfig {
  ModelKind model = ModelKind::raw_spectrum;
  std::vector<Case> cases;
  PartialConfig partial;
  RunOptions options;
};

/// Parses YAML text. Relative file references resolve against `base_dir`.
/// Throws Error(parse_error / invalid_argument / ...) on malformed input.
RunConfig parse_config(std::string_view yaml, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace aaphase::cli
