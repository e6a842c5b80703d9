#include "aaphase_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "aaphase/error.hpp"
#include "aaphase/report.hpp"
#include "aaphase/text.hpp"

namespace aaphase::cli {

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::spin_half: return "spin_half";
    case ModelKind::free_field: return "free_field";
    case ModelKind::two_mirror: return "two_mirror";
    case ModelKind::three_mirror: return "three_mirror";
    case ModelKind::raw_spectrum: return "raw_spectrum";
    case ModelKind::dense_matrix: return "dense_matrix";
    case ModelKind::partial_spectrum: return "partial_spectrum";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(Errc::parse_error, what); }

std::string scalar(const YAML::Node& node, const std::string& key) {
  if (!node || !node.IsScalar()) fail("'" + key + "' must be a scalar");
  return node.Scalar();
}

YAML::Node required(const YAML::Node& parent, const std::string& key) {
  YAML::Node node = parent[key];
  if (!node) fail("missing field '" + key + "'");
  return node;
}

double real_of(const YAML::Node& node, const std::string& key) { return parse_real(scalar(node, key)); }

double real_or(const YAML::Node& parent, const std::string& key, double fallback) {
  const YAML::Node node = parent[key];
  return node ? real_of(node, key) : fallback;
}

int int_of(const YAML::Node& node, const std::string& key) {
  const double v = real_of(node, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail("'" + key + "' must be an integer");
  return static_cast<int>(v);
}

int int_or(const YAML::Node& parent, const std::string& key, int fallback) {
  const YAML::Node node = parent[key];
  return node ? int_of(node, key) : fallback;
}

bool bool_or(const YAML::Node& parent, const std::string& key, bool fallback) {
  const YAML::Node node = parent[key];
  if (!node) return fallback;
  const std::string s = scalar(node, key);
  if (s == "true") return true;
  if (s == "false") return false;
  fail("'" + key + "' must be true or false");
}

Complex complex_of(const YAML::Node& node, const std::string& key) { return parse_complex(scalar(node, key)); }

Complex complex_or(const YAML::Node& parent, const std::string& key, Complex fallback) {
  const YAML::Node node = parent[key];
  return node ? complex_of(node, key) : fallback;
}

std::optional<Rational> try_rational(const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// "p/q" and integers are exact; decimals are rationalized, failing with
// incommensurable_input when no small denominator fits.
Rational rational_of(const YAML::Node& node, const std::string& key, const RationalizeOptions& options) {
  const std::string text = scalar(node, key);
  if (auto r = try_rational(text)) return *r;
  const double x = parse_real(text);
  try {
    return rationalize(x, options.max_denominator, options.tolerance);
  } catch (const Error&) {
    throw Error(Errc::incommensurable_input, "'" + key + "' = " + text + " is not a rational number");
  }
}

Level level_of(const std::string& label, const YAML::Node& node, const RationalizeOptions& options) {
  const std::string text = scalar(node, "value");
  if (auto r = try_rational(text)) return Level::exactly(label, *r);
  return Level::from_real(label, parse_real(text), options);
}

std::vector<Complex> complex_list(const YAML::Node& node, const std::string& key) {
  if (!node || !node.IsSequence()) fail("'" + key + "' must be a list");
  std::vector<Complex> out;
  for (const auto& item : node) out.push_back(complex_of(item, key));
  return out;
}

void normalize(std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  if (s == 0.0) fail("amplitudes are all zero");
  s = std::sqrt(s);
  for (auto& x : v) x /= s;
}

RunOptions parse_options(const YAML::Node& node) {
  RunOptions o;
  if (!node) return o;
  if (!node.IsMap()) fail("'options' must be a map");
  o.n_range = int_or(node, "n_range", o.n_range);
  if (node["fidelity_tol"]) o.fidelity_tol = real_of(node["fidelity_tol"], "fidelity_tol");
  if (node["t_max"]) o.t_max = real_of(node["t_max"], "t_max");
  o.tolerance = real_or(node, "tolerance", o.tolerance);
  o.points_per_period = int_or(node, "points_per_period", o.points_per_period);
  o.rationalize.max_denominator =
      static_cast<std::uint64_t>(int_or(node, "max_denominator", static_cast<int>(o.rationalize.max_denominator)));
  o.rationalize.tolerance = real_or(node, "rationalize_tolerance", o.rationalize.tolerance);
  return o;
}

void check_options(const RunOptions& o) {
  if (o.n_range < 1) fail("n_range must be >= 1");
  if (o.fidelity_tol && !(*o.fidelity_tol > 0.0)) fail("fidelity_tol must be positive");
  if (o.t_max && !(*o.t_max > 0.0)) fail("t_max must be positive");
  if (!(o.tolerance > 0.0)) fail("tolerance must be positive");
  if (o.points_per_period < 8) fail("points_per_period must be >= 8");
  if (o.rationalize.max_denominator < 1) fail("max_denominator must be >= 1");
}

std::vector<double> spin_angles(const YAML::Node& node) {
  std::vector<double> out;
  auto add = [&](const YAML::Node& n, bool over_pi) {
    const std::string text = scalar(n, over_pi ? "theta_over_pi" : "theta");
    if (!over_pi) {
      out.push_back(parse_real(text));
    } else if (auto r = try_rational(text)) {
      out.push_back(r->to_double() * kPi);
    } else {
      out.push_back(parse_real(text) * kPi);
    }
  };
  for (const bool over_pi : {false, true}) {
    const YAML::Node n = node[over_pi ? "theta_over_pi" : "theta"];
    if (!n) continue;
    if (n.IsSequence()) {
      for (const auto& item : n) add(item, over_pi);
    } else {
      add(n, over_pi);
    }
  }
  if (out.empty()) fail("spin_half needs 'theta' or 'theta_over_pi'");
  return out;
}

std::vector<Case> spin_half_cases(const YAML::Node& node) {
  std::vector<Case> cases;
  const double mu = real_or(node, "mu_B0", 1.0);
  for (double theta : spin_angles(node)) {
    SpinHalfParams p{mu, theta};
    Case c;
    c.name = "theta=" + format_real(theta);
    c.exact = spin_half(p);
    c.dense = spin_half_dense(p);
    c.closed_form = spin_half_gamma_closed_form(p);
    c.closed_form_label = "gamma_closed_form";
    cases.push_back(std::move(c));
  }
  return cases;
}

Case free_field_case(const YAML::Node& node) {
  const double omega = real_or(node, "omega", 1.0);
  FreeFieldParams params;
  if (const YAML::Node coh = node["coherent"]) {
    params = free_field_coherent(omega, complex_or(coh, "alpha", 0.0), int_of(required(coh, "truncation"), "truncation"));
  } else {
    params.omega = omega;
    const YAML::Node amps = required(node, "amplitudes");
    if (amps.IsMap()) {
      for (const auto& kv : amps) params.amplitudes.push_back({int_of(kv.first, "n"), complex_of(kv.second, "amplitude")});
    } else if (amps.IsSequence()) {
      for (const auto& item : amps) {
        params.amplitudes.push_back({int_of(required(item, "n"), "n"), complex_of(required(item, "amplitude"), "amplitude")});
      }
    } else {
      fail("'amplitudes' must be a map or a list");
    }
    if (bool_or(node, "normalize", false)) {
      std::vector<Complex> v;
      for (const auto& a : params.amplitudes) v.push_back(a.amplitude);
      normalize(v);
      for (std::size_t i = 0; i < v.size(); ++i) params.amplitudes[i].amplitude = v[i];
    }
  }
  Case c;
  c.name = "free_field";
  c.exact = free_field(params);
  c.dense = free_field_dense(params);
  return c;
}

Case two_mirror_case(const YAML::Node& node, const RunOptions& options) {
  TwoMirrorParams p;
  p.omega_m = real_or(node, "omega_m", 1.0);
  p.r = rational_of(required(node, "r"), "r", options.rationalize);
  p.k2 = rational_of(required(node, "k2"), "k2", options.rationalize);
  p.field_amplitudes = complex_list(required(node, "field_amplitudes"), "field_amplitudes");
  if (bool_or(node, "normalize", false)) normalize(p.field_amplitudes);
  p.beta = complex_or(node, "beta", 0.0);
  p.mirror_truncation = int_or(node, "mirror_truncation", p.mirror_truncation);
  Case c;
  c.name = "two_mirror";
  c.exact = two_mirror_spectrum(p);
  c.dense = two_mirror_dense(p);
  if (const YAML::Node pn = node["closed_form_p"]) {
    c.closed_form_p = int_of(pn, "closed_form_p");
    c.closed_form_loop = Rational(c.closed_form_p);
    const std::string variant = node["closed_form"] ? scalar(node["closed_form"], "closed_form") : "p";
    if (variant == "p") {
      c.closed_form = two_mirror_gamma_closed_form(p, c.closed_form_p);
      c.closed_form_label = "gamma_closed_form[p=" + std::to_string(c.closed_form_p) + "]";
    } else if (variant == "printed") {
      c.closed_form = two_mirror_gamma_printed_form(p, c.closed_form_p);
      c.closed_form_label = "gamma_printed_form[p=" + std::to_string(c.closed_form_p) + "]";
    } else {
      fail("'closed_form' must be 'p' or 'printed'");
    }
  }
  return c;
}

Case three_mirror_case(const YAML::Node& node, const RunOptions& options) {
  const double wd = real_of(required(node, "omega_D"), "omega_D");
  const double ws = real_of(required(node, "omega_S"), "omega_S");
  const double wm = real_or(node, "omega_m", 1.0);
  const double cd = real_or(node, "C_D", 0.0);
  const double cs = real_or(node, "C_S", 0.0);
  ThreeMirrorParams p;
  std::optional<std::array<Complex, 3>> coherent;
  if (node["alpha"] || node["beta"] || node["mu"]) {
    std::array<int, 3> trunc{15, 15, 25};
    if (const YAML::Node t = node["truncations"]) {
      if (!t.IsSequence() || t.size() != 3) fail("'truncations' must list three integers");
      for (std::size_t i = 0; i < 3; ++i) trunc[i] = int_of(t[i], "truncations");
    }
    coherent = {complex_or(node, "alpha", 0.0), complex_or(node, "beta", 0.0), complex_or(node, "mu", 0.0)};
    p = three_mirror_coherent(wd, ws, wm, cd, cs, (*coherent)[0], (*coherent)[1], (*coherent)[2], trunc[0], trunc[1],
                              trunc[2]);
  } else {
    p.omega_D = wd;
    p.omega_S = ws;
    p.omega_m = wm;
    p.C_D = cd;
    p.C_S = cs;
    p.A = complex_list(required(node, "A"), "A");
    p.B = complex_list(required(node, "B"), "B");
    p.M = complex_list(required(node, "M"), "M");
    if (bool_or(node, "normalize", false)) {
      normalize(p.A);
      normalize(p.B);
      normalize(p.M);
    }
  }
  Case c;
  c.name = "three_mirror";
  c.dense = three_mirror_dense(p);
  if (cs == 0.0) {
    c.exact = three_mirror_spectrum(p, options.rationalize);
  } else {
    c.approximate = true;
  }
  c.closed_form_p = int_or(node, "closed_form_p", 1);
  c.closed_form_loop = Rational(c.closed_form_p);
  if (coherent) {
    c.closed_form = three_mirror_gamma_coherent(p, (*coherent)[0], (*coherent)[1], (*coherent)[2], c.closed_form_p);
    c.closed_form_label = "gamma_coherent_form[p=" + std::to_string(c.closed_form_p) + "]";
  } else {
    c.closed_form = three_mirror_gamma_closed_form(p, c.closed_form_p);
    c.closed_form_label = "gamma_closed_form[p=" + std::to_string(c.closed_form_p) + "]";
  }
  return c;
}

Case raw_spectrum_case(const YAML::Node& node, const RunOptions& options) {
  const double unit = real_or(node, "unit", 1.0);
  const double hbar = real_or(node, "hbar", 1.0);
  const YAML::Node levels_node = required(node, "levels");
  if (!levels_node.IsSequence()) fail("'levels' must be a list");
  std::vector<Level> levels;
  std::vector<Complex> amps;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < levels_node.size(); ++i) {
    const YAML::Node item = levels_node[i];
    const std::string label = item["label"] ? scalar(item["label"], "label") : "l" + std::to_string(i);
    levels.push_back(level_of(label, required(item, "value"), options.rationalize));
    labels.push_back(label);
    amps.push_back(complex_or(item, "amplitude", 0.0));
  }
  if (bool_or(node, "normalize", false)) normalize(amps);
  std::vector<Component> components;
  for (std::size_t i = 0; i < amps.size(); ++i) components.push_back({labels[i], amps[i]});
  Spectrum spectrum(unit, std::move(levels), hbar);
  StateDecomposition state(std::move(components));
  Case c;
  c.name = "raw_spectrum";
  c.dense = dense_from_spectrum(spectrum, state);
  c.exact = ExactModel{std::move(spectrum), std::move(state)};
  return c;
}

Case dense_matrix_case(const YAML::Node& node, const std::filesystem::path& base_dir, const RunOptions& options) {
  std::optional<DenseHamiltonian> h;
  if (const YAML::Node file = node["file"]) {
    std::filesystem::path path = scalar(file, "file");
    if (path.is_relative()) path = base_dir / path;
    std::ifstream in(path);
    if (!in) fail("cannot open matrix file '" + path.string() + "'");
    h = DenseHamiltonian::read(in);
  } else {
    const YAML::Node rows = required(node, "matrix");
    if (!rows.IsSequence()) fail("'matrix' must be a list of rows");
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const YAML::Node row = rows[static_cast<std::size_t>(i)];
      if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != n) fail("'matrix' must be square");
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex_of(row[static_cast<std::size_t>(j)], "matrix");
    }
    h = DenseHamiltonian(std::move(m), real_or(node, "unit", 1.0), real_or(node, "hbar", 1.0));
  }
  std::vector<Complex> psi = complex_list(required(node, "psi0"), "psi0");
  if (bool_or(node, "normalize", false)) normalize(psi);
  if (static_cast<Eigen::Index>(psi.size()) != h->dimension()) fail("'psi0' length does not match the matrix");
  Eigen::VectorXcd v(h->dimension());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = psi[static_cast<std::size_t>(i)];
  Case c;
  c.name = "dense_matrix";
  c.exact = exact_from_dense(*h, v, options.rationalize);
  c.dense = DenseModel{std::move(*h), std::move(v)};
  return c;
}

PartialConfig partial_config(const YAML::Node& node, const RunOptions& options) {
  PartialConfig out;
  const YAML::Node known = required(node, "known");
  if (!known.IsSequence()) fail("'known' must be a list");
  std::vector<Level> levels;
  for (std::size_t i = 0; i < known.size(); ++i) {
    const YAML::Node item = known[i];
    const std::string label = item["label"] ? scalar(item["label"], "label") : "L" + std::to_string(i + 1);
    levels.push_back(level_of(label, required(item, "value"), options.rationalize));
  }
  out.spectrum.emplace(real_or(node, "unit", 1.0), std::move(levels));
  if (const YAML::Node trials = node["trials"]) {
    if (!trials.IsSequence()) fail("'trials' must be a list");
    for (const auto& t : trials) out.trials.push_back(rational_of(t, "trials", options.rationalize));
  }
  if (const YAML::Node mean = node["mean_energy"]) out.mean_energy = rational_of(mean, "mean_energy", options.rationalize);
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view yaml, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    fail(std::string("YAML: ") + e.what());
  }
  if (!root.IsMap()) fail("config must be a YAML map");

  RunConfig config;
  config.options = parse_options(root["options"]);
  check_options(config.options);

  static constexpr ModelKind kinds[] = {ModelKind::spin_half,    ModelKind::free_field,   ModelKind::two_mirror,
                                        ModelKind::three_mirror, ModelKind::raw_spectrum, ModelKind::dense_matrix,
                                        ModelKind::partial_spectrum};
  std::optional<ModelKind> found;
  for (ModelKind k : kinds) {
    if (!root[to_string(k)]) continue;
    if (found) fail("config names more than one model ('" + std::string(to_string(*found)) + "' and '" + to_string(k) + "')");
    found = k;
  }
  if (!found) fail("config names no model section");
  if (const YAML::Node m = root["model"]; m && scalar(m, "model") != to_string(*found)) {
    fail("'model: " + m.Scalar() + "' does not match the '" + to_string(*found) + "' section");
  }
  config.model = *found;
  const YAML::Node node = root[to_string(*found)];
  if (!node.IsMap()) fail("'" + std::string(to_string(*found)) + "' must be a map");

  switch (*found) {
    case ModelKind::spin_half: config.cases = spin_half_cases(node); break;
    case ModelKind::free_field: config.cases.push_back(free_field_case(node)); break;
    case ModelKind::two_mirror: config.cases.push_back(two_mirror_case(node, config.options)); break;
    case ModelKind::three_mirror: config.cases.push_back(three_mirror_case(node, config.options)); break;
    case ModelKind::raw_spectrum: config.cases.push_back(raw_spectrum_case(node, config.options)); break;
    case ModelKind::dense_matrix: config.cases.push_back(dense_matrix_case(node, base_dir, config.options)); break;
    case ModelKind::partial_spectrum: config.partial = partial_config(node, config.options); break;
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.parent_path());
}

}  // namespace aaphase::cli
