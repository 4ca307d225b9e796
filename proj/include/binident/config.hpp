#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "binident/channel.hpp"
#include "binident/errors.hpp"
#include "binident/graph.hpp"
#include "binident/privacy.hpp"
#include "binident/sysmodel.hpp"

namespace binident {

struct RegressorSpec {
  enum class Dist { kGaussian, kUniform, kFixed };
  Dist dist = Dist::kGaussian;
  double variance = 0.0;                   // gaussian scalar stream
  double half_width = 0.0;                 // uniform scalar stream on [-h, h]
  std::vector<Eigen::VectorXd> sequence;   // fixed replay

  RegressorGenerator build(int dim) const {
    switch (dist) {
      case Dist::kGaussian:
        return RegressorGenerator::gaussian_shift_register(dim, variance);
      case Dist::kUniform:
        return RegressorGenerator::uniform_shift_register(dim, half_width);
      case Dist::kFixed:
        return RegressorGenerator::fixed_sequence(sequence);
    }
    throw ConfigError("unreachable regressor mode");
  }
};

struct SystemSpec {
  Eigen::VectorXd theta;
  RegressorSpec regressor;
};

struct ConstraintSpec {
  ConstraintSet::Kind kind = ConstraintSet::Kind::kBox;
  Eigen::VectorXd half_widths;
  Eigen::VectorXd center;
  double radius = 0.0;

  ConstraintSet build() const {
    return kind == ConstraintSet::Kind::kBox ? ConstraintSet::box(half_widths)
                                             : ConstraintSet::ball(center, radius);
  }
};

struct PrivacySpec {
  enum class Mode { kPrivate, kPlain };
  Mode mode = Mode::kPrivate;
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 0.0;
  std::optional<double> sigma;  // explicit sigma; only 0 is legal in plain mode

  PrivacyBudget budget() const { return {epsilon, delta, sensitivity}; }
};

struct AlgorithmSpec {
  double gain = 0.0;            // the constant innovation gain
  double step_scale = 1.0;      // c in b_k = c / k^alpha
  double step_exponent = 1.0;   // alpha in (0, 1]
  Eigen::VectorXd theta_init;
  std::int64_t steps = 0;
  bool log_every_step = false;
};

// Analysis constants for the gain-condition report. They are user-supplied
// inputs; the recursion itself never consumes them.
struct RateConditions {
  double density_floor = 0.0;     // noise density lower bound on the operating region
  double excitation_floor = 0.0;  // lower bound of the windowed regressor second moment
  int excitation_horizon = 0;     // averaging window length, >= parameter dimension
  double regressor_bound = 0.0;   // bound (or effective bound) on the regressor norm
  double set_radius = 0.0;        // sup norm over the constraint set; 0 = derive from it
};

struct SeedSpec {
  std::uint64_t base = 1;
  int trials = 50;
};

struct ExperimentConfig {
  SystemSpec system;
  ConstraintSpec constraint;
  PrivacySpec privacy;
  ChannelParams channel;
  AlgorithmSpec algorithm;
  std::optional<Eigen::MatrixXd> graph;
  std::optional<RateConditions> rate_conditions;
  SeedSpec seeds;
  std::vector<std::string> warnings;  // filled by validate()

  int dim() const { return static_cast<int>(system.theta.size()); }
  bool is_private() const { return privacy.mode == PrivacySpec::Mode::kPrivate; }

  // Calibrated gaussian model in private mode, the degenerate zero-noise
  // model otherwise.
  NoiseModel noise_model() const {
    return is_private() ? calibrate_sigma(privacy.budget()) : NoiseModel{0.0, 0.5};
  }
};

// Applies every rule; collects all violations before throwing. Mutates the
// config only to project an out-of-set initial estimate (with a warning) and
// to fill a missing rate-condition set radius from the constraint geometry.
inline void validate(ExperimentConfig& cfg) {
  std::vector<ValidationIssue> issues;
  std::vector<std::string> warnings;

  const auto d = cfg.system.theta.size();
  if (d < 1 || !cfg.system.theta.allFinite()) {
    issues.push_back({"invalid_system", "true parameter must be a finite vector of dimension >= 1"});
  }

  switch (cfg.system.regressor.dist) {
    case RegressorSpec::Dist::kGaussian:
      if (!(cfg.system.regressor.variance >= 0.0) || !std::isfinite(cfg.system.regressor.variance)) {
        issues.push_back({"invalid_regressor", "gaussian input variance must be finite and >= 0"});
      }
      break;
    case RegressorSpec::Dist::kUniform:
      if (!(cfg.system.regressor.half_width >= 0.0) || !std::isfinite(cfg.system.regressor.half_width)) {
        issues.push_back({"invalid_regressor", "uniform input half-width must be finite and >= 0"});
      }
      break;
    case RegressorSpec::Dist::kFixed:
      if (cfg.system.regressor.sequence.empty()) {
        issues.push_back({"invalid_regressor", "fixed regressor sequence must be nonempty"});
      } else {
        for (const auto& v : cfg.system.regressor.sequence) {
          if (v.size() != d || !v.allFinite()) {
            issues.push_back({"invalid_regressor", "fixed regressor entries must be finite vectors of the system dimension"});
            break;
          }
        }
      }
      break;
  }

  std::optional<ConstraintSet> set;
  try {
    ConstraintSet built = cfg.constraint.build();
    if (built.dim() != d) {
      issues.push_back({"invalid_constraint", "constraint set dimension must match the parameter dimension"});
    } else {
      set = std::move(built);
    }
  } catch (const ValidationError& e) {
    issues.insert(issues.end(), e.issues().begin(), e.issues().end());
  }

  if (set && d >= 1 && !set->contains(cfg.system.theta, 1e-12)) {
    issues.push_back({"theta_outside_constraint", "the true parameter must lie inside the constraint set"});
  }

  if (cfg.is_private()) {
    if (!cfg.privacy.budget().valid()) {
      issues.push_back({"invalid_privacy_budget",
                        "private mode requires epsilon > 0, delta in (0, 0.5), sensitivity > 0"});
    }
    if (cfg.privacy.sigma.has_value()) {
      warnings.push_back("explicit sigma is ignored in private mode; the noise scale is calibrated from (epsilon, delta, sensitivity)");
    }
  } else if (cfg.privacy.sigma.value_or(0.0) > 0.0) {
    issues.push_back({"plain_mode_with_noise", "plain mode runs without noise injection; sigma must be absent or 0"});
  }

  if (!(cfg.channel.p >= 0.0 && cfg.channel.p <= 1.0 && cfg.channel.q >= 0.0 && cfg.channel.q <= 1.0)) {
    issues.push_back({"invalid_channel", "flip probabilities p and q must lie in [0, 1]"});
  } else if (!cfg.channel.identifiable()) {
    issues.push_back({"non_identifiable_channel",
                      "p + q = 1 makes the received bit distribution independent of the parameter; identification requires p + q != 1"});
  }

  if (!(cfg.algorithm.gain > 0.0) || !std::isfinite(cfg.algorithm.gain)) {
    issues.push_back({"invalid_gain", "the innovation gain must be positive"});
  }
  if (!(cfg.algorithm.step_scale > 0.0) || !std::isfinite(cfg.algorithm.step_scale) ||
      !(cfg.algorithm.step_exponent > 0.0 && cfg.algorithm.step_exponent <= 1.0)) {
    issues.push_back({"invalid_schedule",
                      "step sizes must follow c / k^alpha with c > 0 and alpha in (0, 1]"});
  }
  if (cfg.algorithm.steps < 0) {
    issues.push_back({"invalid_steps", "step count must be >= 0"});
  }
  if (cfg.algorithm.theta_init.size() != d || !cfg.algorithm.theta_init.allFinite()) {
    issues.push_back({"invalid_theta_init", "initial estimate must be a finite vector of the system dimension"});
  } else if (set && !set->contains(cfg.algorithm.theta_init, 1e-12)) {
    set->project_in_place(cfg.algorithm.theta_init);
    warnings.push_back("initial estimate lies outside the constraint set; projected onto it at startup");
  }

  if (cfg.graph.has_value()) {
    bool adjacency_ok = true;
    try {
      validate_adjacency(*cfg.graph);
    } catch (const ValidationError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
      adjacency_ok = false;
    }
    if (adjacency_ok && !is_connected(*cfg.graph)) {
      issues.push_back({"disconnected_graph", "the communication graph must be connected"});
    }
  }

  if (cfg.rate_conditions.has_value()) {
    RateConditions& rc = *cfg.rate_conditions;
    if (rc.set_radius == 0.0 && set) rc.set_radius = set->eta();
    if (!(rc.density_floor > 0.0) || !(rc.excitation_floor > 0.0) || !(rc.regressor_bound > 0.0) ||
        !(rc.set_radius > 0.0) || rc.excitation_horizon < d) {
      issues.push_back({"invalid_rate_conditions",
                        "rate conditions need positive constants and an excitation horizon >= the parameter dimension"});
    }
  }

  if (cfg.seeds.trials < 1) {
    issues.push_back({"invalid_seeds", "the trial count must be >= 1"});
  }

  if (!issues.empty()) throw ValidationError(std::move(issues));
  cfg.warnings.insert(cfg.warnings.end(), warnings.begin(), warnings.end());
}

namespace detail {

inline Eigen::VectorXd json_to_vector(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + " must be a nonempty numeric array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError(where + " must contain only numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Eigen::MatrixXd json_to_matrix(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + " must be a nonempty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError(where + " rows must be numeric arrays of equal length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ParseError(where + " must contain only numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

inline nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace detail

// Builds a config from parsed JSON. Throws ParseError on structural problems;
// semantic rules live in validate().
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;

    const auto& sys = j.at("system");
    cfg.system.theta = detail::json_to_vector(sys.at("theta"), "system.theta");
    const auto& reg = sys.at("regressor");
    const std::string dist = reg.at("dist").get<std::string>();
    if (dist == "gaussian") {
      cfg.system.regressor.dist = RegressorSpec::Dist::kGaussian;
      cfg.system.regressor.variance = reg.at("variance").get<double>();
    } else if (dist == "uniform") {
      cfg.system.regressor.dist = RegressorSpec::Dist::kUniform;
      cfg.system.regressor.half_width = reg.at("half_width").get<double>();
    } else if (dist == "fixed") {
      cfg.system.regressor.dist = RegressorSpec::Dist::kFixed;
      for (const auto& row : reg.at("sequence")) {
        cfg.system.regressor.sequence.push_back(
            detail::json_to_vector(row, "system.regressor.sequence"));
      }
    } else {
      throw ParseError("system.regressor.dist must be gaussian, uniform, or fixed");
    }

    const auto& con = j.at("constraint");
    const std::string kind = con.at("kind").get<std::string>();
    if (kind == "box") {
      cfg.constraint.kind = ConstraintSet::Kind::kBox;
      cfg.constraint.half_widths = detail::json_to_vector(con.at("half_widths"), "constraint.half_widths");
    } else if (kind == "ball") {
      cfg.constraint.kind = ConstraintSet::Kind::kBall;
      cfg.constraint.center = detail::json_to_vector(con.at("center"), "constraint.center");
      cfg.constraint.radius = con.at("radius").get<double>();
    } else {
      throw ParseError("constraint.kind must be box or ball");
    }

    const auto& priv = j.at("privacy");
    const std::string mode = priv.at("mode").get<std::string>();
    if (mode == "private") {
      cfg.privacy.mode = PrivacySpec::Mode::kPrivate;
      cfg.privacy.epsilon = priv.at("epsilon").get<double>();
      cfg.privacy.delta = priv.at("delta").get<double>();
      cfg.privacy.sensitivity = priv.at("sensitivity").get<double>();
    } else if (mode == "plain") {
      cfg.privacy.mode = PrivacySpec::Mode::kPlain;
    } else {
      throw ParseError("privacy.mode must be private or plain");
    }
    if (priv.contains("sigma")) cfg.privacy.sigma = priv.at("sigma").get<double>();

    const auto& ch = j.at("channel");
    cfg.channel.p = ch.at("p").get<double>();
    cfg.channel.q = ch.at("q").get<double>();

    const auto& alg = j.at("algorithm");
    cfg.algorithm.gain = alg.at("gain").get<double>();
    cfg.algorithm.step_scale = alg.value("step_scale", 1.0);
    cfg.algorithm.step_exponent = alg.value("step_exponent", 1.0);
    cfg.algorithm.theta_init = detail::json_to_vector(alg.at("theta_init"), "algorithm.theta_init");
    cfg.algorithm.steps = alg.at("steps").get<std::int64_t>();
    cfg.algorithm.log_every_step = alg.value("log_every_step", false);

    if (j.contains("graph")) {
      const auto& g = j.at("graph");
      if (g.contains("weights")) {
        cfg.graph = detail::json_to_matrix(g.at("weights"), "graph.weights");
      } else {
        cfg.graph = make_topology(g.at("topology").get<std::string>(), g.at("nodes").get<int>(),
                                  g.value("weight", 1.0));
      }
    }

    if (j.contains("rate_conditions")) {
      const auto& rc = j.at("rate_conditions");
      RateConditions out;
      out.density_floor = rc.at("density_floor").get<double>();
      out.excitation_floor = rc.at("excitation_floor").get<double>();
      out.excitation_horizon = rc.at("excitation_horizon").get<int>();
      out.regressor_bound = rc.at("regressor_bound").get<double>();
      out.set_radius = rc.value("set_radius", 0.0);
      cfg.rate_conditions = out;
    }

    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      cfg.seeds.base = s.value("base", std::uint64_t{1});
      cfg.seeds.trials = s.value("trials", 50);
    }

    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed config: ") + e.what());
  }
}

// Normalized echo of a config; load_config(to_json(cfg)) reproduces an
// equivalent experiment (named topologies are emitted as explicit weights).
inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["system"]["theta"] = detail::vector_to_json(cfg.system.theta);
  switch (cfg.system.regressor.dist) {
    case RegressorSpec::Dist::kGaussian:
      j["system"]["regressor"] = {{"dist", "gaussian"}, {"variance", cfg.system.regressor.variance}};
      break;
    case RegressorSpec::Dist::kUniform:
      j["system"]["regressor"] = {{"dist", "uniform"}, {"half_width", cfg.system.regressor.half_width}};
      break;
    case RegressorSpec::Dist::kFixed: {
      nlohmann::json seq = nlohmann::json::array();
      for (const auto& v : cfg.system.regressor.sequence) seq.push_back(detail::vector_to_json(v));
      j["system"]["regressor"] = {{"dist", "fixed"}, {"sequence", std::move(seq)}};
      break;
    }
  }
  if (cfg.constraint.kind == ConstraintSet::Kind::kBox) {
    j["constraint"] = {{"kind", "box"}, {"half_widths", detail::vector_to_json(cfg.constraint.half_widths)}};
  } else {
    j["constraint"] = {{"kind", "ball"},
                       {"center", detail::vector_to_json(cfg.constraint.center)},
                       {"radius", cfg.constraint.radius}};
  }
  if (cfg.is_private()) {
    j["privacy"] = {{"mode", "private"},
                    {"epsilon", cfg.privacy.epsilon},
                    {"delta", cfg.privacy.delta},
                    {"sensitivity", cfg.privacy.sensitivity}};
  } else {
    j["privacy"] = {{"mode", "plain"}};
  }
  if (cfg.privacy.sigma.has_value()) j["privacy"]["sigma"] = *cfg.privacy.sigma;
  j["channel"] = {{"p", cfg.channel.p}, {"q", cfg.channel.q}};
  j["algorithm"] = {{"gain", cfg.algorithm.gain},
                    {"step_scale", cfg.algorithm.step_scale},
                    {"step_exponent", cfg.algorithm.step_exponent},
                    {"theta_init", detail::vector_to_json(cfg.algorithm.theta_init)},
                    {"steps", cfg.algorithm.steps},
                    {"log_every_step", cfg.algorithm.log_every_step}};
  if (cfg.graph.has_value()) j["graph"]["weights"] = detail::matrix_to_json(*cfg.graph);
  if (cfg.rate_conditions.has_value()) {
    const RateConditions& rc = *cfg.rate_conditions;
    j["rate_conditions"] = {{"density_floor", rc.density_floor},
                            {"excitation_floor", rc.excitation_floor},
                            {"excitation_horizon", rc.excitation_horizon},
                            {"regressor_bound", rc.regressor_bound},
                            {"set_radius", rc.set_radius}};
  }
  j["seeds"] = {{"base", cfg.seeds.base}, {"trials", cfg.seeds.trials}};
  return j;
}

namespace detail {

inline std::string describe_parse_position(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace detail

// Reads, parses, and validates one experiment description.
inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": parse error at " + detail::describe_parse_position(text, e.byte) +
                     ": " + e.what());
  }
  ExperimentConfig cfg = parse_config(j);
  validate(cfg);
  return cfg;
}

}  // namespace binident
