#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rdo/constants.hpp"
#include "rdo/manifold.hpp"
#include "rdo/network.hpp"
#include "rdo/online.hpp"

namespace rdo {

enum class Algorithm { Full, Bandit };
enum class Topology { Ring, Complete, File };

const char *to_string(Algorithm a);
const char *to_string(Topology t);

/// Experiment description loaded from a flat `key = value` file.
///
/// Real-valued keys accept plain numbers or products/quotients involving
/// `pi`, e.g. `pi/4` or `3*pi/16`. Optional keys set to `auto` (or omitted)
/// are derived from the others; see the README for the full key table.
struct ExperimentConfig {
  ManifoldKind manifold = ManifoldKind::Sphere;
  int dim = 15;
  double ball_radius = 0.7853981633974483;
  std::vector<double> ball_center; // empty: canonical origin

  int agents = 50;
  Topology topology = Topology::Ring;
  int ring_k = 10;
  RingWeights ring_weights = RingWeights::Uniform;
  std::string weights_file;

  int horizon = 2000;
  Algorithm algorithm = Algorithm::Full;
  EtaRule eta_rule = EtaRule::Adaptive;
  double eta_scale = 1.0;
  double s = 1.0;
  double delta = 0.06283185307179587;
  std::optional<double> tau; // nullopt: coupled to delta

  double base_spread = 0.19634954084936207;
  std::optional<double> lipschitz;          // nullopt: 2 x geometric diameter
  std::optional<double> constants_diameter; // nullopt: ball radius
  std::optional<double> c3, c4, c8;         // nullopt: curvature heuristic

  std::uint64_t seed = 1;
  int repetitions = 1;
  int comparator_restarts = 10;
  std::string output = "regret.csv";

  // Derived views.
  Manifold chart() const;
  GeodesicBall ball() const;
  WeightMatrix weights() const;
  double diameter_for_constants() const;
  double effective_lipschitz() const;
  double effective_tau() const;
  StepSchedule schedule() const;
  CurvatureContext curvature_context(double sigma2) const;

  /// Applies one `key = value` assignment. Throws InvalidConfig.
  void set(const std::string &key, const std::string &value);

  /// Canonical (key, value) listing; parsing it back yields an equal config.
  std::vector<std::pair<std::string, std::string>> entries() const;

  bool operator==(const ExperimentConfig &) const = default;
};

ExperimentConfig parse_config_text(const std::string &text);
ExperimentConfig load_config(const std::string &path);

/// Parses a real with optional `pi` factors (`pi/4`, `2*pi`, `0.5`).
double parse_real(const std::string &text);

/// Applies `key=value` (the CLI --override syntax).
void apply_override(ExperimentConfig &cfg, const std::string &assignment);

struct ConfigCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Assumption checks in a fixed order: network connectivity, curvature and
/// diameter, loss regularity, schedule feasibility. The first failing check
/// names the rejected assumption.
std::vector<ConfigCheck> check_config(const ExperimentConfig &cfg);

/// Throws InvalidConfig naming the first failed check.
void require_valid(const ExperimentConfig &cfg);

} // namespace rdo
