#include "rdo/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rdo/error.hpp"

namespace rdo {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void reject(const std::string &msg) {
  throw Error(ErrorCode::InvalidConfig, msg);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

long parse_integer(const std::string &key, const std::string &text) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception &) {
    reject(key + ": expected an integer, got '" + text + "'");
  }
  if (used != text.size()) reject(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string &key, const std::string &text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception &) {
    reject(key + ": expected a nonnegative integer, got '" + text + "'");
  }
  if (used != text.size() || text.front() == '-')
    reject(key + ": expected a nonnegative integer, got '" + text + "'");
  return v;
}

std::optional<double> parse_optional_real(const std::string &text) {
  if (text == "auto") return std::nullopt;
  return parse_real(text);
}

std::string format_optional(const std::optional<double> &v) {
  return v ? format_real(*v) : "auto";
}

} // namespace

const char *to_string(Algorithm a) { return a == Algorithm::Full ? "full" : "bandit"; }

const char *to_string(Topology t) {
  switch (t) {
  case Topology::Ring: return "ring";
  case Topology::Complete: return "complete";
  case Topology::File: return "file";
  }
  return "?";
}

double parse_real(const std::string &raw) {
  const std::string text = trim(raw);
  if (text.empty()) reject("empty numeric value");
  double result = 1.0;
  char op = '*';
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find_first_of("*/", pos);
    std::string factor = trim(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    double sign = 1.0;
    if (!factor.empty() && factor.front() == '-') {
      sign = -1.0;
      factor = trim(factor.substr(1));
    }
    double v = 0.0;
    if (factor == "pi") {
      v = std::numbers::pi;
    } else {
      std::size_t used = 0;
      try {
        v = std::stod(factor, &used);
      } catch (const std::exception &) {
        reject("cannot parse number '" + raw + "'");
      }
      if (used != factor.size()) reject("cannot parse number '" + raw + "'");
    }
    result = op == '*' ? result * sign * v : result / (sign * v);
    if (next == std::string::npos) break;
    op = text[next];
    pos = next + 1;
  }
  return result;
}

void ExperimentConfig::set(const std::string &key, const std::string &raw) {
  const std::string value = trim(raw);
  if (key == "manifold") manifold = parse_manifold_kind(value);
  else if (key == "dim") dim = static_cast<int>(parse_integer(key, value));
  else if (key == "ball_radius") ball_radius = parse_real(value);
  else if (key == "ball_center") {
    ball_center.clear();
    if (value != "auto") {
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) ball_center.push_back(parse_real(item));
    }
  } else if (key == "agents") agents = static_cast<int>(parse_integer(key, value));
  else if (key == "topology") {
    if (value == "ring") topology = Topology::Ring;
    else if (value == "complete") topology = Topology::Complete;
    else if (value == "file") topology = Topology::File;
    else reject("topology must be ring, complete or file");
  } else if (key == "ring_k") ring_k = static_cast<int>(parse_integer(key, value));
  else if (key == "ring_weights") {
    if (value == "uniform") ring_weights = RingWeights::Uniform;
    else if (value == "metropolis") ring_weights = RingWeights::Metropolis;
    else reject("ring_weights must be uniform or metropolis");
  } else if (key == "weights_file") weights_file = value;
  else if (key == "horizon") horizon = static_cast<int>(parse_integer(key, value));
  else if (key == "algorithm") {
    if (value == "full") algorithm = Algorithm::Full;
    else if (value == "bandit") algorithm = Algorithm::Bandit;
    else reject("algorithm must be full or bandit");
  } else if (key == "eta_rule") {
    if (value == "adaptive") eta_rule = EtaRule::Adaptive;
    else if (value == "constant") eta_rule = EtaRule::Constant;
    else reject("eta_rule must be adaptive or constant");
  } else if (key == "eta_scale") eta_scale = parse_real(value);
  else if (key == "s") s = parse_real(value);
  else if (key == "delta") delta = parse_real(value);
  else if (key == "tau") tau = parse_optional_real(value);
  else if (key == "base_spread") base_spread = parse_real(value);
  else if (key == "lipschitz") lipschitz = parse_optional_real(value);
  else if (key == "constants_diameter") constants_diameter = parse_optional_real(value);
  else if (key == "c3") c3 = parse_optional_real(value);
  else if (key == "c4") c4 = parse_optional_real(value);
  else if (key == "c8") c8 = parse_optional_real(value);
  else if (key == "seed") seed = parse_unsigned(key, value);
  else if (key == "repetitions") repetitions = static_cast<int>(parse_integer(key, value));
  else if (key == "comparator_restarts")
    comparator_restarts = static_cast<int>(parse_integer(key, value));
  else if (key == "output") output = value;
  else reject("unknown key '" + key + "'");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::string center = "auto";
  if (!ball_center.empty()) {
    center.clear();
    for (std::size_t i = 0; i < ball_center.size(); ++i)
      center += (i ? "," : "") + format_real(ball_center[i]);
  }
  return {
      {"manifold", rdo::to_string(manifold)},
      {"dim", std::to_string(dim)},
      {"ball_radius", format_real(ball_radius)},
      {"ball_center", center},
      {"agents", std::to_string(agents)},
      {"topology", rdo::to_string(topology)},
      {"ring_k", std::to_string(ring_k)},
      {"ring_weights", ring_weights == RingWeights::Uniform ? "uniform" : "metropolis"},
      {"weights_file", weights_file},
      {"horizon", std::to_string(horizon)},
      {"algorithm", rdo::to_string(algorithm)},
      {"eta_rule", eta_rule == EtaRule::Adaptive ? "adaptive" : "constant"},
      {"eta_scale", format_real(eta_scale)},
      {"s", format_real(s)},
      {"delta", format_real(delta)},
      {"tau", format_optional(tau)},
      {"base_spread", format_real(base_spread)},
      {"lipschitz", format_optional(lipschitz)},
      {"constants_diameter", format_optional(constants_diameter)},
      {"c3", format_optional(c3)},
      {"c4", format_optional(c4)},
      {"c8", format_optional(c8)},
      {"seed", std::to_string(seed)},
      {"repetitions", std::to_string(repetitions)},
      {"comparator_restarts", std::to_string(comparator_restarts)},
      {"output", output},
  };
}

ExperimentConfig parse_config_text(const std::string &text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      reject("line " + std::to_string(lineno) + ": expected 'key = value'");
    try {
      cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const Error &e) {
      reject("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

void apply_override(ExperimentConfig &cfg, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    reject("override '" + assignment + "' is not of the form key=value");
  cfg.set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

Manifold ExperimentConfig::chart() const { return Manifold(manifold, dim); }

GeodesicBall ExperimentConfig::ball() const {
  const Manifold m = chart();
  Point center = m.origin();
  if (!ball_center.empty()) {
    Vector c(static_cast<Eigen::Index>(ball_center.size()));
    for (std::size_t i = 0; i < ball_center.size(); ++i) c[i] = ball_center[i];
    if (c.size() != m.ambient_dim())
      reject("ball_center needs " + std::to_string(m.ambient_dim()) + " coordinates");
    center = m.point(c);
  }
  return make_ball(m, std::move(center), ball_radius);
}

WeightMatrix ExperimentConfig::weights() const {
  switch (topology) {
  case Topology::Ring: return build_ring(agents, ring_k, ring_weights);
  case Topology::Complete: return build_complete(agents);
  case Topology::File: {
    WeightMatrix w = WeightMatrix::from_dense(read_matrix_text(weights_file));
    if (w.size() != agents)
      throw Error(ErrorCode::InvalidTopology,
                  weights_file + " has " + std::to_string(w.size()) +
                      " agents, config says " + std::to_string(agents));
    return w;
  }
  }
  return build_complete(agents);
}

double ExperimentConfig::diameter_for_constants() const {
  return constants_diameter.value_or(ball_radius);
}

double ExperimentConfig::effective_lipschitz() const {
  // |grad d^2(., z)| = 2 d(., z) <= 2 diam(X) = 4 r.
  return lipschitz.value_or(4.0 * ball_radius);
}

double ExperimentConfig::effective_tau() const {
  if (tau) return *tau;
  const Manifold m = chart();
  return coupled_shrinkage(delta, m.k_min(), m.k_max(), diameter_for_constants(),
                           ball_radius);
}

StepSchedule ExperimentConfig::schedule() const {
  StepSchedule sched;
  sched.rule = eta_rule;
  sched.eta_scale = eta_scale;
  sched.horizon = horizon;
  sched.s = s;
  sched.delta = delta;
  sched.tau = algorithm == Algorithm::Bandit ? effective_tau() : 0.0;
  return sched;
}

CurvatureContext ExperimentConfig::curvature_context(double sigma2) const {
  const Manifold m = chart();
  CurvatureContext ctx = CurvatureContext::with_defaults(
      m.k_min(), m.k_max(), diameter_for_constants(), agents, sigma2,
      algorithm == Algorithm::Bandit ? delta : 0.0);
  if (c3) ctx.c3 = *c3;
  if (c4) ctx.c4 = *c4;
  if (c8) ctx.c8 = *c8;
  return ctx;
}

std::vector<ConfigCheck> check_config(const ExperimentConfig &cfg) {
  std::vector<ConfigCheck> out;
  auto run = [&](const std::string &name, auto &&fn) {
    ConfigCheck c{name, true, "ok"};
    try {
      fn(c);
    } catch (const std::exception &e) {
      c.passed = false;
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  };

  double sigma2_value = 1.0;
  run("network connectivity", [&](ConfigCheck &c) {
    if (cfg.agents < 1) reject("agents must be positive");
    const WeightMatrix w = cfg.weights();
    sigma2_value = w.sigma2();
    c.detail = "symmetric, doubly stochastic, sigma2 = " + format_real(sigma2_value);
  });

  run("curvature and diameter", [&](ConfigCheck &c) {
    const Manifold m = cfg.chart();
    cfg.ball();
    // Connectivity is reported by its own check.
    CurvatureContext ctx = cfg.curvature_context(0.0);
    ctx.validate();
    c.detail = m.name() + ", K in [" + format_real(m.k_min()) + ", " +
               format_real(m.k_max()) + "], D = " + format_real(ctx.diameter);
  });

  run("loss regularity", [&](ConfigCheck &c) {
    const double L = cfg.effective_lipschitz();
    const double needed = 4.0 * cfg.ball_radius;
    if (!(L >= needed))
      reject("lipschitz " + format_real(L) +
             " is below the squared-distance bound 2 diam(X) = " + format_real(needed));
    if (!(cfg.base_spread >= 0.0)) reject("base_spread must be nonnegative");
    if (!(cfg.base_spread < cfg.chart().injectivity_radius() / 2.0))
      reject("base_spread must stay below half the injectivity radius");
    c.detail = "L = " + format_real(L);
  });

  run("schedule feasibility", [&](ConfigCheck &c) {
    if (cfg.horizon < 1) reject("horizon must be at least 1");
    if (!(cfg.eta_scale > 0.0)) reject("eta_scale must be positive");
    if (!(cfg.s > 0.0 && cfg.s <= 1.0)) reject("s must lie in (0, 1]");
    if (cfg.repetitions < 1) reject("repetitions must be at least 1");
    if (cfg.comparator_restarts < 1) reject("comparator_restarts must be at least 1");
    if (cfg.algorithm == Algorithm::Bandit) {
      const Manifold m = cfg.chart();
      const double tau = cfg.effective_tau();
      if (!(cfg.delta > 0.0)) reject("delta must be positive");
      if (!(tau >= 0.0 && tau < 1.0)) reject("tau must lie in [0, 1)");
      const double theta = shrink_theta(m.k_min(), m.k_max(),
                                        cfg.diameter_for_constants(), cfg.ball_radius);
      const double reach = theta * cfg.ball_radius * tau;
      if (cfg.delta > reach * (1.0 + 1e-12))
        reject("delta = " + format_real(cfg.delta) +
               " exceeds theta r tau = " + format_real(reach) +
               "; query points could leave the feasible ball");
      c.detail = "delta = " + format_real(cfg.delta) + ", tau = " + format_real(tau);
    }
  });
  return out;
}

void require_valid(const ExperimentConfig &cfg) {
  for (const ConfigCheck &c : check_config(cfg))
    if (!c.passed) reject(c.name + ": " + c.detail);
}

} // namespace rdo
