#include "rdo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "rdo/consensus.hpp"
#include "rdo/error.hpp"

namespace rdo {

namespace {

std::string format_real(double v, int digits = 17) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

} // namespace

// --- loss stream -----------------------------------------------------------

FrechetLossStream::FrechetLossStream(Manifold chart, GeodesicBall ball, int agents,
                                     int horizon, double spread, double lipschitz,
                                     std::uint64_t seed)
    : chart_(chart), ball_(std::move(ball)), horizon_(horizon), lipschitz_(lipschitz) {
  if (agents < 1 || horizon < 0)
    throw Error(ErrorCode::InvalidConfig, "loss stream needs agents >= 1 and horizon >= 0");
  Rng base_rng = make_rng(seed, {stream::kBasePoints});
  base_.reserve(agents);
  for (int i = 0; i < agents; ++i)
    base_.push_back(sample_uniform_ball(chart_, ball_, base_rng));

  Rng target_rng = make_rng(seed, {stream::kTargets});
  targets_.reserve(static_cast<std::size_t>(agents) * horizon);
  for (int t = 1; t <= horizon; ++t)
    for (int i = 0; i < agents; ++i) {
      if (spread <= 0.0) {
        targets_.push_back(base_[i]);
        continue;
      }
      const GeodesicBall local = make_ball(chart_, base_[i], spread);
      targets_.push_back(
          project_ball(chart_, ball_, sample_uniform_ball(chart_, local, target_rng)));
    }
}

const Point &FrechetLossStream::target(int agent, int round) const {
  if (round < 1 || round > horizon_ || agent < 0 || agent >= agents())
    throw Error(ErrorCode::InvalidConfig,
                "loss requested for agent " + std::to_string(agent) + ", round " +
                    std::to_string(round) + " outside the realized stream");
  return targets_[static_cast<std::size_t>(round - 1) * base_.size() + agent];
}

double FrechetLossStream::value(const Point &x, int agent, int round) const {
  const double d = chart_.dist(x, target(agent, round));
  return d * d;
}

TangentVector FrechetLossStream::gradient(const Point &x, int agent, int round) const {
  return chart_.log(x, target(agent, round)).scaled(-2.0);
}

void FrechetLossStream::add_gradient(const Point &x, int agent, int round,
                                     Vector &acc) const {
  chart_.accumulate_log(x, target(agent, round), -2.0, acc);
}

double FrechetLossStream::global_value(const Point &x, int round) const {
  double acc = 0.0;
  for (int i = 0; i < agents(); ++i) acc += value(x, i, round);
  return acc / agents();
}

std::vector<Point> FrechetLossStream::all_targets() const { return targets_; }

// --- comparator ------------------------------------------------------------

namespace {

struct SumObjective {
  const Manifold &m;
  const LossOracle &oracle;
  int agents;
  int horizon;

  double value(const Point &x) const {
    double acc = 0.0;
    for (int t = 1; t <= horizon; ++t)
      for (int i = 0; i < agents; ++i) acc += oracle.value(x, i, t);
    return acc / (static_cast<double>(agents) * horizon);
  }

  TangentVector gradient(const Point &x) const {
    Vector acc = Vector::Zero(m.ambient_dim());
    for (int t = 1; t <= horizon; ++t)
      for (int i = 0; i < agents; ++i) oracle.add_gradient(x, i, t, acc);
    return m.project_to_tangent(x, acc / (static_cast<double>(agents) * horizon));
  }
};

struct DescentResult {
  Point point;
  double objective;
  double residual;
  bool converged;
};

DescentResult projected_descent(const SumObjective &f, const GeodesicBall &ball,
                                Point x, double tol, int max_iter) {
  const Manifold &m = f.m;
  double fx = f.value(x);
  double step = 1.0;
  double residual = INFINITY;
  for (int it = 0; it < max_iter; ++it) {
    const TangentVector g = f.gradient(x);
    // Let the step recover after earlier backtracking.
    step = std::min(1.0, 2.0 * step);
    for (;;) {
      const Point trial = m.geodesic_step(g.scaled(-step));
      const bool inside = ball_contains(m, ball, trial);
      Point next = inside ? trial : project_ball(m, ball, trial);
      const TangentVector move = m.log(x, next);
      const double moved = m.norm(move);
      // Away from the boundary the gradient mapping is the gradient itself;
      // measuring it through the move would amplify roundoff by 1/step.
      residual = inside ? m.norm(g) : moved / step;
      if (residual < tol) return {x, fx, residual, true};
      const double fn = f.value(next);
      // Sufficient decrease for the projected step, up to the rounding noise
      // of an objective summed over n T terms.
      const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(fx);
      const double predicted = -(m.inner(g, move) + moved * moved / (2.0 * step));
      // Once the predicted decrease drowns in that noise the gradient, which
      // stays accurate, decides instead.
      const bool accept = predicted <= slack && inside
                              ? m.norm(f.gradient(next)) < m.norm(g)
                              : fn <= fx - predicted + slack;
      if (accept || step < 1e-12) {
        x = std::move(next);
        fx = fn;
        break;
      }
      step *= 0.5;
    }
  }
  const TangentVector g = f.gradient(x);
  const Point trial = m.geodesic_step(g.scaled(-step));
  residual = ball_contains(m, ball, trial)
                 ? m.norm(g)
                 : m.dist(x, project_ball(m, ball, trial)) / step;
  return {x, fx, residual, residual < tol};
}

} // namespace

ComparatorResult comparator(const Manifold &m, const LossOracle &oracle, int agents,
                            int horizon, const GeodesicBall &ball, int restarts,
                            std::uint64_t seed, double tol, int max_iter) {
  const SumObjective f{m, oracle, agents, horizon};
  Rng rng = make_rng(seed, {stream::kComparator});
  bool any = false;
  DescentResult best{ball.center, INFINITY, INFINITY, false};
  double worst_residual = 0.0;
  for (int k = 0; k < std::max(1, restarts); ++k) {
    Point start = k == 0 ? ball.center : sample_uniform_ball(m, ball, rng);
    DescentResult r = projected_descent(f, ball, std::move(start), tol, max_iter);
    worst_residual = std::max(worst_residual, r.residual);
    if (r.converged && r.objective < best.objective) {
      best = std::move(r);
      any = true;
    }
  }
  if (!any)
    throw ConvergenceError("comparator descent did not reach residual " +
                               format_real(tol, 3),
                           worst_residual);
  return {best.point, best.objective, best.residual};
}

Point frechet_comparator(const FrechetLossStream &stream) {
  const std::vector<Point> targets = stream.all_targets();
  FrechetOptions opts;
  opts.max_iter = 1000;
  return project_ball(stream.chart(), stream.ball(),
                      frechet_mean(stream.chart(), targets, opts));
}

// --- experiment ------------------------------------------------------------

std::uint64_t repetition_seed(std::uint64_t master, int rep) {
  return derive_seed(master, {static_cast<std::uint64_t>(rep)});
}

RegretTrace run_single(const ExperimentConfig &cfg, std::uint64_t run_seed) {
  const Manifold m = cfg.chart();
  const GeodesicBall ball = cfg.ball();
  const WeightMatrix w = cfg.weights();
  const StepSchedule sched = cfg.schedule();
  const int n = cfg.agents;
  const int T = cfg.horizon;

  const FrechetLossStream losses(m, ball, n, T, cfg.base_spread,
                                 cfg.effective_lipschitz(), run_seed);

  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (int i = 0; i < n; ++i)
    rngs.push_back(make_rng(run_seed, {stream::kAgents, static_cast<std::uint64_t>(i)}));

  std::vector<AgentState> states = initial_states(m, ball.center, n);
  std::vector<double> played(T), var(T), net(T);
  std::vector<Point> decisions(n, ball.center);

  for (int t = 1; t <= T; ++t) {
    for (int i = 0; i < n; ++i) decisions[i] = states[i].x;
    const Point mean = frechet_mean(m, decisions);
    double v = 0.0, worst = 0.0;
    for (const Point &x : decisions) {
      const double d = m.dist(x, mean);
      v += d * d;
      worst = std::max(worst, d);
    }
    var[t - 1] = v / n;
    net[t - 1] = worst;

    try {
      double acc = 0.0;
      if (cfg.algorithm == Algorithm::Full) {
        for (const Point &x : decisions) acc += losses.global_value(x, t);
        states = full_info_round(m, states, losses, w, ball, sched, t);
      } else {
        BanditRoundResult r = bandit_round(m, states, losses, w, ball, sched, t, rngs);
        for (const QueryPair &q : r.queries)
          acc += 0.5 * (losses.global_value(q.plus, t) + losses.global_value(q.minus, t));
        states = std::move(r.states);
      }
      played[t - 1] = acc / n;
    } catch (const Error &e) {
      throw Error(e.code(), "round " + std::to_string(t) + ": " + e.what());
    }
  }

  const ComparatorResult best =
      comparator(m, losses, n, T, ball, cfg.comparator_restarts, run_seed);
  const double cross_gap = T > 0 ? m.dist(best.point, frechet_comparator(losses)) : 0.0;

  RegretTrace trace;
  trace.rows.reserve(T);
  double cum = 0.0;
  for (int t = 1; t <= T; ++t) {
    const double inst = played[t - 1] - losses.global_value(best.point, t);
    cum += inst;
    trace.rows.push_back({t, inst, cum, var[t - 1], net[t - 1]});
  }
  trace.metadata = {{"comparator.objective", format_real(best.objective)},
                    {"comparator.residual", format_real(best.residual, 3)},
                    {"comparator.frechet_gap", format_real(cross_gap, 3)}};
  return trace;
}

RegretTrace run_experiment(const ExperimentConfig &cfg) {
  require_valid(cfg);
  const WeightMatrix w = cfg.weights();
  const DerivedConstants constants = derive(cfg.curvature_context(w.sigma2()));

  RegretTrace out;
  out.metadata.emplace_back("version", kVersion);
  for (const auto &[k, v] : cfg.entries()) out.metadata.emplace_back("config." + k, v);
  out.metadata.emplace_back("sigma2", format_real(w.sigma2()));
  for (const auto &[k, v] : constants.entries())
    out.metadata.emplace_back("constants." + k, format_real(v));
  out.metadata.emplace_back("lipschitz", format_real(cfg.effective_lipschitz()));
  if (cfg.algorithm == Algorithm::Bandit)
    out.metadata.emplace_back("tau", format_real(cfg.effective_tau()));

  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    const std::uint64_t seed = repetition_seed(cfg.seed, rep);
    RegretTrace single;
    try {
      single = run_single(cfg, seed);
    } catch (const Error &e) {
      throw Error(e.code(), "repetition " + std::to_string(rep) + ": " + e.what());
    }
    const std::string prefix = "rep" + std::to_string(rep) + ".";
    out.metadata.emplace_back(prefix + "seed", std::to_string(seed));
    for (const auto &[k, v] : single.metadata) out.metadata.emplace_back(prefix + k, v);

    if (rep == 0) {
      out.rows = std::move(single.rows);
      continue;
    }
    for (std::size_t r = 0; r < out.rows.size(); ++r) {
      out.rows[r].inst_regret += single.rows[r].inst_regret;
      out.rows[r].cum_regret += single.rows[r].cum_regret;
      out.rows[r].variance += single.rows[r].variance;
      out.rows[r].network_error += single.rows[r].network_error;
    }
  }
  const double reps = static_cast<double>(cfg.repetitions);
  if (cfg.repetitions > 1)
    for (TraceRow &row : out.rows) {
      row.inst_regret /= reps;
      row.cum_regret /= reps;
      row.variance /= reps;
      row.network_error /= reps;
    }
  return out;
}

// --- output ----------------------------------------------------------------

std::string format_csv(const RegretTrace &trace) {
  std::string out;
  for (const auto &[k, v] : trace.metadata) out += "# " + k + " = " + v + "\n";
  out += kCsvHeader;
  out += '\n';
  char buf[256];
  for (const TraceRow &r : trace.rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g,%.12g\n", r.t, r.inst_regret,
                  r.cum_regret, r.variance, r.network_error);
    out += buf;
  }
  return out;
}

void emit_csv(const RegretTrace &trace, const std::string &path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) fs::create_directories(target.parent_path(), ec);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << format_csv(trace);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, target, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move output into " + path + ": " + ec.message());
}

ExperimentConfig config_from_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  ExperimentConfig cfg;
  const std::string prefix = "# config.";
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) != 0) break;
    if (line.rfind(prefix, 0) != 0) continue;
    const std::string body = line.substr(prefix.size());
    const auto eq = body.find(" = ");
    if (eq == std::string::npos) continue;
    cfg.set(body.substr(0, eq), body.substr(eq + 3));
  }
  return cfg;
}

double loglog_slope(const RegretTrace &trace, int t_lo, int t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const TraceRow &r : trace.rows) {
    if (r.t < t_lo || r.t > t_hi) continue;
    if (!(r.cum_regret > 0.0))
      throw Error(ErrorCode::DomainViolation,
                  "log-log slope needs positive cumulative regret; round " +
                      std::to_string(r.t) + " has " + format_real(r.cum_regret, 6));
    const double x = std::log(static_cast<double>(r.t));
    const double y = std::log(r.cum_regret);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2)
    throw Error(ErrorCode::DomainViolation, "log-log slope needs at least two rounds");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

double empirical_contraction(const ExperimentConfig &cfg, int samples) {
  return worst_contraction_ratio(cfg.chart(), cfg.ball(), cfg.weights(), cfg.s, samples,
                                 derive_seed(cfg.seed, {stream::kCalibration}));
}

std::string resolve_output_path(const std::string &path) {
  const char *dir = std::getenv("RDO_OUTPUT_DIR");
  if (!dir || !*dir || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

} // namespace rdo
