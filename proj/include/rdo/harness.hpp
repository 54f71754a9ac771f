#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rdo/config.hpp"
#include "rdo/manifold.hpp"
#include "rdo/online.hpp"

namespace rdo {

/// Online Fréchet-mean losses f_{i,t}(x) = d^2(x, z_{i,t}). Base points z_i
/// are uniform on the feasible ball; each round z_{i,t} is drawn uniformly
/// from the `spread`-ball around z_i and projected back onto the feasible
/// ball. All targets for rounds 1..horizon are realized at construction, so
/// a stream can be replayed for regret accounting.
class FrechetLossStream : public LossOracle {
public:
  FrechetLossStream(Manifold chart, GeodesicBall ball, int agents, int horizon,
                    double spread, double lipschitz, std::uint64_t seed);

  double value(const Point &x, int agent, int round) const override;
  TangentVector gradient(const Point &x, int agent, int round) const override;
  void add_gradient(const Point &x, int agent, int round, Vector &acc) const override;
  double lipschitz() const override { return lipschitz_; }

  /// f_t(x) = (1/n) sum_i f_{i,t}(x).
  double global_value(const Point &x, int round) const;

  const Point &target(int agent, int round) const;
  const Point &base_point(int agent) const { return base_[agent]; }
  int agents() const { return static_cast<int>(base_.size()); }
  int horizon() const { return horizon_; }
  const Manifold &chart() const { return chart_; }
  const GeodesicBall &ball() const { return ball_; }

  /// All realized targets, round-major.
  std::vector<Point> all_targets() const;

private:
  Manifold chart_;
  GeodesicBall ball_;
  int horizon_;
  double lipschitz_;
  std::vector<Point> base_;
  std::vector<Point> targets_; // (round - 1) * n + agent
};

struct ComparatorResult {
  Point point;
  double objective = 0.0; // (1/T) sum_t f_t(point)
  double residual = 0.0;  // gradient-mapping norm at point
};

/// argmin over the ball of sum_t f_t by projected Riemannian gradient descent
/// with Armijo backtracking, from the ball center plus `restarts - 1` uniform
/// random starts; the lowest objective wins. Throws ConvergenceError when no
/// start reaches the residual tolerance.
ComparatorResult comparator(const Manifold &m, const LossOracle &oracle, int agents,
                            int horizon, const GeodesicBall &ball, int restarts,
                            std::uint64_t seed, double tol = 1e-8,
                            int max_iter = 500);

/// Fréchet mean of all realized targets, projected onto the ball. For the
/// squared-distance family this is the comparator by a second route.
Point frechet_comparator(const FrechetLossStream &stream);

struct TraceRow {
  int t = 0;
  double inst_regret = 0.0;
  double cum_regret = 0.0;
  double variance = 0.0;
  double network_error = 0.0;
};

struct RegretTrace {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<TraceRow> rows;

  double final_regret() const { return rows.empty() ? 0.0 : rows.back().cum_regret; }
};

/// Runs `cfg.repetitions` independent runs (distinct derived seeds) of the
/// configured algorithm and averages the traces pointwise. Errors are
/// rethrown with the repetition, round and agent context attached.
RegretTrace run_experiment(const ExperimentConfig &cfg);

/// One repetition with an explicit seed; the building block of
/// run_experiment.
RegretTrace run_single(const ExperimentConfig &cfg, std::uint64_t run_seed);

/// Seed of repetition `rep` under `master`.
std::uint64_t repetition_seed(std::uint64_t master, int rep);

/// Header, '#'-prefixed metadata, then one row per round with 12 significant
/// digits. Written to a temporary file and renamed into place.
void emit_csv(const RegretTrace &trace, const std::string &path);
std::string format_csv(const RegretTrace &trace);

inline constexpr const char *kCsvHeader = "t,inst_regret,cum_regret,variance,network_error";
inline constexpr const char *kVersion = "0.1.0";

/// Rebuilds the experiment config from the `config.*` metadata of a CSV.
ExperimentConfig config_from_csv(const std::string &path);

/// Least-squares slope of log(cum_regret) against log(t) over rows with
/// t in [t_lo, t_hi]. Requires positive regret on that window.
double loglog_slope(const RegretTrace &trace, int t_lo, int t_hi);

/// Worst empirical contraction ratio for the configuration's network and
/// step-size, over `samples` random configurations in the ball.
double empirical_contraction(const ExperimentConfig &cfg, int samples);

/// Resolves `path` against $RDO_OUTPUT_DIR when it is relative and the
/// variable is set.
std::string resolve_output_path(const std::string &path);

} // namespace rdo
