#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rdo/manifold.hpp"
#include "rdo/network.hpp"
#include "rdo/random.hpp"

namespace rdo {

/// Stream of local losses f_{i,t}. Agents are 0-based, rounds 1-based.
class LossOracle {
public:
  virtual ~LossOracle() = default;

  virtual double value(const Point &x, int agent, int round) const = 0;
  /// Riemannian gradient; only the full-information algorithm calls it.
  virtual TangentVector gradient(const Point &x, int agent, int round) const = 0;
  /// acc += ambient coordinates of gradient(x, agent, round). Overridable to
  /// skip the temporaries when summing many gradients at one point.
  virtual void add_gradient(const Point &x, int agent, int round, Vector &acc) const {
    acc += gradient(x, agent, round).coords;
  }
  /// Geodesic Lipschitz constant on the feasible set.
  virtual double lipschitz() const = 0;
};

enum class EtaRule {
  Adaptive, // eta_t = scale / sqrt(t)
  Constant, // eta = scale / sqrt(horizon)
};

struct StepSchedule {
  EtaRule rule = EtaRule::Adaptive;
  double eta_scale = 1.0;
  int horizon = 1;
  double s = 1.0;     // consensus step-size
  double delta = 0.0; // smoothing radius (bandit)
  double tau = 0.0;   // shrinkage factor (bandit)

  double eta(int round) const;
};

struct AgentState {
  Point x;                     // decision x_{i,t}
  Point y_next;                // post-gradient, post-projection y_{i,t+1}
  TangentVector last_gradient; // g_{i,t} or its two-point estimate
};

std::vector<AgentState> initial_states(const Manifold &m, const Point &start,
                                       int agents);

/// Gradient step, projection onto `ball`, then one consensus step with
/// schedule.s. All reads use the round-start snapshot. Throws GradientBlowup
/// when an oracle gradient exceeds 10 L, and InvalidBall if a decision leaves
/// the ball.
std::vector<AgentState> full_info_round(const Manifold &m,
                                        std::span<const AgentState> states,
                                        const LossOracle &oracle,
                                        const WeightMatrix &w,
                                        const GeodesicBall &ball,
                                        const StepSchedule &sched, int round);

struct QueryPair {
  Point plus;  // Exp_x(delta u)
  Point minus; // Exp_x(-delta u)
};

struct BanditRoundResult {
  std::vector<AgentState> states;
  std::vector<QueryPair> queries;
};

/// Two-point estimator g = d/(2 delta) (f(Exp_x(delta u)) - f(Exp_x(-delta u))) u.
TangentVector two_point_estimate(const Manifold &m, const LossOracle &oracle,
                                 int agent, int round, const TangentVector &u,
                                 double delta, QueryPair *queries = nullptr);

/// Two-point bandit round over the shrunken ball shrink_ball(ball, tau).
/// `rngs` holds one independent stream per agent. Throws InfeasibleQuery when
/// a query point leaves `ball`.
BanditRoundResult bandit_round(const Manifold &m, std::span<const AgentState> states,
                               const LossOracle &oracle, const WeightMatrix &w,
                               const GeodesicBall &ball, const StepSchedule &sched,
                               int round, std::span<Rng> rngs);

} // namespace rdo
