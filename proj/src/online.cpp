#include "rdo/online.hpp"

#include <cmath>

#include "rdo/consensus.hpp"
#include "rdo/error.hpp"

namespace rdo {

namespace {

constexpr double kFeasibilityTol = 1e-9;

void check_feasible(const Manifold &m, const GeodesicBall &ball,
                    const std::vector<AgentState> &states, int round) {
  for (std::size_t i = 0; i < states.size(); ++i)
    if (!ball_contains(m, ball, states[i].x, kFeasibilityTol))
      throw Error(ErrorCode::InvalidBall,
                  "round " + std::to_string(round) + ": agent " + std::to_string(i) +
                      " left the feasible ball (distance " +
                      std::to_string(m.dist(ball.center, states[i].x)) + " > " +
                      std::to_string(ball.radius) + ")");
}

std::vector<AgentState> finish_round(const Manifold &m, std::vector<AgentState> next,
                                     const WeightMatrix &w, double s) {
  std::vector<Point> ys;
  ys.reserve(next.size());
  for (const AgentState &a : next) ys.push_back(a.y_next);
  std::vector<Point> xs = consensus_step(m, ys, w, s);
  for (std::size_t i = 0; i < next.size(); ++i) next[i].x = std::move(xs[i]);
  return next;
}

} // namespace

double StepSchedule::eta(int round) const {
  switch (rule) {
  case EtaRule::Adaptive: return eta_scale / std::sqrt(static_cast<double>(round));
  case EtaRule::Constant: return eta_scale / std::sqrt(static_cast<double>(horizon));
  }
  return eta_scale;
}

std::vector<AgentState> initial_states(const Manifold &m, const Point &start,
                                       int agents) {
  return std::vector<AgentState>(agents, AgentState{start, start, m.zero(start)});
}

std::vector<AgentState> full_info_round(const Manifold &m,
                                        std::span<const AgentState> states,
                                        const LossOracle &oracle,
                                        const WeightMatrix &w,
                                        const GeodesicBall &ball,
                                        const StepSchedule &sched, int round) {
  const double eta = sched.eta(round);
  const double limit = 10.0 * oracle.lipschitz();
  std::vector<AgentState> next(states.begin(), states.end());
  for (std::size_t i = 0; i < next.size(); ++i) {
    const Point &x = states[i].x;
    TangentVector g = oracle.gradient(x, static_cast<int>(i), round);
    const double gn = m.norm(g);
    if (gn > limit)
      throw Error(ErrorCode::GradientBlowup,
                  "round " + std::to_string(round) + ": agent " + std::to_string(i) +
                      " gradient norm " + std::to_string(gn) + " exceeds 10 L");
    const Point z = m.geodesic_step(g.scaled(-eta));
    next[i].y_next = project_ball(m, ball, z);
    next[i].last_gradient = std::move(g);
  }
  next = finish_round(m, std::move(next), w, sched.s);
  check_feasible(m, ball, next, round);
  return next;
}

TangentVector two_point_estimate(const Manifold &m, const LossOracle &oracle,
                                 int agent, int round, const TangentVector &u,
                                 double delta, QueryPair *queries) {
  Point plus = m.exp(u.scaled(delta));
  Point minus = m.exp(u.scaled(-delta));
  const double diff = oracle.value(plus, agent, round) - oracle.value(minus, agent, round);
  TangentVector g = u.scaled(static_cast<double>(m.dim()) / (2.0 * delta) * diff);
  if (queries) *queries = {std::move(plus), std::move(minus)};
  return g;
}

BanditRoundResult bandit_round(const Manifold &m, std::span<const AgentState> states,
                               const LossOracle &oracle, const WeightMatrix &w,
                               const GeodesicBall &ball, const StepSchedule &sched,
                               int round, std::span<Rng> rngs) {
  if (rngs.size() != states.size())
    throw Error(ErrorCode::InvalidConfig, "bandit round needs one rng stream per agent");
  const GeodesicBall shrunk = shrink_ball(ball, sched.tau);
  const double eta = sched.eta(round);

  BanditRoundResult out;
  out.states.assign(states.begin(), states.end());
  out.queries.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Point &x = states[i].x;
    const int agent = static_cast<int>(i);
    const TangentVector u = m.sample_unit_tangent(x, rngs[i]);
    TangentVector g = two_point_estimate(m, oracle, agent, round, u, sched.delta,
                                         &out.queries[i]);
    for (const Point *q : {&out.queries[i].plus, &out.queries[i].minus})
      if (!ball_contains(m, ball, *q, kFeasibilityTol))
        throw Error(ErrorCode::InfeasibleQuery,
                    "round " + std::to_string(round) + ": agent " +
                        std::to_string(i) + " queried outside the feasible ball; "
                        "delta is too large for the shrinkage factor");
    const Point z = m.geodesic_step(g.scaled(-eta));
    out.states[i].y_next = project_ball(m, shrunk, z);
    out.states[i].last_gradient = std::move(g);
  }
  out.states = finish_round(m, std::move(out.states), w, sched.s);
  check_feasible(m, shrunk, out.states, round);
  return out;
}

} // namespace rdo
