#include "remotetrack/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "remotetrack/stationary.hpp"

namespace remotetrack::analytics {

namespace {

void require_probability(double v, const char* name) {
  if (!(std::isfinite(v) && v >= 0.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

void require_two_state_chain(const ConsecutiveChain& cc) {
  require_probability(cc.p_0e, "p_0e");
  require_probability(cc.p_ee, "p_ee");
}

// Joint law with equal diagonal entries `diag` and equal off-diagonal
// entries `off`.
JointStationary symmetric_joint(int n, double diag, double off, PolicyKind policy) {
  Eigen::MatrixXd pi = Eigen::MatrixXd::Constant(n, n, off);
  pi.diagonal().setConstant(diag);
  return {pi, policy};
}

}  // namespace

double p_error_rs(const SourceModel& source, double p_sample, double p_s) {
  require_probability(p_sample, "p_sample");
  require_probability(p_s, "p_s");
  const double p = source.p_change();
  // A frozen source started in sync never errs.
  if (p == 0.0) return 0.0;

  const double a = p_sample * p_s;
  switch (source.n_states()) {
    case 2:
      return 2.0 * (p - p * a) / (4.0 * p + 2.0 * a - 4.0 * p * a);
    case 3: {
      const ErrorChain c = build_error_chain(source, p_sample, p_s);
      const double phi = 1.0 + c(2, 1) - c(1, 1) - c(0, 0) - c(0, 0) * c(2, 1) +
                         c(0, 0) * c(1, 1) + c(0, 1) * c(2, 0) - c(0, 1) * c(1, 0);
      return phi / (phi + c(2, 0) - c(2, 0) * c(1, 1) + c(1, 0) * c(2, 1));
    }
    default: {
      const StationaryDistribution s = stationary(build_error_chain(source, p_sample, p_s));
      return 1.0 - s.pi(0);
    }
  }
}

std::optional<double> p_error_policy(PolicyKind policy, const SourceModel& source, double p_s) {
  require_probability(p_s, "p_s");
  if (policy != PolicyKind::change_aware && policy != PolicyKind::semantics_aware) {
    throw std::invalid_argument("p_error_policy covers change-aware and semantics-aware only");
  }
  const double p = source.p_change();
  if (p == 0.0) return 0.0;
  const int n = source.n_states();
  if (policy == PolicyKind::change_aware) {
    if (n == 2) return 2.0 * (1.0 - p_s) / (4.0 - 2.0 * p_s);
    if (n == 3) return 6.0 * (1.0 - p_s) / (9.0 - 3.0 * p_s);
    return std::nullopt;
  }
  if (n == 2) return 2.0 * p * (1.0 - p_s) / (4.0 * p + 2.0 * p_s - 4.0 * p * p_s);
  if (n == 3) return 6.0 * p * (1.0 - p_s) / (9.0 * p + 3.0 * p_s - 9.0 * p * p_s);
  return std::nullopt;
}

double variance(double p_error) {
  require_probability(p_error, "p_error");
  return p_error - p_error * p_error;
}

ConsecutiveChain consecutive_from_chain(const ErrorChain& chain) {
  return {1.0 - chain(0, 0), 1.0 - chain(1, 0)};
}

double consecutive_stationary(const ConsecutiveChain& cc, int run_length) {
  require_two_state_chain(cc);
  if (run_length < 0) throw std::invalid_argument("run_length must be >= 0");
  if (cc.p_ee >= 1.0) {
    throw std::domain_error("p_ee = 1: erroneous runs never end, no stationary law");
  }
  const double denom = 1.0 + cc.p_0e - cc.p_ee;
  if (run_length == 0) return (1.0 - cc.p_ee) / denom;
  return cc.p_0e * (1.0 - cc.p_ee) * std::pow(cc.p_ee, run_length - 1) / denom;
}

double avg_consecutive_error(const ConsecutiveChain& cc) {
  require_two_state_chain(cc);
  if (cc.p_ee >= 1.0) throw std::domain_error("p_ee = 1: average consecutive error diverges");
  const double e = cc.p_ee;
  return cc.p_0e / (1.0 + cc.p_0e - 2.0 * e - cc.p_0e * e + e * e);
}

double memory_cost(const ConsecutiveChain& cc, double kappa, int horizon) {
  require_two_state_chain(cc);
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be > 0");
  if (horizon < 1) throw std::invalid_argument("memory horizon n must be >= 1");

  const double lead = kappa * cc.p_0e * (1.0 - cc.p_ee) / (1.0 + cc.p_0e - cc.p_ee);
  const double r = kappa * cc.p_ee;
  // (1 - r^n) / (1 - r); near r = 1 the quotient cancels badly, so sum the
  // n geometric terms directly (n * lead in the limit).
  double geometric;
  if (std::abs(1.0 - r) < 1e-4) {
    geometric = 0.0;
    for (int k = 0; k < horizon; ++k) geometric = geometric * r + 1.0;
  } else {
    geometric = (1.0 - std::pow(r, horizon)) / (1.0 - r);
  }
  return lead * geometric;
}

std::optional<JointStationary> joint_stationary(PolicyKind policy, const SourceModel& source,
                                                double p_sample, double p_s) {
  require_probability(p_s, "p_s");
  if (policy == PolicyKind::uniform) {
    throw std::invalid_argument("no joint stationary closed form for the uniform policy");
  }
  const int n = source.n_states();
  if (n != 2 && n != 3) return std::nullopt;

  const double p = source.p_change();
  double a = 0.0;  // probability a jump is sampled and decoded
  switch (policy) {
    case PolicyKind::randomized_stationary:
      require_probability(p_sample, "p_sample");
      a = p_sample * p_s;
      break;
    case PolicyKind::semantics_aware:
      a = p_s;
      break;
    case PolicyKind::change_aware:
      // Independent of p: every jump is sampled.
      if (n == 2) {
        return symmetric_joint(2, 1.0 / (4.0 - 2.0 * p_s), (1.0 - p_s) / (4.0 - 2.0 * p_s), policy);
      }
      return symmetric_joint(3, (1.0 + p_s) / (9.0 - 3.0 * p_s), (1.0 - p_s) / (9.0 - 3.0 * p_s),
                             policy);
    case PolicyKind::uniform:
      break;
  }

  if (n == 2) {
    const double denom = 4.0 * p + 2.0 * a * (1.0 - 2.0 * p);
    if (denom <= 0.0) throw std::domain_error("frozen, never-corrected source: law not unique");
    return symmetric_joint(2, (p + (1.0 - p) * a) / denom, p * (1.0 - a) / denom, policy);
  }
  const double denom = 9.0 * p + 3.0 * a - 9.0 * p * a;
  if (denom <= 0.0) throw std::domain_error("frozen, never-corrected source: law not unique");
  return symmetric_joint(3, (p + a - p * a) / denom, (p - p * a) / denom, policy);
}

double actuation_cost(const Eigen::MatrixXd& joint, const CostMatrix& costs) {
  if (joint.rows() != costs.n_states() || joint.cols() != costs.n_states()) {
    throw std::invalid_argument("joint law and cost matrix dimensions differ");
  }
  double total = 0.0;
  for (int i = 0; i < costs.n_states(); ++i) {
    for (int j = 0; j < costs.n_states(); ++j) {
      if (i != j) total += costs(i, j) * joint(i, j);
    }
  }
  return total;
}

double actuation_cost(const JointStationary& joint, const CostMatrix& costs) {
  return actuation_cost(joint.pi, costs);
}

OptimizationResult optimize_rs(const SourceModel& source, double p_s, double eta,
                               int uniform_period_d) {
  if (source.n_states() != 2) {
    throw std::invalid_argument("optimize_rs has a closed form for N = 2 only");
  }
  require_probability(p_s, "p_s");
  if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be > 0");
  if (uniform_period_d < 1) throw std::invalid_argument("uniform period must be >= 1");

  OptimizationResult r;
  r.eta = eta;
  r.period_d = uniform_period_d;
  r.p_star = std::min(eta, 1.0);
  r.p_error_star = p_error_rs(source, r.p_star, p_s);

  const double p = source.p_change();
  const double sa_rate = *sampling_rate(PolicyConfig::semantics_aware(), source,
                                        ChannelModel::direct(p_s));
  r.feasibility.semantics_aware = sa_rate <= eta;
  r.feasibility.change_aware = p <= eta;
  r.feasibility.uniform = 1.0 / static_cast<double>(uniform_period_d) <= eta;
  return r;
}

double rs_vs_ca_threshold(const SourceModel& source, double p_s) {
  if (source.n_states() != 3) throw std::invalid_argument("threshold is derived for N = 3");
  require_probability(p_s, "p_s");
  const double p = source.p_change();
  if (p == 0.0) return 0.0;
  return 2.0 * p / (1.0 - p_s * (1.0 - 2.0 * p));
}

bool rs_beats_change_aware(const SourceModel& source, double p_sample, double p_s) {
  return p_sample >= rs_vs_ca_threshold(source, p_s);
}

AnalyticMetrics evaluate_closed_form(const PolicyConfig& policy, const SourceModel& source,
                                     const ChannelModel& channel, double kappa, int memory_horizon,
                                     const CostMatrix& costs) {
  policy.validate();
  const double p_s = channel.success_probability();
  AnalyticMetrics m;
  m.sampling_rate = sampling_rate(policy, source, channel);

  switch (policy.kind) {
    case PolicyKind::uniform:
      return m;
    case PolicyKind::randomized_stationary: {
      m.p_error = p_error_rs(source, policy.p_sample, p_s);
      const ConsecutiveChain cc =
          consecutive_from_chain(build_error_chain(source, policy.p_sample, p_s));
      if (cc.p_ee < 1.0) {
        m.avg_consecutive_error = avg_consecutive_error(cc);
        m.cost_memory_error = memory_cost(cc, kappa, memory_horizon);
      }
      break;
    }
    case PolicyKind::change_aware:
    case PolicyKind::semantics_aware:
      m.p_error = p_error_policy(policy.kind, source, p_s);
      break;
  }
  if (m.p_error) m.variance = variance(*m.p_error);
  if (source.p_change() > 0.0) {
    if (auto joint = joint_stationary(policy.kind, source, policy.p_sample, p_s)) {
      m.cost_actuation_error = actuation_cost(*joint, costs);
    }
  } else {
    m.cost_actuation_error = 0.0;
  }
  return m;
}

}  // namespace remotetrack::analytics
