#include "pdsplit/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pdsplit/errors.hpp"

namespace pdsplit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Slack for the non-strict init inequalities so that parameters sitting
// exactly on the bound (e.g. default_tau0 output) are not rejected by
// floating-point rounding.
constexpr double kFeasSlack = 1e-12;

void require_block_shapes(const IterateState& state,
                          const PrimalDualProblem& problem) {
  if (state.x.size() != problem.primal_dim())
    throw ParameterError("solver step: primal dimension mismatch");
  if (state.v.size() != problem.blocks.size())
    throw ParameterError("solver step: dual block count mismatch");
  for (std::size_t i = 0; i < state.v.size(); ++i)
    if (state.v[i].size() != problem.blocks[i].L.codomain_dim)
      throw ParameterError("solver step: dual block dimension mismatch");
}

// x_n - tau (sum_i L_i^* v_{i,n} + C x_n - z)
Vec primal_forward(const IterateState& state, const PrimalDualProblem& problem,
                   double tau) {
  Vec drift(problem.primal_dim(), 0.0);
  for (std::size_t i = 0; i < problem.blocks.size(); ++i)
    axpy(1.0, problem.blocks[i].L.adjoint_apply(state.v[i]), drift);
  if (!problem.forward_C.is_zero)
    axpy(1.0, problem.forward_C.evaluate(state.x), drift);
  axpy(-1.0, problem.z, drift);

  Vec arg = state.x;
  axpy(-tau, drift, arg);
  return arg;
}

double theta_formula(double tau, double gamma, double eta, double lambda) {
  // reduces to 1/sqrt(1 + 2 tau gamma/lambda) when eta = 0
  return 1.0 / std::sqrt(1.0 + tau * (2.0 * gamma - eta * tau) / lambda);
}

double sum_sigma_normsq(const std::vector<double>& sigma,
                        const std::vector<double>& norms_sq) {
  if (sigma.size() != norms_sq.size())
    throw ParameterError("sigma and norms_sq must have one entry per block");
  double s = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) s += sigma[i] * norms_sq[i];
  return s;
}

}  // namespace

double AccelSchedule::product_drift() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < sigma_n.size(); ++i) {
    const double now = theta_n * tau_n * sigma_n[i];
    const double initial = tau1 * sigma0[i];
    worst = std::max(worst, std::abs(now - initial) / std::abs(initial));
  }
  return worst;
}

IterateState make_initial_state(const PrimalDualProblem& problem, Vec x0) {
  std::vector<Vec> v0;
  v0.reserve(problem.blocks.size());
  for (const auto& block : problem.blocks)
    v0.emplace_back(block.L.codomain_dim, 0.0);
  return make_initial_state(problem, std::move(x0), std::move(v0));
}

IterateState make_initial_state(const PrimalDualProblem& problem, Vec x0,
                                std::vector<Vec> v0) {
  IterateState state;
  state.x = std::move(x0);
  state.x_prev = state.x;
  state.v = std::move(v0);
  state.y = state.x;
  require_block_shapes(state, problem);
  return state;
}

VuValidation validate_vu_params(double tau, const std::vector<double>& sigma,
                                double eta_cocoercivity,
                                const std::vector<double>& nu,
                                const std::vector<double>& norms_sq) {
  if (!(tau > 0.0)) throw ParameterError("validate_vu_params: tau must be > 0");
  for (double s : sigma)
    if (!(s > 0.0))
      throw ParameterError("validate_vu_params: sigma_i must be > 0");
  if (!(eta_cocoercivity > 0.0))
    throw ParameterError("validate_vu_params: eta must be > 0");
  if (nu.size() != sigma.size())
    throw ParameterError("validate_vu_params: nu needs one entry per block");

  double min_inv_step = 1.0 / tau;
  for (double s : sigma) min_inv_step = std::min(min_inv_step, 1.0 / s);
  double min_const = eta_cocoercivity;
  for (double n : nu) min_const = std::min(min_const, n);

  const double root_arg = tau * sum_sigma_normsq(sigma, norms_sq);
  const double root_factor = 1.0 - std::sqrt(root_arg);

  VuValidation out;
  if (root_factor <= 0.0) {
    // the displayed condition cannot hold once the square-root factor is
    // nonpositive, even for arbitrarily strong operators
    out.feasible = false;
    out.margin = std::isinf(min_const) ? -kInf
                                       : 2.0 * min_inv_step * min_const *
                                                 root_factor -
                                             1.0;
    if (!(out.margin <= 0.0)) out.margin = -kInf;
    return out;
  }
  const double lhs = 2.0 * min_inv_step * min_const * root_factor;
  out.margin = lhs - 1.0;
  out.feasible = out.margin > 0.0;
  return out;
}

FeasibilityReport check_accel_init(double tau0,
                                   const std::vector<double>& sigma0,
                                   double lambda,
                                   const StrongMonotonicityCert& cert,
                                   double eta,
                                   const std::vector<double>& norms_sq) {
  if (!(cert.gamma > 0.0))
    throw ParameterError("check_accel_init: cert.gamma must be > 0");
  if (eta < 0.0) throw ParameterError("check_accel_init: eta must be >= 0");

  FeasibilityReport report;
  auto add = [&report](std::string name, double margin, bool ok) {
    report.items.push_back({std::move(name), margin, ok});
    report.feasible = report.feasible && ok;
  };

  add("tau0 > 0", tau0, tau0 > 0.0);
  bool sigma_pos = true;
  double min_sigma = kInf;
  for (double s : sigma0) {
    sigma_pos = sigma_pos && s > 0.0;
    min_sigma = std::min(min_sigma, s);
  }
  add("sigma0_i > 0", min_sigma, sigma_pos);

  if (eta > 0.0) {
    add("tau0 < 2*gamma/eta", 2.0 * cert.gamma / eta - tau0,
        tau0 < 2.0 * cert.gamma / eta);
    add("lambda >= eta+1", lambda - (eta + 1.0), lambda >= eta + 1.0);
  } else {
    add("lambda >= 1", lambda - 1.0, lambda >= 1.0);
  }

  if (tau0 > 0.0 && sigma_pos) {
    const double lhs = tau0 * sum_sigma_normsq(sigma0, norms_sq);
    const double rhs = std::sqrt(
        1.0 + tau0 * (2.0 * cert.gamma - eta * tau0) / lambda);
    add(eta > 0.0
            ? "tau0*sum(sigma0_i*normsq_i) <= sqrt(1+tau0*(2*gamma-eta*tau0)/lambda)"
            : "tau0*sum(sigma0_i*normsq_i) <= sqrt(1+2*tau0*gamma/lambda)",
        rhs - lhs, lhs <= rhs * (1.0 + kFeasSlack));
  }
  return report;
}

AccelSchedule accel_init(double tau0, const std::vector<double>& sigma0,
                         double lambda, const StrongMonotonicityCert& cert,
                         double eta, const std::vector<double>& norms_sq) {
  const FeasibilityReport report =
      check_accel_init(tau0, sigma0, lambda, cert, eta, norms_sq);
  if (!report.feasible) {
    std::string what = "accel_init: violated constraints:";
    for (const auto& item : report.items)
      if (!item.ok) what += " [" + item.name + "]";
    throw InfeasibleError(what);
  }

  AccelSchedule schedule;
  schedule.tau_n = tau0;
  schedule.sigma_n = sigma0;
  schedule.lambda = lambda;
  schedule.theta_n = theta_formula(tau0, cert.gamma, eta, lambda);
  schedule.n = 0;
  schedule.gamma = cert.gamma;
  schedule.eta = eta;
  schedule.tau0 = tau0;
  schedule.tau1 = schedule.theta_n * tau0;
  schedule.sigma0 = sigma0;
  schedule.sum_sigma0_normsq = sum_sigma_normsq(sigma0, norms_sq);
  return schedule;
}

double default_tau0(const std::vector<double>& sigma0,
                    const std::vector<double>& norms_sq,
                    const StrongMonotonicityCert& cert, double eta,
                    double lambda) {
  if (!(cert.gamma > 0.0))
    throw ParameterError("default_tau0: cert.gamma must be > 0");
  if (!(lambda > 0.0)) throw ParameterError("default_tau0: lambda must be > 0");
  const double s = sum_sigma_normsq(sigma0, norms_sq);
  const double g = cert.gamma / lambda;
  const double denom = s * s + eta / lambda;
  if (denom <= 0.0)
    throw ParameterError("default_tau0: sum sigma0_i*normsq_i and eta all zero");
  return (g + std::sqrt(g * g + s * s + eta / lambda)) / denom;
}

FeasibilityReport check_linear_rate(const StrongMonotonicityCert& cert,
                                    double eta, const std::vector<double>& nu,
                                    const std::vector<double>& norms_sq,
                                    std::optional<double> theta_choice) {
  FeasibilityReport report;
  auto add = [&report](std::string name, double margin, bool ok) {
    report.items.push_back({std::move(name), margin, ok});
    report.feasible = report.feasible && ok;
  };

  add("gamma > 0", cert.gamma, cert.gamma > 0.0);
  add("delta present", cert.delta ? 1.0 : 0.0, cert.delta.has_value());
  if (!cert.delta) return report;
  const auto& delta = *cert.delta;
  bool delta_pos = delta.size() == norms_sq.size();
  double min_delta = kInf;
  for (double d : delta) {
    delta_pos = delta_pos && d > 0.0;
    min_delta = std::min(min_delta, d);
  }
  add("delta_i > 0 per block", min_delta, delta_pos);
  if (!report.feasible) return report;

  if (nu.size() != delta.size())
    throw ParameterError("check_linear_rate: nu needs one entry per block");

  // mu upper bound; terms with a zero Lipschitz constant drop out
  double bound = kInf;
  if (eta > 0.0) bound = std::min(bound, cert.gamma * cert.gamma / (eta * eta));
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (nu[i] > 0.0)
      bound = std::min(bound, delta[i] * delta[i] / (nu[i] * nu[i]));
  double weighted = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i)
    weighted += norms_sq[i] / delta[i];
  if (weighted > 0.0) bound = std::min(bound, std::sqrt(cert.gamma / weighted));
  add("mu bound finite and positive", bound,
      bound > 0.0 && std::isfinite(bound));
  if (!report.feasible) return report;

  const double mu = bound;
  if (theta_choice) {
    const double lo = 2.0 / (2.0 + mu);
    add("theta in [2/(2+mu), 1]",
        std::min(*theta_choice - lo, 1.0 - *theta_choice),
        *theta_choice >= lo - kFeasSlack && *theta_choice <= 1.0 + kFeasSlack);
  }
  return report;
}

LinearRateParams linear_rate_init(const StrongMonotonicityCert& cert,
                                  double eta, const std::vector<double>& nu,
                                  const std::vector<double>& norms_sq,
                                  std::optional<double> theta_choice) {
  const FeasibilityReport report =
      check_linear_rate(cert, eta, nu, norms_sq, theta_choice);
  if (!report.feasible) {
    std::string what = "linear_rate_init: violated constraints:";
    for (const auto& item : report.items)
      if (!item.ok) what += " [" + item.name + "]";
    // a bad theta_choice is a parameter error per contract
    for (const auto& item : report.items)
      if (!item.ok && item.name.rfind("theta", 0) == 0)
        throw ParameterError(what);
    throw InfeasibleError(what);
  }
  const auto& delta = *cert.delta;

  LinearRateParams params;
  double bound = kInf;
  if (eta > 0.0) bound = std::min(bound, cert.gamma * cert.gamma / (eta * eta));
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (nu[i] > 0.0)
      bound = std::min(bound, delta[i] * delta[i] / (nu[i] * nu[i]));
  double weighted = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i)
    weighted += norms_sq[i] / delta[i];
  if (weighted > 0.0) bound = std::min(bound, std::sqrt(cert.gamma / weighted));

  params.mu = bound;  // largest admissible mu: smallest omega at default theta
  params.tau = params.mu / (2.0 * cert.gamma);
  params.sigma.resize(delta.size());
  for (std::size_t i = 0; i < delta.size(); ++i)
    params.sigma[i] = params.mu / (2.0 * delta[i]);
  params.theta = theta_choice ? *theta_choice : 2.0 / (2.0 + params.mu);
  params.omega = 2.0 * (1.0 + params.theta) / (4.0 + params.mu);
  return params;
}

void vu_step(IterateState& state, const PrimalDualProblem& problem,
             const FixedParams& params) {
  require_block_shapes(state, problem);
  if (params.sigma.size() != problem.blocks.size())
    throw ParameterError("vu_step: sigma needs one entry per block");

  Vec x_next =
      problem.resolvent_A.evaluate(primal_forward(state, problem, params.tau),
                                   params.tau);
  state.y = x_next;
  for (std::size_t j = 0; j < state.y.size(); ++j)
    state.y[j] = 2.0 * x_next[j] - state.x[j];

  for (std::size_t i = 0; i < problem.blocks.size(); ++i) {
    const Block& block = problem.blocks[i];
    const double sigma = params.sigma[i];
    Vec arg = block.L.apply(state.y);
    if (!block.forward_Dinv.is_zero)
      axpy(-1.0, block.forward_Dinv.evaluate(state.v[i]), arg);
    axpy(-1.0, block.r, arg);
    for (std::size_t j = 0; j < arg.size(); ++j)
      arg[j] = state.v[i][j] + sigma * arg[j];
    state.v[i] = block.resolvent_Bconj.evaluate(arg, sigma);
  }

  state.x_prev = std::move(state.x);
  state.x = std::move(x_next);
}

void accel_step(IterateState& state, AccelSchedule& schedule,
                const PrimalDualProblem& problem) {
  require_block_shapes(state, problem);
  if (schedule.sigma_n.size() != problem.blocks.size())
    throw ParameterError("accel_step: schedule block count mismatch");

  const double step = schedule.tau_n / schedule.lambda;
  Vec x_next =
      problem.resolvent_A.evaluate(primal_forward(state, problem, step), step);

  const double theta = schedule.theta_n;
  state.y = x_next;
  for (std::size_t j = 0; j < state.y.size(); ++j)
    state.y[j] = x_next[j] + theta * (x_next[j] - state.x[j]);

  for (std::size_t i = 0; i < problem.blocks.size(); ++i) {
    const Block& block = problem.blocks[i];
    const double sigma = schedule.sigma_n[i];
    Vec arg = block.L.apply(state.y);
    axpy(-1.0, block.r, arg);
    for (std::size_t j = 0; j < arg.size(); ++j)
      arg[j] = state.v[i][j] + sigma * arg[j];
    state.v[i] = block.resolvent_Bconj.evaluate(arg, sigma);
  }

  state.x_prev = std::move(state.x);
  state.x = std::move(x_next);

  // schedule advances tau -> theta -> sigma; sigma_{i,n+1} needs theta_{n+1}
  schedule.tau_n = schedule.theta_n * schedule.tau_n;
  schedule.theta_n =
      theta_formula(schedule.tau_n, schedule.gamma, schedule.eta,
                    schedule.lambda);
  for (auto& s : schedule.sigma_n) s /= schedule.theta_n;
  schedule.n += 1;
}

void linear_rate_step(IterateState& state, const PrimalDualProblem& problem,
                      const LinearRateParams& params) {
  require_block_shapes(state, problem);
  if (params.sigma.size() != problem.blocks.size())
    throw ParameterError("linear_rate_step: sigma needs one entry per block");

  Vec x_next =
      problem.resolvent_A.evaluate(primal_forward(state, problem, params.tau),
                                   params.tau);
  state.y = x_next;
  for (std::size_t j = 0; j < state.y.size(); ++j)
    state.y[j] = x_next[j] + params.theta * (x_next[j] - state.x[j]);

  for (std::size_t i = 0; i < problem.blocks.size(); ++i) {
    const Block& block = problem.blocks[i];
    const double sigma = params.sigma[i];
    Vec arg = block.L.apply(state.y);
    if (!block.forward_Dinv.is_zero)
      axpy(-1.0, block.forward_Dinv.evaluate(state.v[i]), arg);
    axpy(-1.0, block.r, arg);
    for (std::size_t j = 0; j < arg.size(); ++j)
      arg[j] = state.v[i][j] + sigma * arg[j];
    state.v[i] = block.resolvent_Bconj.evaluate(arg, sigma);
  }

  state.x_prev = std::move(state.x);
  state.x = std::move(x_next);
}

CertificatePair fejer_certificate_accel(const IterateState& state_n,
                                        const IterateState& state_np1,
                                        const AccelSchedule& schedule,
                                        const FirstIterates& first,
                                        const PrimalDualProblem& problem,
                                        const PrimalDualSolution& reference) {
  const double tau1 = schedule.tau1;
  const double tau_np1 = schedule.tau_n;  // schedule advanced to n+1

  CertificatePair pair;
  Vec dx = state_np1.x;
  axpy(-1.0, reference.x, dx);
  pair.lhs = schedule.lambda * norm_sq(dx) / (tau_np1 * tau_np1);
  const double dual_weight = 1.0 - tau1 * schedule.sum_sigma0_normsq;
  for (std::size_t i = 0; i < state_n.v.size(); ++i) {
    Vec d = state_n.v[i];
    axpy(-1.0, reference.v[i], d);
    pair.lhs += dual_weight * norm_sq(d) / (tau1 * schedule.sigma0[i]);
  }

  Vec dx1 = first.x1;
  axpy(-1.0, reference.x, dx1);
  pair.rhs = schedule.lambda * norm_sq(dx1) / (tau1 * tau1);
  for (std::size_t i = 0; i < first.v0.size(); ++i) {
    Vec d = first.v0[i];
    axpy(-1.0, reference.v[i], d);
    pair.rhs += norm_sq(d) / (tau1 * schedule.sigma0[i]);
  }
  Vec step = first.x1;
  axpy(-1.0, first.x0, step);
  pair.rhs += norm_sq(step) / (schedule.tau0 * schedule.tau0);
  for (std::size_t i = 0; i < first.v0.size(); ++i) {
    Vec d = first.v0[i];
    axpy(-1.0, reference.v[i], d);
    pair.rhs += 2.0 / schedule.tau0 * dot(problem.blocks[i].L.apply(step), d);
  }
  return pair;
}

CertificatePair geometric_certificate(const IterateState& state_n,
                                      const IterateState& state_np1,
                                      std::size_t n,
                                      const LinearRateParams& params,
                                      const StrongMonotonicityCert& cert,
                                      const FirstIterates& first,
                                      const PrimalDualProblem& problem,
                                      const PrimalDualSolution& reference) {
  if (!cert.delta)
    throw ConfigError("geometric_certificate: cert.delta required");
  const auto& delta = *cert.delta;

  CertificatePair pair;
  Vec dx = state_np1.x;
  axpy(-1.0, reference.x, dx);
  pair.lhs = cert.gamma * norm_sq(dx);
  for (std::size_t i = 0; i < state_n.v.size(); ++i) {
    Vec d = state_n.v[i];
    axpy(-1.0, reference.v[i], d);
    pair.lhs += (1.0 - params.omega) * delta[i] * norm_sq(d);
  }

  Vec dx1 = first.x1;
  axpy(-1.0, reference.x, dx1);
  double base = cert.gamma * norm_sq(dx1);
  for (std::size_t i = 0; i < first.v0.size(); ++i) {
    Vec d = first.v0[i];
    axpy(-1.0, reference.v[i], d);
    base += delta[i] * norm_sq(d);
  }
  Vec step = first.x1;
  axpy(-1.0, first.x0, step);
  base += 0.5 * cert.gamma * params.omega * norm_sq(step);
  for (std::size_t i = 0; i < first.v0.size(); ++i) {
    Vec d = first.v0[i];
    axpy(-1.0, reference.v[i], d);
    base += params.mu * params.omega * dot(problem.blocks[i].L.apply(step), d);
  }
  pair.rhs = std::pow(params.omega, static_cast<double>(n)) * base;
  return pair;
}

RunDiagnostics run(const PrimalDualProblem& problem, Algorithm algorithm,
                   SolverParams params, IterateState init,
                   const RunOptions& options) {
  switch (algorithm) {
    case Algorithm::vu:
      if (!std::holds_alternative<FixedParams>(params))
        throw ConfigError("run: vu needs FixedParams");
      break;
    case Algorithm::accel:
      if (!std::holds_alternative<AccelSchedule>(params))
        throw ConfigError("run: accel needs an AccelSchedule from accel_init");
      break;
    case Algorithm::linear:
      if (!std::holds_alternative<LinearRateParams>(params))
        throw ConfigError("run: linear needs LinearRateParams");
      if (options.certificate_reference &&
          (!options.cert || !options.cert->delta))
        throw ConfigError(
            "run: geometric certificate needs a cert with delta constants");
      break;
  }
  if (options.reference && options.reference->size() != problem.primal_dim())
    throw ParameterError("run: reference dimension mismatch");
  if (options.certificate_reference) {
    if (options.certificate_reference->x.size() != problem.primal_dim() ||
        options.certificate_reference->v.size() != problem.blocks.size())
      throw ParameterError("run: certificate reference shape mismatch");
  }

  const double metric_scale =
      options.rmse_metric
          ? 1.0 / std::sqrt(static_cast<double>(problem.primal_dim()))
          : 1.0;

  RunDiagnostics diag;
  diag.records.reserve(std::min<std::size_t>(options.max_iters, 1 << 20));

  IterateState state = std::move(init);
  FirstIterates first;
  first.x0 = state.x;
  first.v0 = state.v;
  const bool track_certs = options.certificate_reference.has_value();
  IterateState previous;

  for (std::size_t k = 0; k < options.max_iters; ++k) {
    if (track_certs) {
      previous.x = state.x;
      previous.v = state.v;
    }

    double tau_after = kNaN;
    switch (algorithm) {
      case Algorithm::vu: {
        const auto& p = std::get<FixedParams>(params);
        vu_step(state, problem, p);
        tau_after = p.tau;
        break;
      }
      case Algorithm::accel: {
        auto& schedule = std::get<AccelSchedule>(params);
        accel_step(state, schedule, problem);
        tau_after = schedule.tau_n;
        break;
      }
      case Algorithm::linear: {
        const auto& p = std::get<LinearRateParams>(params);
        linear_rate_step(state, problem, p);
        tau_after = p.tau;
        break;
      }
    }
    if (k == 0) first.x1 = state.x;

    RunDiagnostics::Record rec;
    rec.n = k + 1;
    rec.tau_n = tau_after;
    rec.n_tau_n = static_cast<double>(k + 1) * tau_after;
    rec.dist_to_ref = kNaN;
    rec.objective = options.objective ? options.objective(state.x) : kNaN;
    rec.cert_lhs = kNaN;
    rec.cert_rhs = kNaN;

    if (options.reference)
      rec.dist_to_ref = metric_scale * dist(state.x, *options.reference);

    if (options.certificate_reference) {
      if (algorithm == Algorithm::accel) {
        const auto& schedule = std::get<AccelSchedule>(params);
        const CertificatePair pair = fejer_certificate_accel(
            previous, state, schedule, first, problem,
            *options.certificate_reference);
        rec.cert_lhs = pair.lhs;
        rec.cert_rhs = pair.rhs;
      } else if (algorithm == Algorithm::linear) {
        const auto& p = std::get<LinearRateParams>(params);
        const CertificatePair pair = geometric_certificate(
            previous, state, k, p, *options.cert, first, problem,
            *options.certificate_reference);
        rec.cert_lhs = pair.lhs;
        rec.cert_rhs = pair.rhs;
      }
    }

    diag.records.push_back(rec);

    if (options.reference && options.tol &&
        rec.dist_to_ref <= *options.tol) {
      diag.iterations_to_tol = k + 1;
      break;
    }
  }

  diag.final_state = std::move(state);
  return diag;
}

std::string diagnostics_csv(const RunDiagnostics& diagnostics) {
  std::string out = "n,tau_n,n_tau_n,dist_to_ref,objective,cert_lhs,cert_rhs\n";
  char buf[512];
  for (const auto& rec : diagnostics.records) {
    std::snprintf(buf, sizeof(buf),
                  "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.n,
                  rec.tau_n, rec.n_tau_n, rec.dist_to_ref, rec.objective,
                  rec.cert_lhs, rec.cert_rhs);
    out += buf;
  }
  return out;
}

void write_diagnostics_csv(const std::string& path,
                           const RunDiagnostics& diagnostics) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path);
  const std::string body = diagnostics_csv(diagnostics);
  stream.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!stream) throw IoError("write failed: " + path);
}

}  // namespace pdsplit
