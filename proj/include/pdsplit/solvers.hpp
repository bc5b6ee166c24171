#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pdsplit/operators.hpp"
#include "pdsplit/vec.hpp"

namespace pdsplit {

// One composed term L_i^* (B_i [] D_i)(L_i . - r_i) of the inclusion.
// B_i enters only through J_{sigma B_i^{-1}} (equivalently prox_{sigma g_i*}),
// D_i only through the forward evaluation of D_i^{-1}.
struct Block {
  ProxMap resolvent_Bconj;
  LipschitzOp forward_Dinv;
  LinearMap L;
  Vec r;
};

// Full problem data: z in A x + sum_i L_i^*((B_i [] D_i)(L_i x - r_i)) + C x.
struct PrimalDualProblem {
  Vec z;
  ProxMap resolvent_A;
  LipschitzOp forward_C;
  std::vector<Block> blocks;

  std::size_t primal_dim() const { return z.size(); }
};

// Caller-asserted strong-monotonicity constants: gamma for A+C, and
// (for the linear-rate scheme) delta_i for B_i^{-1}+D_i^{-1}.
struct StrongMonotonicityCert {
  double gamma = 0.0;
  std::optional<std::vector<double>> delta;
};

// Constant step sizes of the baseline iteration.
struct FixedParams {
  double tau;
  std::vector<double> sigma;
};

// Mutable step state of the O(1/n) scheme. Advanced only by accel_step in
// the order tau -> theta -> sigma. The initial data (tau0, tau1, sigma0,
// sum_i sigma_{i,0}||L_i||^2) is retained for certificate evaluation.
struct AccelSchedule {
  double tau_n = 0.0;
  std::vector<double> sigma_n;
  double lambda = 1.0;
  double theta_n = 0.0;
  std::size_t n = 0;

  double gamma = 0.0;
  double eta = 0.0;
  double tau0 = 0.0;
  double tau1 = 0.0;  // theta_0 * tau_0, fixed at init
  std::vector<double> sigma0;
  double sum_sigma0_normsq = 0.0;

  // max relative deviation of theta_n*tau_n*sigma_{i,n} from tau_1*sigma_{i,0}
  // (the product that the update rules keep invariant)
  double product_drift() const;
};

// Derived constants of the linear-rate scheme.
struct LinearRateParams {
  double mu = 0.0;
  double tau = 0.0;
  std::vector<double> sigma;
  double theta = 0.0;
  double omega = 0.0;
};

// The object every solver step transforms in place.
struct IterateState {
  Vec x;
  Vec x_prev;
  std::vector<Vec> v;
  Vec y;  // extrapolation scratch
};

IterateState make_initial_state(const PrimalDualProblem& problem, Vec x0);
IterateState make_initial_state(const PrimalDualProblem& problem, Vec x0,
                                std::vector<Vec> v0);

struct VuValidation {
  bool feasible = false;
  double margin = 0.0;  // LHS - 1 of the step-size condition
};

// 2 min{tau^{-1}, sigma_i^{-1}} min{eta, nu_i} (1 - sqrt(tau sum sigma_i ||L_i||^2)) > 1.
// eta is the cocoercivity constant of C; nu_i the strong-monotonicity
// constants of D_i. Pass +inf for absent operators (C = 0 or D_i^{-1} = 0).
VuValidation validate_vu_params(double tau, const std::vector<double>& sigma,
                                double eta_cocoercivity,
                                const std::vector<double>& nu,
                                const std::vector<double>& norms_sq);

// Named constraints with margins, for validation reports.
struct FeasibilityReport {
  struct Item {
    std::string name;
    double margin;  // >= 0 (or > 0 for strict constraints) means satisfied
    bool ok;
  };
  std::vector<Item> items;
  bool feasible = true;
};

FeasibilityReport check_accel_init(double tau0,
                                   const std::vector<double>& sigma0,
                                   double lambda,
                                   const StrongMonotonicityCert& cert,
                                   double eta,
                                   const std::vector<double>& norms_sq);

// Validates the initialization constraints (for eta > 0: tau0 < 2 gamma/eta,
// lambda >= eta+1, tau0 sum sigma_{i,0}||L_i||^2 <= sqrt(1+tau0(2 gamma-eta tau0)/lambda);
// for the h = 0 variant eta = 0: lambda >= 1 and the condition with 2 tau0 gamma)
// and returns the schedule with theta_0 precomputed. Throws InfeasibleError
// naming each violated constraint.
AccelSchedule accel_init(double tau0, const std::vector<double>& sigma0,
                         double lambda, const StrongMonotonicityCert& cert,
                         double eta, const std::vector<double>& norms_sq);

// Largest tau0 for which accel_init accepts (sigma0 fixed):
// (gamma/lambda + sqrt(gamma^2/lambda^2 + S^2 + eta/lambda)) / (S^2 + eta/lambda)
// with S = sum_i sigma_{i,0}||L_i||^2.
double default_tau0(const std::vector<double>& sigma0,
                    const std::vector<double>& norms_sq,
                    const StrongMonotonicityCert& cert, double eta,
                    double lambda);

FeasibilityReport check_linear_rate(const StrongMonotonicityCert& cert,
                                    double eta, const std::vector<double>& nu,
                                    const std::vector<double>& norms_sq,
                                    std::optional<double> theta_choice);

// mu = min{gamma^2/eta^2, delta_i^2/nu_i^2, sqrt(gamma / sum ||L_i||^2/delta_i)}
// (terms with a zero Lipschitz constant drop out), tau = mu/(2 gamma),
// sigma_i = mu/(2 delta_i), theta in [2/(2+mu), 1] (default: left endpoint),
// omega = 2(1+theta)/(4+mu).
LinearRateParams linear_rate_init(const StrongMonotonicityCert& cert,
                                  double eta, const std::vector<double>& nu,
                                  const std::vector<double>& norms_sq,
                                  std::optional<double> theta_choice = {});

// One iteration of the baseline scheme:
// x_{n+1} = J_{tau A}[x_n - tau(sum L_i^* v_{i,n} + C x_n - z)],
// y_n = 2 x_{n+1} - x_n,
// v_{i,n+1} = J_{sigma_i B_i^{-1}}[v_{i,n} + sigma_i(L_i y_n - D_i^{-1} v_{i,n} - r_i)].
void vu_step(IterateState& state, const PrimalDualProblem& problem,
             const FixedParams& params);

// One iteration of the O(1/n) scheme; advances the schedule
// tau -> theta -> sigma. The dual update carries no D term.
void accel_step(IterateState& state, AccelSchedule& schedule,
                const PrimalDualProblem& problem);

// One iteration of the linear-rate scheme (constant tau, sigma_i, theta;
// dual update includes the D_i^{-1} forward evaluation).
void linear_rate_step(IterateState& state, const PrimalDualProblem& problem,
                      const LinearRateParams& params);

// Exact primal-dual solution used as certificate reference.
struct PrimalDualSolution {
  Vec x;
  std::vector<Vec> v;
};

struct CertificatePair {
  double lhs = 0.0;
  double rhs = 0.0;
};

// Snapshot of the first iterates (x_0, x_1, v_{i,0}); both certificate
// right-hand sides depend only on these.
struct FirstIterates {
  Vec x0;
  Vec x1;
  std::vector<Vec> v0;
};

// Both sides of the O(1/n) distance inequality at index n:
// lhs = lambda||x_{n+1}-x*||^2/tau_{n+1}^2
//       + (1 - tau_1 sum sigma_{i,0}||L_i||^2) sum ||v_{i,n}-v_i*||^2/(tau_1 sigma_{i,0}),
// rhs = same weights at the first iterates plus ||x_1-x_0||^2/tau_0^2
//       + (2/tau_0) sum <L_i(x_1-x_0), v_{i,0}-v_i*>.
// `schedule` must be advanced to n+1 (its tau_n field holds tau_{n+1}).
CertificatePair fejer_certificate_accel(const IterateState& state_n,
                                        const IterateState& state_np1,
                                        const AccelSchedule& schedule,
                                        const FirstIterates& first,
                                        const PrimalDualProblem& problem,
                                        const PrimalDualSolution& reference);

// Both sides of the geometric bound at index n:
// gamma||x_{n+1}-x*||^2 + (1-omega) sum delta_i||v_{i,n}-v_i*||^2
//   <= omega^n (gamma||x_1-x*||^2 + sum delta_i||v_{i,0}-v_i*||^2
//               + (gamma/2) omega||x_1-x_0||^2
//               + mu omega sum <L_i(x_1-x_0), v_{i,0}-v_i*>).
CertificatePair geometric_certificate(const IterateState& state_n,
                                      const IterateState& state_np1,
                                      std::size_t n,
                                      const LinearRateParams& params,
                                      const StrongMonotonicityCert& cert,
                                      const FirstIterates& first,
                                      const PrimalDualProblem& problem,
                                      const PrimalDualSolution& reference);

enum class Algorithm { vu, accel, linear };

using SolverParams = std::variant<FixedParams, AccelSchedule, LinearRateParams>;

struct RunOptions {
  std::size_t max_iters = 1000;
  std::optional<Vec> reference;  // primal reference for the distance column
  std::optional<double> tol;     // stop once distance-to-reference <= tol
  bool rmse_metric = false;      // distance = ||.||/sqrt(k) instead of ||.||
  std::function<double(const Vec&)> objective;  // optional objective column
  // full reference solution enables the certificate columns
  std::optional<PrimalDualSolution> certificate_reference;
  std::optional<StrongMonotonicityCert> cert;  // needed by geometric cert
};

struct RunDiagnostics {
  struct Record {
    std::size_t n;
    double tau_n;
    double n_tau_n;
    double dist_to_ref;  // NaN when no reference
    double objective;    // NaN when no callback
    double cert_lhs;     // NaN when no certificate reference
    double cert_rhs;
  };
  std::vector<Record> records;
  IterateState final_state;
  std::optional<std::size_t> iterations_to_tol;
};

// Drives one of the three iterations until max_iters or the stop tolerance,
// recording one diagnostics row per completed iteration. Deterministic.
RunDiagnostics run(const PrimalDualProblem& problem, Algorithm algorithm,
                   SolverParams params, IterateState init,
                   const RunOptions& options);

// CSV with columns n,tau_n,n_tau_n,dist_to_ref,objective,cert_lhs,cert_rhs,
// '.' decimal separator, '\n' line endings, 17 significant digits.
void write_diagnostics_csv(const std::string& path,
                           const RunDiagnostics& diagnostics);
std::string diagnostics_csv(const RunDiagnostics& diagnostics);

}  // namespace pdsplit
