#include <doctest.h>

#include <cmath>
#include <limits>

#include "pdsplit/errors.hpp"
#include "pdsplit/experiments.hpp"
#include "pdsplit/rng.hpp"
#include "pdsplit/solvers.hpp"

using namespace pdsplit;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("baseline step-size condition") {
  // 2*10*1*(1-sqrt(0.08)) ~ 14.34
  VuValidation v = validate_vu_params(0.1, {0.1}, 1.0, {kInf}, {8.0});
  CHECK(v.feasible);
  CHECK(v.margin ==
        doctest::Approx(2.0 * 10.0 * (1.0 - std::sqrt(0.08)) - 1.0));

  // sqrt(8) > 1: the root factor is negative, infeasible without exception
  v = validate_vu_params(1.0, {1.0}, 1.0, {kInf}, {8.0});
  CHECK_FALSE(v.feasible);
  CHECK(v.margin <= 0.0);

  // published baseline values: root factor ~ 0.2493, feasibility depends on
  // the (unstated) eta
  v = validate_vu_params(0.35, {0.2, 0.01}, 1.0, {kInf, kInf}, {8.0, 1.0});
  const double root = 1.0 - std::sqrt(0.35 * (0.2 * 8.0 + 0.01));
  CHECK(root == doctest::Approx(0.24934).epsilon(1e-4));
  // min{1/tau, 1/sigma_1, 1/sigma_2} = 1/0.35, min{eta, nu} = 1
  CHECK(v.margin == doctest::Approx(2.0 * (1.0 / 0.35) * root - 1.0));

  v = validate_vu_params(0.35, {0.2, 0.01}, kInf, {kInf, kInf}, {8.0, 1.0});
  CHECK(v.feasible);  // absent C and D: both constants +inf

  CHECK_THROWS_AS(validate_vu_params(0.0, {1.0}, 1.0, {kInf}, {1.0}),
                  ParameterError);
}

TEST_CASE("baseline step on the scalar toy") {
  ToyProblem toy = make_scalar_toy();
  IterateState state = make_initial_state(toy.problem, {1.0}, {{0.0}});
  FixedParams params{0.5, {0.5}};
  vu_step(state, toy.problem, params);
  CHECK(state.x[0] == doctest::Approx(2.0 / 3.0));
  CHECK(state.y[0] == doctest::Approx(1.0 / 3.0));
  CHECK(state.v[0][0] == doctest::Approx(1.0 / 9.0));
  CHECK(state.x_prev[0] == doctest::Approx(1.0));
}

TEST_CASE("exact solutions are fixed points of all three steps") {
  for (double z : {0.0, 1.0}) {
    for (bool with_c : {false, true}) {
      ToyProblem toy = make_scalar_toy(z, with_c);
      IterateState state =
          make_initial_state(toy.problem, toy.solution.x, toy.solution.v);

      vu_step(state, toy.problem, {0.5, {0.5}});
      CHECK(std::abs(state.x[0] - toy.solution.x[0]) <= 1e-10);
      CHECK(std::abs(state.v[0][0] - toy.solution.v[0][0]) <= 1e-10);

      state = make_initial_state(toy.problem, toy.solution.x, toy.solution.v);
      AccelSchedule schedule = accel_init(
          1.0, {1.0}, with_c ? 2.0 : 1.0, toy.cert, toy.eta, toy.norms_sq);
      accel_step(state, schedule, toy.problem);
      CHECK(std::abs(state.x[0] - toy.solution.x[0]) <= 1e-10);
      CHECK(std::abs(state.v[0][0] - toy.solution.v[0][0]) <= 1e-10);
      CHECK(schedule.n == 1);  // the schedule still advances

      state = make_initial_state(toy.problem, toy.solution.x, toy.solution.v);
      LinearRateParams params =
          linear_rate_init(toy.cert, toy.eta, toy.nu, toy.norms_sq);
      linear_rate_step(state, toy.problem, params);
      CHECK(std::abs(state.x[0] - toy.solution.x[0]) <= 1e-10);
      CHECK(std::abs(state.v[0][0] - toy.solution.v[0][0]) <= 1e-10);
    }
  }
}

TEST_CASE("shift term moves the baseline fixed point to z/2") {
  ToyProblem toy = make_scalar_toy(1.0);
  IterateState state = make_initial_state(toy.problem, {0.0}, {{0.0}});
  FixedParams params{0.5, {0.5}};
  for (int k = 0; k < 10000; ++k) vu_step(state, toy.problem, params);
  // optimality system: z - v = x and v = x, hence x = z/2
  CHECK(std::abs(state.x[0] - 0.5) <= 1e-8);
  CHECK(std::abs(state.v[0][0] - 0.5) <= 1e-8);
}

TEST_CASE("baseline iterates converge monotonically after a transient") {
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::vu;
  cfg.iterations = 3000;
  ToyRunResult result = run_toy(cfg);
  const auto& recs = result.diagnostics.records;
  REQUIRE(recs.size() == 3000);
  CHECK(recs.back().dist_to_ref <= 1e-8);
  for (std::size_t i = 50; i + 1 < recs.size(); ++i)
    CHECK(recs[i + 1].dist_to_ref <= recs[i].dist_to_ref + 1e-15);
}

TEST_CASE("accelerated scheme initialization constraints") {
  StrongMonotonicityCert cert{1.0, std::nullopt};
  // tau0*sigma0*8 = 1.2 <= sqrt(1.5) ~ 1.2247
  CHECK_NOTHROW(accel_init(1.0, {0.15}, 2.0, cert, 1.0, {8.0}));

  // boundary tau0 = 2 gamma/eta is strictly infeasible
  CHECK_THROWS_AS(accel_init(2.0, {0.1}, 2.0, cert, 1.0, {1.0}),
                  InfeasibleError);
  FeasibilityReport report = check_accel_init(2.0, {0.1}, 2.0, cert, 1.0,
                                              {1.0});
  bool found = false;
  for (const auto& item : report.items)
    if (item.name == "tau0 < 2*gamma/eta") {
      found = true;
      CHECK_FALSE(item.ok);
      CHECK(item.margin == doctest::Approx(0.0));
    }
  CHECK(found);

  // h = 0 variant: lambda >= 1 and sigma bound sqrt(1+2 tau0 gamma/lambda)
  CHECK_NOTHROW(accel_init(1.0, {1.7}, 1.0, cert, 0.0, {1.0}));
  CHECK_THROWS_AS(accel_init(1.0, {1.8}, 1.0, cert, 0.0, {1.0}),
                  InfeasibleError);
  CHECK_THROWS_AS(accel_init(1.0, {1.0}, 0.5, cert, 0.0, {1.0}),
                  InfeasibleError);
  // lambda >= eta + 1 when the forward term is present
  CHECK_THROWS_AS(accel_init(0.5, {0.1}, 1.5, cert, 1.0, {1.0}),
                  InfeasibleError);
}

TEST_CASE("default tau0 meets the initialization bound") {
  StrongMonotonicityCert cert{1.0, std::nullopt};
  // hand evaluation: (0.5+sqrt(0.25+1+0.5))/1.5
  CHECK(default_tau0({1.0}, {1.0}, cert, 1.0, 2.0) ==
        doctest::Approx((0.5 + std::sqrt(1.75)) / 1.5));

  // large sum: bound collapses toward zero but stays acceptable
  const double tiny = default_tau0({100.0}, {1.0}, cert, 1.0, 2.0);
  CHECK(tiny > 0.0);
  CHECK(tiny < 0.05);
  CHECK_NOTHROW(accel_init(tiny, {100.0}, 2.0, cert, 1.0, {1.0}));

  CounterRng rng(51);
  for (int k = 0; k < 50; ++k) {
    StrongMonotonicityCert c{0.1 + 3.0 * rng.uniform(), std::nullopt};
    const double eta = rng.uniform() < 0.3 ? 0.0 : 2.0 * rng.uniform();
    const double lambda = eta + 1.0 + 2.0 * rng.uniform();
    std::vector<double> sigma0 = {0.1 + rng.uniform(), 0.1 + rng.uniform()};
    std::vector<double> norms = {0.5 + 4.0 * rng.uniform(), 1.0};
    const double tau0 = default_tau0(sigma0, norms, c, eta, lambda);
    if (eta > 0.0 && tau0 >= 2.0 * c.gamma / eta)
      continue;  // the closed-form bound only covers the sigma condition
    CHECK_NOTHROW(accel_init(tau0, sigma0, lambda, c, eta, norms));
  }
}

TEST_CASE("accelerated step on the scalar toy") {
  ToyProblem toy = make_scalar_toy();
  IterateState state = make_initial_state(toy.problem, {1.0}, {{0.0}});
  AccelSchedule schedule =
      accel_init(1.0, {1.0}, 1.0, toy.cert, 0.0, toy.norms_sq);
  CHECK(schedule.theta_n == doctest::Approx(1.0 / std::sqrt(3.0)));
  accel_step(state, schedule, toy.problem);
  CHECK(state.x[0] == doctest::Approx(0.5));
  CHECK(state.y[0] == doctest::Approx(0.5 - 0.5 / std::sqrt(3.0)));
  CHECK(state.v[0][0] ==
        doctest::Approx((0.5 - 0.5 / std::sqrt(3.0)) / 2.0));
  CHECK(schedule.tau_n == doctest::Approx(1.0 / std::sqrt(3.0)));
}

TEST_CASE("schedule keeps the step product invariant and tau decreasing") {
  ToyProblem toy = make_scalar_toy();
  IterateState state = make_initial_state(toy.problem, {1.0}, {{0.0}});
  AccelSchedule schedule =
      accel_init(1.0, {1.0}, 1.0, toy.cert, 0.0, toy.norms_sq);
  double prev_tau = schedule.tau_n;
  for (int k = 0; k < 2000; ++k) {
    accel_step(state, schedule, toy.problem);
    CHECK(schedule.tau_n > 0.0);
    CHECK(schedule.tau_n < prev_tau);
    CHECK(schedule.theta_n > 0.0);
    CHECK(schedule.theta_n < 1.0);
    CHECK(schedule.product_drift() <= 1e-12);
    prev_tau = schedule.tau_n;
  }
}

TEST_CASE("n tau_n approaches lambda/gamma") {
  for (double lambda : {1.0, 2.0}) {
    ToyRunConfig cfg;
    cfg.algorithm = Algorithm::accel;
    cfg.iterations = 100000;
    cfg.lambda = lambda;
    ToyRunResult result = run_toy(cfg);
    const auto& last = result.diagnostics.records.back();
    CHECK(std::abs(last.n_tau_n * 1.0 / lambda - 1.0) <= 0.01);
  }
}

TEST_CASE("linear-rate initialization") {
  StrongMonotonicityCert cert{1.0, std::vector<double>{1.0}};
  LinearRateParams p = linear_rate_init(cert, 1.0, {1.0}, {1.0});
  CHECK(p.mu == doctest::Approx(1.0));
  CHECK(p.tau == doctest::Approx(0.5));
  CHECK(p.sigma[0] == doctest::Approx(0.5));
  CHECK(p.theta == doctest::Approx(2.0 / 3.0));
  CHECK(p.omega == doctest::Approx(2.0 / 3.0));

  // zero forward operators drop their terms from the mu bound
  p = linear_rate_init(cert, 0.0, {0.0}, {1.0});
  CHECK(p.mu == doctest::Approx(1.0));

  p = linear_rate_init(cert, 1.0, {1.0}, {1.0}, 1.0);
  CHECK(p.omega == doctest::Approx(0.8));
  CHECK(p.omega < 1.0);

  CHECK_THROWS_AS(linear_rate_init(cert, 1.0, {1.0}, {1.0}, 0.5),
                  ParameterError);
  CHECK_THROWS_AS(linear_rate_init(cert, 1.0, {1.0}, {1.0}, 1.1),
                  ParameterError);
  StrongMonotonicityCert no_delta{1.0, std::nullopt};
  CHECK_THROWS_AS(linear_rate_init(no_delta, 1.0, {1.0}, {1.0}),
                  InfeasibleError);
}

TEST_CASE("linear-rate step on the scalar toy") {
  ToyProblem toy = make_scalar_toy();
  LinearRateParams params =
      linear_rate_init(toy.cert, toy.eta, toy.nu, toy.norms_sq);
  IterateState state = make_initial_state(toy.problem, {1.0}, {{0.0}});
  linear_rate_step(state, toy.problem, params);
  CHECK(state.x[0] == doctest::Approx(2.0 / 3.0));
  CHECK(state.y[0] == doctest::Approx(4.0 / 9.0));
  CHECK(state.v[0][0] == doctest::Approx(4.0 / 27.0));
}

TEST_CASE("linear-rate dual update applies the forward D term") {
  // B^{-1} quadratic resolvent, D^{-1}(v) = v: one step, scripted values
  ToyProblem toy = make_scalar_toy();
  LipschitzOp dinv;
  dinv.evaluate = [](const Vec& v) { return v; };
  dinv.lipschitz_const = 1.0;
  dinv.is_zero = false;
  toy.problem.blocks[0].forward_Dinv = dinv;
  toy.nu = {1.0};

  LinearRateParams params =
      linear_rate_init(toy.cert, toy.eta, toy.nu, toy.norms_sq);
  CHECK(params.mu == doctest::Approx(1.0));  // min{delta^2/nu^2, sqrt(1)} = 1

  const double x0 = 0.8, v0 = 0.3;
  IterateState state = make_initial_state(toy.problem, {x0}, {{v0}});
  linear_rate_step(state, toy.problem, params);

  const double tau = params.tau, sigma = params.sigma[0], theta = params.theta;
  const double x1 = (x0 - tau * v0) / (1.0 + tau);
  const double y0 = x1 + theta * (x1 - x0);
  const double v1 = (v0 + sigma * (y0 - v0)) / (1.0 + sigma);
  CHECK(state.x[0] == doctest::Approx(x1));
  CHECK(state.v[0][0] == doctest::Approx(v1));
}

TEST_CASE("run driver basics") {
  ToyProblem toy = make_scalar_toy();
  RunOptions options;
  options.max_iters = 0;
  RunDiagnostics diag =
      run(toy.problem, Algorithm::vu, FixedParams{0.5, {0.5}},
          make_initial_state(toy.problem, {1.0}), options);
  CHECK(diag.records.empty());
  CHECK(diag.final_state.x[0] == 1.0);

  // mismatched params and algorithm is a configuration error
  CHECK_THROWS_AS(run(toy.problem, Algorithm::accel, FixedParams{0.5, {0.5}},
                      make_initial_state(toy.problem, {1.0}), options),
                  ConfigError);
}

TEST_CASE("distance-to-reference stopping records the hit iteration") {
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::linear;
  cfg.iterations = 500;
  ToyRunResult full = run_toy(cfg);

  RunOptions options;
  options.max_iters = 500;
  options.reference = full.toy.solution.x;
  options.tol = 1e-6;
  LinearRateParams params = linear_rate_init(full.toy.cert, full.toy.eta,
                                             full.toy.nu, full.toy.norms_sq);
  RunDiagnostics diag =
      run(full.toy.problem, Algorithm::linear, params,
          make_initial_state(full.toy.problem, {1.0}), options);
  REQUIRE(diag.iterations_to_tol.has_value());
  CHECK(*diag.iterations_to_tol == diag.records.size());
  CHECK(diag.records.back().dist_to_ref <= 1e-6);
}

TEST_CASE("distance inequality certificate for the accelerated scheme") {
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::accel;
  cfg.iterations = 10000;
  ToyRunResult result = run_toy(cfg);
  const auto& recs = result.diagnostics.records;
  REQUIRE(recs.size() == 10000);
  const double rhs0 = recs.front().cert_rhs;
  for (const auto& rec : recs) {
    CHECK(rec.cert_lhs <= rec.cert_rhs + 1e-9);
    CHECK(rec.cert_rhs == doctest::Approx(rhs0));  // constant in n
  }
}

TEST_CASE("certificate left side vanishes at the exact solution") {
  ToyProblem toy = make_scalar_toy();
  AccelSchedule schedule =
      accel_init(1.0, {1.0}, 1.0, toy.cert, 0.0, toy.norms_sq);
  IterateState at_solution =
      make_initial_state(toy.problem, toy.solution.x, toy.solution.v);
  IterateState next = at_solution;
  AccelSchedule advanced = schedule;
  accel_step(next, advanced, toy.problem);
  FirstIterates first{at_solution.x, next.x, at_solution.v};
  CertificatePair pair = fejer_certificate_accel(
      at_solution, next, advanced, first, toy.problem, toy.solution);
  CHECK(pair.lhs <= 1e-18);
  CHECK(pair.rhs >= -1e-18);
}

TEST_CASE("geometric certificate and contraction") {
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::linear;
  cfg.iterations = 200;
  ToyRunResult result = run_toy(cfg);
  const auto& recs = result.diagnostics.records;
  const double omega = result.linear_params->omega;
  REQUIRE(recs.size() == 200);
  for (const auto& rec : recs) CHECK(rec.cert_lhs <= rec.cert_rhs + 1e-9);
  // omega^n structure of the bound
  for (std::size_t i = 1; i < recs.size(); ++i)
    CHECK(recs[i].cert_rhs / recs[i - 1].cert_rhs ==
          doctest::Approx(omega).epsilon(1e-10));
  // squared distances dominated by the bound divided by gamma
  for (const auto& rec : recs)
    CHECK(rec.dist_to_ref * rec.dist_to_ref <=
          rec.cert_rhs / result.toy.cert.gamma + 1e-12);
}

TEST_CASE("diagnostics CSV is deterministic") {
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::accel;
  cfg.iterations = 50;
  const std::string a = diagnostics_csv(run_toy(cfg).diagnostics);
  const std::string b = diagnostics_csv(run_toy(cfg).diagnostics);
  CHECK(a == b);
  CHECK(a.rfind("n,tau_n,n_tau_n,dist_to_ref,objective,cert_lhs,cert_rhs\n",
                0) == 0);
}
