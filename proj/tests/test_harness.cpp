#include <doctest.h>

#include <cmath>

#include "pdsplit/experiments.hpp"

using namespace pdsplit;

TEST_CASE("config snapshot pins published defaults") {
  CHECK(defaults::kLambda2 == 0.01);
  CHECK(defaults::kLambda1LowNoise == 0.035);
  CHECK(defaults::kLambda1HighNoise == 0.07);
  CHECK(defaults::kNoiseSigmaLow == 0.06);
  CHECK(defaults::kNoiseSigmaHigh == 0.12);
  CHECK(defaults::lambda1_for_noise(0.06) == 0.035);
  CHECK(defaults::lambda1_for_noise(0.12) == 0.07);

  CHECK(defaults::kDenoiseLambda == 1.0);
  CHECK(defaults::kDenoiseTau0 == 50.0);
  CHECK(defaults::kDenoiseSigma10 == 0.0241);
  CHECK(defaults::kDenoiseSigma20 == 0.008);

  CHECK(defaults::kDenoiseVuTau == 0.35);
  CHECK(defaults::kDenoiseVuSigma1 == 0.2);
  CHECK(defaults::kDenoiseVuSigma2 == 0.01);

  CHECK(defaults::kSvmC == 1.0);
  CHECK(defaults::kSvmIterations == 1500);
  CHECK(defaults::kSvmTau0Factor == 0.99);

  DenoiseExperimentConfig dn;
  CHECK(dn.lambda == defaults::kDenoiseLambda);
  CHECK(dn.tau0 == defaults::kDenoiseTau0);
  CHECK(dn.sigma0 ==
        std::vector<double>{defaults::kDenoiseSigma10,
                            defaults::kDenoiseSigma20});
  CHECK(dn.vu_tau == defaults::kDenoiseVuTau);
  CHECK(dn.vu_sigma ==
        std::vector<double>{defaults::kDenoiseVuSigma1,
                            defaults::kDenoiseVuSigma2});
  CHECK(dn.lambda2 == defaults::kLambda2);
  CHECK(dn.reference_iters == 10000);

  SvmExperimentConfig sv;
  CHECK(sv.C == defaults::kSvmC);
  CHECK(sv.iterations == defaults::kSvmIterations);
  CHECK(sv.kernel_sigmas ==
        std::vector<double>{0.15, 0.175, 0.2, 0.25, 0.5});
}

TEST_CASE("published accel starting point is feasible for the denoiser") {
  // lambda=1, tau0=50, sigma0=(0.0241, 0.008) against norms (8, 1):
  // 50*0.2008 = 10.04 <= sqrt(101) ~ 10.0499
  StrongMonotonicityCert cert{1.0, std::nullopt};
  FeasibilityReport report = check_accel_init(
      defaults::kDenoiseTau0,
      {defaults::kDenoiseSigma10, defaults::kDenoiseSigma20},
      defaults::kDenoiseLambda, cert, 0.0, {8.0, 1.0});
  CHECK(report.feasible);
}

TEST_CASE("denoise experiment is deterministic end to end") {
  DenoiseExperimentConfig cfg;
  cfg.synthetic_size = 32;
  cfg.iterations = 40;
  cfg.reference_iters = 200;
  cfg.seed = 42;

  DenoiseExperimentResult a = run_denoise_experiment(cfg);
  DenoiseExperimentResult b = run_denoise_experiment(cfg);
  CHECK(diagnostics_csv(a.diagnostics) == diagnostics_csv(b.diagnostics));
  CHECK(rmse_series_csv(a.diagnostics) == rmse_series_csv(b.diagnostics));
  CHECK(a.denoised.data == b.denoised.data);

  DenoiseExperimentConfig other = cfg;
  other.seed = 43;
  DenoiseExperimentResult c = run_denoise_experiment(other);
  CHECK(rmse_series_csv(c.diagnostics) != rmse_series_csv(a.diagnostics));
}

TEST_CASE("denoise defaults pick lambda1 from the noise level") {
  DenoiseExperimentConfig cfg;
  cfg.synthetic_size = 16;
  cfg.iterations = 1;
  cfg.reference_iters = 1;
  cfg.noise_sigma = defaults::kNoiseSigmaHigh;
  DenoiseExperimentResult r = run_denoise_experiment(cfg);
  CHECK(r.config.lambda1 == defaults::kLambda1HighNoise);
  cfg.noise_sigma = defaults::kNoiseSigmaLow;
  r = run_denoise_experiment(cfg);
  CHECK(r.config.lambda1 == defaults::kLambda1LowNoise);
  cfg.lambda1 = 0.05;
  r = run_denoise_experiment(cfg);
  CHECK(r.config.lambda1 == 0.05);
}

TEST_CASE("synthetic blobs are balanced and deterministic") {
  auto [train_a, test_a] = synthetic_blobs(50, 10, 1.5, 0.5, 3);
  auto [train_b, test_b] = synthetic_blobs(50, 10, 1.5, 0.5, 3);
  CHECK(train_a.features == train_b.features);
  CHECK(test_a.features == test_b.features);
  int positives = 0;
  for (double label : train_a.labels) positives += label > 0 ? 1 : 0;
  CHECK(positives == 25);
}

TEST_CASE("svm experiment sweeps sigmas and reports infeasible columns") {
  SvmExperimentConfig cfg;
  cfg.synthetic_n = 30;
  cfg.iterations = 300;
  cfg.kernel_sigmas = {0.1, 50.0};  // the coarse kernel is near-singular
  SvmExperimentResult result = run_svm_experiment(cfg);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].note.empty());
  CHECK(result.rows[0].train_error >= 0.0);
  CHECK_FALSE(result.rows[1].note.empty());  // lambda_min below tolerance
  CHECK(std::isnan(result.rows[1].train_error));
}

TEST_CASE("toy experiment feeds the certificate columns") {
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::linear;
  cfg.iterations = 30;
  ToyRunResult result = run_toy(cfg);
  for (const auto& rec : result.diagnostics.records) {
    CHECK(std::isfinite(rec.cert_lhs));
    CHECK(std::isfinite(rec.cert_rhs));
  }
  const std::string csv = rmse_series_csv(result.diagnostics);
  CHECK(csv.rfind("n,rmse\n", 0) == 0);
}
