#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdsplit/imaging.hpp"
#include "pdsplit/solvers.hpp"
#include "pdsplit/svm.hpp"

namespace pdsplit {

// Experiment defaults. Where a published choice exists it is reproduced
// here verbatim; the config-snapshot test pins every value.
namespace defaults {

// denoising regularization by noise level
constexpr double kLambda2 = 0.01;
constexpr double kLambda1LowNoise = 0.035;   // noise sigma = 0.06
constexpr double kLambda1HighNoise = 0.07;   // noise sigma = 0.12
constexpr double kNoiseSigmaLow = 0.06;
constexpr double kNoiseSigmaHigh = 0.12;
// accelerated scheme starting points for the denoising problem
constexpr double kDenoiseLambda = 1.0;
constexpr double kDenoiseTau0 = 50.0;
constexpr double kDenoiseSigma10 = 0.0241;
constexpr double kDenoiseSigma20 = 0.008;
// baseline scheme step sizes for the denoising problem
constexpr double kDenoiseVuTau = 0.35;
constexpr double kDenoiseVuSigma1 = 0.2;
constexpr double kDenoiseVuSigma2 = 0.01;
// svm
constexpr double kSvmC = 1.0;
constexpr std::size_t kSvmIterations = 1500;
constexpr double kSvmTau0Factor = 0.99;  // tau0 = 0.99 * 2 gamma / ||K||

inline double lambda1_for_noise(double noise_sigma) {
  return noise_sigma >= 0.09 ? kLambda1HighNoise : kLambda1LowNoise;
}

}  // namespace defaults

// 1-D strongly convex toy: A and B subdifferentials of 1/2 t^2 (so both
// resolvents are u/(1+step)), L = 1, r = 0. With forward term, C = identity
// (monotone, 1-Lipschitz). Exact solution: x* = v* = z/2 (z/3 with C).
struct ToyProblem {
  PrimalDualProblem problem;
  StrongMonotonicityCert cert;   // gamma = 1 (delta = {1})
  PrimalDualSolution solution;
  double eta = 0.0;              // Lipschitz constant of C
  std::vector<double> norms_sq;  // {1}
  std::vector<double> nu;        // {0}: D^{-1} = 0
};

ToyProblem make_scalar_toy(double z = 0.0, bool with_forward_term = false);

struct ToyRunConfig {
  Algorithm algorithm = Algorithm::accel;
  std::size_t iterations = 1000;
  double z = 0.0;
  bool with_forward_term = false;  // eta = 1 instead of 0
  double lambda = 1.0;             // accel only
  std::optional<double> tau0;      // accel; default 1
  std::optional<double> sigma0;    // accel; default 1
  std::optional<double> theta;     // linear only; default 2/(2+mu)
  std::optional<double> vu_tau;    // vu; default 0.9
  std::optional<double> vu_sigma;  // vu; default 0.1
  double x0 = 1.0;
  double v0 = 0.0;
};

struct ToyRunResult {
  RunDiagnostics diagnostics;
  ToyProblem toy;
  std::optional<LinearRateParams> linear_params;
};

ToyRunResult run_toy(const ToyRunConfig& cfg);

// Deterministic 64x64-style piecewise-constant test pattern (flat regions
// with sharp edges, values in [0,1]).
Image synthetic_piecewise_image(std::size_t rows, std::size_t cols);

struct DenoiseExperimentConfig {
  std::optional<std::string> input_path;  // P5 PGM; otherwise synthetic
  std::size_t synthetic_size = 64;
  double noise_sigma = defaults::kNoiseSigmaLow;
  std::uint64_t seed = 1;
  TvVariant variant = TvVariant::isotropic;
  std::optional<double> lambda1;  // default by noise level
  double lambda2 = defaults::kLambda2;
  int wavelet_levels = 4;
  Algorithm algorithm = Algorithm::accel;
  std::size_t iterations = 100;
  std::optional<double> tol;           // RMSE-to-reference stopping
  std::size_t reference_iters = 10000; // accel iterations for the reference
  std::optional<Image> reference_override;  // reuse a precomputed reference
  // accelerated scheme overrides
  double lambda = defaults::kDenoiseLambda;
  double tau0 = defaults::kDenoiseTau0;
  std::vector<double> sigma0 = {defaults::kDenoiseSigma10,
                                defaults::kDenoiseSigma20};
  // baseline overrides
  double vu_tau = defaults::kDenoiseVuTau;
  std::vector<double> vu_sigma = {defaults::kDenoiseVuSigma1,
                                  defaults::kDenoiseVuSigma2};
};

struct DenoiseExperimentResult {
  Image noisy;
  Image denoised;
  Image reference;  // high-accuracy solution used for the RMSE series
  RunDiagnostics diagnostics;
  std::optional<std::size_t> iterations_to_tol;
  DenoiseConfig config;
};

// Settings of the two applicable iterations on the denoising problem.
struct DenoiseSolverSettings {
  Algorithm algorithm = Algorithm::accel;
  std::size_t iterations = 100;
  std::optional<double> tol;
  std::size_t reference_iters = 10000;
  std::optional<Image> reference_override;
  double lambda = defaults::kDenoiseLambda;
  double tau0 = defaults::kDenoiseTau0;
  std::vector<double> sigma0 = {defaults::kDenoiseSigma10,
                                defaults::kDenoiseSigma20};
  double vu_tau = defaults::kDenoiseVuTau;
  std::vector<double> vu_sigma = {defaults::kDenoiseVuSigma1,
                                  defaults::kDenoiseVuSigma2};
};

struct DenoiseSolveResult {
  Image denoised;
  Image reference;
  RunDiagnostics diagnostics;
  std::optional<std::size_t> iterations_to_tol;
};

// Solves the denoising problem for a given observation. The RMSE series is
// measured against a high-accuracy solution (accelerated scheme,
// reference_iters iterations) unless an override is supplied.
DenoiseSolveResult solve_denoise(const Image& observation,
                                 const DenoiseConfig& cfg,
                                 const DenoiseSolverSettings& settings);

DenoiseExperimentResult run_denoise_experiment(
    const DenoiseExperimentConfig& cfg);

// n_train + n_test two-class 2-D Gaussian blobs around (-offset,0) and
// (+offset,0), alternating labels, deterministic given seed.
std::pair<Dataset, Dataset> synthetic_blobs(std::size_t n_train,
                                            std::size_t n_test, double offset,
                                            double spread, std::uint64_t seed);

struct SvmExperimentConfig {
  std::optional<std::string> train_csv;
  std::optional<std::string> test_csv;
  std::optional<std::string> train_idx_images;
  std::optional<std::string> train_idx_labels;
  std::optional<std::string> test_idx_images;
  std::optional<std::string> test_idx_labels;
  std::size_t synthetic_n = 0;  // per split, when no files given
  double blob_offset = 1.5;
  double blob_spread = 0.5;
  std::uint64_t seed = 1;
  std::vector<double> kernel_sigmas = {0.15, 0.175, 0.2, 0.25, 0.5};
  double C = defaults::kSvmC;
  std::size_t iterations = defaults::kSvmIterations;
  std::optional<double> subsample_fraction;  // applied to the training split
};

struct SvmExperimentResult {
  struct Row {
    double sigma;
    double train_error;  // percent; NaN if training aborted
    double test_error;
    std::string note;  // infeasibility message, when any
  };
  std::vector<Row> rows;
  std::optional<KernelModel> best_model;  // lowest test error
};

SvmExperimentResult run_svm_experiment(const SvmExperimentConfig& cfg);

// n,rmse rows (17 significant digits), one per completed iteration.
std::string rmse_series_csv(const RunDiagnostics& diagnostics);
void write_rmse_series_csv(const std::string& path,
                           const RunDiagnostics& diagnostics);

}  // namespace pdsplit
