#include "pdsplit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pdsplit/errors.hpp"
#include "pdsplit/proxlib.hpp"
#include "pdsplit/rng.hpp"

namespace pdsplit {

ToyProblem make_scalar_toy(double z, bool with_forward_term) {
  ToyProblem toy;
  toy.problem.z = {z};

  ProxMap quad;
  quad.evaluate = [](const Vec& u, double step) {
    return Vec{u[0] / (1.0 + step)};
  };
  quad.descriptor = "prox of 1/2 t^2";
  toy.problem.resolvent_A = quad;

  if (with_forward_term) {
    LipschitzOp ident;
    ident.evaluate = [](const Vec& u) { return u; };
    ident.lipschitz_const = 1.0;
    ident.is_zero = false;
    toy.problem.forward_C = ident;
    toy.eta = 1.0;
  } else {
    toy.problem.forward_C = zero_op();
    toy.eta = 0.0;
  }

  Block block;
  block.L = identity_map(1);
  block.forward_Dinv = zero_op();
  block.r = {0.0};
  block.resolvent_Bconj = quad;  // B^{-1} = d(1/2 t^2) as well
  toy.problem.blocks.push_back(std::move(block));

  toy.cert.gamma = 1.0;  // A alone is 1-strongly monotone
  toy.cert.delta = std::vector<double>{1.0};
  toy.norms_sq = {1.0};
  toy.nu = {0.0};

  // optimality system: z - v* = x* (+ x* with forward term), v* = x*
  const double x_star = with_forward_term ? z / 3.0 : z / 2.0;
  toy.solution.x = {x_star};
  toy.solution.v = {{x_star}};
  return toy;
}

ToyRunResult run_toy(const ToyRunConfig& cfg) {
  ToyRunResult result;
  result.toy = make_scalar_toy(cfg.z, cfg.with_forward_term);
  const ToyProblem& toy = result.toy;

  RunOptions options;
  options.max_iters = cfg.iterations;
  options.reference = toy.solution.x;
  options.certificate_reference = toy.solution;
  options.cert = toy.cert;

  IterateState init = make_initial_state(toy.problem, {cfg.x0}, {{cfg.v0}});

  switch (cfg.algorithm) {
    case Algorithm::vu: {
      // real contraction spectrum on the toy, so the distance column decays
      // monotonically once past the transient
      FixedParams params{cfg.vu_tau.value_or(0.9),
                         {cfg.vu_sigma.value_or(0.1)}};
      result.diagnostics = run(toy.problem, Algorithm::vu, params,
                               std::move(init), options);
      break;
    }
    case Algorithm::accel: {
      AccelSchedule schedule =
          accel_init(cfg.tau0.value_or(1.0), {cfg.sigma0.value_or(1.0)},
                     cfg.lambda, toy.cert, toy.eta, toy.norms_sq);
      result.diagnostics = run(toy.problem, Algorithm::accel, schedule,
                               std::move(init), options);
      break;
    }
    case Algorithm::linear: {
      LinearRateParams params = linear_rate_init(toy.cert, toy.eta, toy.nu,
                                                 toy.norms_sq, cfg.theta);
      result.linear_params = params;
      result.diagnostics = run(toy.problem, Algorithm::linear, params,
                               std::move(init), options);
      break;
    }
  }
  return result;
}

Image synthetic_piecewise_image(std::size_t rows, std::size_t cols) {
  Image image(rows, cols, 0.15);
  auto fill = [&image](std::size_t r0, std::size_t r1, std::size_t c0,
                       std::size_t c1, double value) {
    for (std::size_t i = r0; i < std::min(r1, image.rows); ++i)
      for (std::size_t j = c0; j < std::min(c1, image.cols); ++j)
        image.at(i, j) = value;
  };
  // flat regions with sharp edges; proportions scale with the image
  fill(rows / 8, rows * 5 / 8, cols / 8, cols / 2, 0.85);
  fill(rows * 9 / 16, rows * 7 / 8, cols * 9 / 16, cols * 7 / 8, 0.55);
  fill(rows / 16, rows * 7 / 16, cols * 3 / 4, cols * 7 / 8, 0.35);
  fill(rows * 3 / 4, rows * 15 / 16, cols / 16, cols * 3 / 8, 1.0);
  return image;
}

DenoiseSolveResult solve_denoise(const Image& observation,
                                 const DenoiseConfig& cfg,
                                 const DenoiseSolverSettings& settings) {
  DenoiseSolveResult result;
  auto [problem, cert] = build_denoise_problem(observation, cfg);
  const Vec x0 =
      project_box(observation.data, {0.0, 1.0, observation.size()});
  const std::vector<double> norms_sq = {
      norm_sq_estimate(problem.blocks[0].L),
      norm_sq_estimate(problem.blocks[1].L)};

  // high-accuracy reference, always via the accelerated scheme
  if (settings.reference_override) {
    if (settings.reference_override->rows != observation.rows ||
        settings.reference_override->cols != observation.cols)
      throw ParameterError("denoise: reference shape mismatch");
    result.reference = *settings.reference_override;
  } else {
    AccelSchedule schedule = accel_init(settings.tau0, settings.sigma0,
                                        settings.lambda, cert, 0.0, norms_sq);
    RunOptions ref_options;
    ref_options.max_iters = settings.reference_iters;
    RunDiagnostics ref_diag =
        run(problem, Algorithm::accel, std::move(schedule),
            make_initial_state(problem, x0), ref_options);
    result.reference.data = std::move(ref_diag.final_state.x);
    result.reference.rows = observation.rows;
    result.reference.cols = observation.cols;
  }

  RunOptions options;
  options.max_iters = settings.iterations;
  options.reference = result.reference.data;
  options.tol = settings.tol;
  options.rmse_metric = true;
  options.objective = [&observation, cfg](const Vec& x) {
    Image view;
    view.data = x;
    view.rows = observation.rows;
    view.cols = observation.cols;
    return denoise_objective(view, observation, cfg);
  };

  RunDiagnostics diag;
  switch (settings.algorithm) {
    case Algorithm::accel: {
      AccelSchedule schedule = accel_init(settings.tau0, settings.sigma0,
                                          settings.lambda, cert, 0.0, norms_sq);
      diag = run(problem, Algorithm::accel, std::move(schedule),
                 make_initial_state(problem, x0), options);
      break;
    }
    case Algorithm::vu: {
      FixedParams params{settings.vu_tau, settings.vu_sigma};
      diag = run(problem, Algorithm::vu, params,
                 make_initial_state(problem, x0), options);
      break;
    }
    case Algorithm::linear:
      throw ConfigError(
          "denoise: the linear-rate scheme needs strongly monotone duals; "
          "choose accel or vu");
  }

  result.iterations_to_tol = diag.iterations_to_tol;
  result.denoised.data = diag.final_state.x;
  result.denoised.rows = observation.rows;
  result.denoised.cols = observation.cols;
  result.diagnostics = std::move(diag);
  return result;
}

DenoiseExperimentResult run_denoise_experiment(
    const DenoiseExperimentConfig& cfg) {
  Image clean = cfg.input_path ? read_pgm(*cfg.input_path)
                               : synthetic_piecewise_image(cfg.synthetic_size,
                                                           cfg.synthetic_size);
  DenoiseExperimentResult result;
  result.noisy = cfg.noise_sigma > 0.0
                     ? add_gaussian_noise(clean, cfg.noise_sigma, cfg.seed)
                     : clean;

  DenoiseConfig dcfg;
  dcfg.lambda1 = cfg.lambda1.value_or(defaults::lambda1_for_noise(
      cfg.noise_sigma > 0.0 ? cfg.noise_sigma : defaults::kNoiseSigmaLow));
  dcfg.lambda2 = cfg.lambda2;
  dcfg.variant = cfg.variant;
  dcfg.wavelet_levels = cfg.wavelet_levels;
  result.config = dcfg;

  DenoiseSolverSettings settings;
  settings.algorithm = cfg.algorithm;
  settings.iterations = cfg.iterations;
  settings.tol = cfg.tol;
  settings.reference_iters = cfg.reference_iters;
  settings.reference_override = cfg.reference_override;
  settings.lambda = cfg.lambda;
  settings.tau0 = cfg.tau0;
  settings.sigma0 = cfg.sigma0;
  settings.vu_tau = cfg.vu_tau;
  settings.vu_sigma = cfg.vu_sigma;

  DenoiseSolveResult solved = solve_denoise(result.noisy, dcfg, settings);
  result.denoised = std::move(solved.denoised);
  result.reference = std::move(solved.reference);
  result.diagnostics = std::move(solved.diagnostics);
  result.iterations_to_tol = solved.iterations_to_tol;
  return result;
}

std::pair<Dataset, Dataset> synthetic_blobs(std::size_t n_train,
                                            std::size_t n_test, double offset,
                                            double spread,
                                            std::uint64_t seed) {
  CounterRng rng(seed);
  auto make_split = [&rng, offset, spread](std::size_t n) {
    Dataset data;
    data.n = n;
    data.d = 2;
    data.features.resize(2 * n);
    data.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double label = (i % 2 == 0) ? 1.0 : -1.0;
      data.features[2 * i] = label * offset + spread * rng.normal();
      data.features[2 * i + 1] = spread * rng.normal();
      data.labels[i] = label;
    }
    return data;
  };
  Dataset train_split = make_split(n_train);
  Dataset test_split = make_split(n_test);
  return {std::move(train_split), std::move(test_split)};
}

SvmExperimentResult run_svm_experiment(const SvmExperimentConfig& cfg) {
  Dataset train_data, test_data;
  bool have_test = false;

  if (cfg.train_csv) {
    train_data = load_dataset_csv(*cfg.train_csv);
    if (cfg.test_csv) {
      test_data = load_dataset_csv(*cfg.test_csv);
      have_test = true;
    }
  } else if (cfg.train_idx_images && cfg.train_idx_labels) {
    train_data = load_dataset_idx(*cfg.train_idx_images, *cfg.train_idx_labels);
    if (cfg.test_idx_images && cfg.test_idx_labels) {
      test_data = load_dataset_idx(*cfg.test_idx_images, *cfg.test_idx_labels);
      have_test = true;
    }
  } else if (cfg.synthetic_n > 0) {
    std::tie(train_data, test_data) = synthetic_blobs(
        cfg.synthetic_n, cfg.synthetic_n, cfg.blob_offset, cfg.blob_spread,
        cfg.seed);
    have_test = true;
  } else {
    throw ConfigError("svm: no training data (give a file or --synthetic N)");
  }

  if (cfg.subsample_fraction)
    train_data = subsample(train_data, *cfg.subsample_fraction, cfg.seed);

  SvmExperimentResult result;
  double best_test = std::numeric_limits<double>::infinity();
  for (double sigma : cfg.kernel_sigmas) {
    SvmExperimentResult::Row row;
    row.sigma = sigma;
    row.train_error = std::numeric_limits<double>::quiet_NaN();
    row.test_error = std::numeric_limits<double>::quiet_NaN();
    try {
      SvmConfig scfg;
      scfg.C = cfg.C;
      scfg.kernel_sigma = sigma;
      scfg.iterations = cfg.iterations;
      KernelModel model = train(train_data, scfg);
      row.train_error = misclassification_rate(model, train_data);
      if (have_test) {
        row.test_error = misclassification_rate(model, test_data);
        if (row.test_error < best_test) {
          best_test = row.test_error;
          result.best_model = model;
        }
      } else if (!result.best_model) {
        result.best_model = model;
      }
    } catch (const InfeasibleError& err) {
      row.note = err.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string rmse_series_csv(const RunDiagnostics& diagnostics) {
  std::string out = "n,rmse\n";
  char buf[128];
  for (const auto& rec : diagnostics.records) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", rec.n, rec.dist_to_ref);
    out += buf;
  }
  return out;
}

void write_rmse_series_csv(const std::string& path,
                           const RunDiagnostics& diagnostics) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path);
  const std::string body = rmse_series_csv(diagnostics);
  stream.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!stream) throw IoError("write failed: " + path);
}

}  // namespace pdsplit
