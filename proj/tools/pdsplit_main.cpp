// Command-line harness: denoise / svm / toy / validate.
// Exit codes: 0 success, 2 config error, 3 I/O error, 4 infeasible parameters.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdsplit/errors.hpp"
#include "pdsplit/experiments.hpp"
#include "pdsplit/proxlib.hpp"

namespace {

namespace fs = std::filesystem;
using namespace pdsplit;

Algorithm parse_algorithm(const std::string& name) {
  if (name == "vu") return Algorithm::vu;
  if (name == "accel") return Algorithm::accel;
  if (name == "linear") return Algorithm::linear;
  throw ConfigError("unknown algorithm '" + name + "' (vu|accel|linear)");
}

void ensure_out_dir(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out);
}

int cmd_denoise(const DenoiseExperimentConfig& cfg, const std::string& out) {
  DenoiseExperimentResult result = run_denoise_experiment(cfg);

  ensure_out_dir(out);
  write_pgm(out + "/denoised.pgm", result.denoised);
  if (cfg.noise_sigma > 0.0) write_pgm(out + "/noisy.pgm", result.noisy);
  write_rmse_series_csv(out + "/rmse.csv", result.diagnostics);
  write_diagnostics_csv(out + "/diagnostics.csv", result.diagnostics);

  std::printf("variant=%s lambda1=%g lambda2=%g iterations=%zu\n",
              cfg.variant == TvVariant::isotropic ? "isotropic" : "anisotropic",
              result.config.lambda1, result.config.lambda2,
              result.diagnostics.records.size());
  if (!result.diagnostics.records.empty())
    std::printf("final rmse-to-reference=%.6g final objective=%.10g\n",
                result.diagnostics.records.back().dist_to_ref,
                result.diagnostics.records.back().objective);
  if (cfg.tol) {
    if (result.iterations_to_tol)
      std::printf("iterations to rmse<=%g: %zu\n", *cfg.tol,
                  *result.iterations_to_tol);
    else
      std::printf("tolerance %g not reached within %zu iterations\n",
                  *cfg.tol, cfg.iterations);
  }
  return 0;
}

int cmd_svm(const SvmExperimentConfig& cfg, const std::string& out) {
  SvmExperimentResult result = run_svm_experiment(cfg);

  ensure_out_dir(out);
  std::printf("%-16s", "sigma");
  for (const auto& row : result.rows) std::printf("%10.4g", row.sigma);
  std::printf("\n%-16s", "training error");
  for (const auto& row : result.rows) std::printf("%10.2f", row.train_error);
  std::printf("\n%-16s", "test error");
  for (const auto& row : result.rows) std::printf("%10.2f", row.test_error);
  std::printf("\n");
  for (const auto& row : result.rows)
    if (!row.note.empty())
      std::printf("sigma=%g skipped: %s\n", row.sigma, row.note.c_str());

  {
    std::ofstream metrics(out + "/metrics.csv", std::ios::binary);
    if (!metrics) throw IoError("cannot open for writing: " + out + "/metrics.csv");
    metrics << "sigma,train_error,test_error\n";
    char buf[128];
    for (const auto& row : result.rows) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", row.sigma,
                    row.train_error, row.test_error);
      metrics << buf;
    }
  }
  if (result.best_model)
    save_model_csv(out + "/model.csv", *result.best_model, cfg.C);
  return 0;
}

struct ToyCli {
  ToyRunConfig cfg;
  std::string algorithm = "accel";
  int eta = 0;
};

int cmd_toy(ToyCli& cli, const std::string& out) {
  ensure_out_dir(out);
  cli.cfg.algorithm = parse_algorithm(cli.algorithm);
  cli.cfg.with_forward_term = cli.eta != 0;
  ToyRunResult result = run_toy(cli.cfg);
  write_diagnostics_csv(out + "/toy.csv", result.diagnostics);
  if (!result.diagnostics.records.empty()) {
    const auto& last = result.diagnostics.records.back();
    std::printf("n=%zu tau_n=%.10g n*tau_n=%.10g dist=%.6g\n", last.n,
                last.tau_n, last.n_tau_n, last.dist_to_ref);
    if (result.linear_params)
      std::printf("mu=%.10g tau=%.10g theta=%.10g omega=%.10g\n",
                  result.linear_params->mu, result.linear_params->tau,
                  result.linear_params->theta, result.linear_params->omega);
  }
  return 0;
}

struct ValidateCli {
  std::string algorithm = "accel";
  double tau = 0.0;
  std::vector<double> sigma;
  double tau0 = 0.0;
  std::vector<double> sigma0;
  double lambda = 1.0;
  double gamma = 1.0;
  double eta = 0.0;
  std::vector<double> nu;
  std::vector<double> delta;
  std::vector<double> norms_sq;
  std::optional<double> theta;
};

int print_report(const FeasibilityReport& report) {
  for (const auto& item : report.items)
    std::printf("%-68s margin=%- 12.6g %s\n", item.name.c_str(), item.margin,
                item.ok ? "ok" : "VIOLATED");
  std::printf("%s\n", report.feasible ? "feasible" : "infeasible");
  return report.feasible ? 0 : 4;
}

int cmd_validate(const ValidateCli& cli) {
  const Algorithm algorithm = parse_algorithm(cli.algorithm);
  switch (algorithm) {
    case Algorithm::vu: {
      std::vector<double> nu = cli.nu;
      if (nu.empty())
        nu.assign(cli.sigma.size(), std::numeric_limits<double>::infinity());
      const double eta = cli.eta > 0.0
                             ? cli.eta
                             : std::numeric_limits<double>::infinity();
      const VuValidation v =
          validate_vu_params(cli.tau, cli.sigma, eta, nu, cli.norms_sq);
      std::printf("%-68s margin=%- 12.6g %s\n",
                  "2*min(1/tau,1/sigma_i)*min(eta,nu_i)*(1-sqrt(tau*sum(sigma_i*normsq_i))) > 1",
                  v.margin, v.feasible ? "ok" : "VIOLATED");
      std::printf("%s\n", v.feasible ? "feasible" : "infeasible");
      return v.feasible ? 0 : 4;
    }
    case Algorithm::accel: {
      StrongMonotonicityCert cert{cli.gamma, std::nullopt};
      return print_report(check_accel_init(cli.tau0, cli.sigma0, cli.lambda,
                                           cert, cli.eta, cli.norms_sq));
    }
    case Algorithm::linear: {
      StrongMonotonicityCert cert{cli.gamma, cli.delta};
      std::vector<double> nu = cli.nu;
      if (nu.empty()) nu.assign(cli.delta.size(), 0.0);
      return print_report(
          check_linear_rate(cert, cli.eta, nu, cli.norms_sq, cli.theta));
    }
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primal-dual splitting harness"};
  app.set_config("--config", "", "key=value config file with [command] sections");
  app.require_subcommand(1);
  app.fallthrough();  // --out and --config may follow the subcommand

  std::string out_dir = ".";
  app.add_option("--out", out_dir, "output directory")->capture_default_str();

  // --- denoise ---
  DenoiseExperimentConfig dn;
  std::string dn_algorithm = "accel";
  std::string dn_variant = "isotropic";
  std::string dn_input;
  double dn_lambda1 = -1.0;
  double dn_tol = -1.0;
  auto* denoise = app.add_subcommand("denoise", "TV + wavelet image denoising");
  denoise->add_option("--input", dn_input, "input image (binary PGM)");
  denoise->add_option("--synthetic", dn.synthetic_size,
                      "side length of the built-in piecewise-constant image")
      ->capture_default_str();
  denoise->add_option("--noise-sigma", dn.noise_sigma,
                      "stddev of added Gaussian noise (0 = none)")
      ->capture_default_str();
  denoise->add_option("--seed", dn.seed, "noise seed")->capture_default_str();
  denoise->add_option("--variant", dn_variant, "isotropic|anisotropic")
      ->capture_default_str();
  denoise->add_option("--lambda1", dn_lambda1,
                      "TV weight (default 0.035, or 0.07 for noise >= 0.09)");
  denoise->add_option("--lambda2", dn.lambda2, "wavelet weight")
      ->capture_default_str();
  denoise->add_option("--levels", dn.wavelet_levels, "wavelet levels")
      ->capture_default_str();
  denoise->add_option("--algorithm", dn_algorithm, "accel|vu")
      ->capture_default_str();
  denoise->add_option("--iterations", dn.iterations, "iteration budget")
      ->capture_default_str();
  denoise->add_option("--tol", dn_tol, "stop at this RMSE-to-reference");
  denoise->add_option("--reference-iters", dn.reference_iters,
                      "accel iterations for the reference solution")
      ->capture_default_str();
  denoise->add_option("--accel-lambda", dn.lambda, "accel lambda")
      ->capture_default_str();
  denoise->add_option("--accel-tau0", dn.tau0, "accel tau0")
      ->capture_default_str();
  denoise->add_option("--accel-sigma0", dn.sigma0,
                      "accel sigma0 per block (TV, wavelet)")
      ->expected(2)
      ->capture_default_str();
  denoise->add_option("--vu-tau", dn.vu_tau, "baseline tau")
      ->capture_default_str();
  denoise->add_option("--vu-sigma", dn.vu_sigma,
                      "baseline sigma per block (TV, wavelet)")
      ->expected(2)
      ->capture_default_str();

  // --- svm ---
  SvmExperimentConfig sv;
  std::string sv_train, sv_test, sv_train_images, sv_train_labels;
  std::string sv_test_images, sv_test_labels;
  double sv_subsample = -1.0;
  auto* svm = app.add_subcommand("svm", "kernel SVM training and evaluation");
  svm->add_option("--data", sv_train, "training CSV (label +-1 last column)");
  svm->add_option("--test", sv_test, "test CSV");
  svm->add_option("--images", sv_train_images, "training IDX image file");
  svm->add_option("--labels", sv_train_labels, "training IDX label file");
  svm->add_option("--test-images", sv_test_images, "test IDX image file");
  svm->add_option("--test-labels", sv_test_labels, "test IDX label file");
  svm->add_option("--synthetic", sv.synthetic_n,
                  "generate this many synthetic blob samples per split");
  svm->add_option("--blob-offset", sv.blob_offset, "blob center offset")
      ->capture_default_str();
  svm->add_option("--blob-spread", sv.blob_spread, "blob standard deviation")
      ->capture_default_str();
  svm->add_option("--seed", sv.seed, "seed for synthetic data / subsampling")
      ->capture_default_str();
  svm->add_option("--sigma", sv.kernel_sigmas, "kernel widths to sweep")
      ->capture_default_str();
  svm->add_option("--C", sv.C, "regularization tradeoff")
      ->capture_default_str();
  svm->add_option("--iterations", sv.iterations, "solver iterations")
      ->capture_default_str();
  svm->add_option("--subsample", sv_subsample,
                  "seeded training subsample fraction in (0,1]");

  // --- toy ---
  ToyCli toy;
  double toy_tau0 = -1.0, toy_sigma0 = -1.0, toy_theta = -1.0;
  double toy_vu_tau = -1.0, toy_vu_sigma = -1.0;
  auto* toy_cmd = app.add_subcommand(
      "toy", "built-in strongly convex toy with convergence certificates");
  toy_cmd->add_option("--algorithm", toy.algorithm, "vu|accel|linear")
      ->capture_default_str();
  toy_cmd->add_option("--iterations", toy.cfg.iterations, "iteration budget")
      ->capture_default_str();
  toy_cmd->add_option("--z", toy.cfg.z, "shift term")->capture_default_str();
  toy_cmd->add_option("--eta", toy.eta,
                      "1 adds the identity forward term (eta=1), 0 omits it")
      ->capture_default_str();
  toy_cmd->add_option("--lambda", toy.cfg.lambda, "accel lambda")
      ->capture_default_str();
  toy_cmd->add_option("--tau0", toy_tau0, "accel tau0 (default 1)");
  toy_cmd->add_option("--sigma0", toy_sigma0, "accel sigma0 (default 1)");
  toy_cmd->add_option("--theta", toy_theta,
                      "linear-rate theta (default 2/(2+mu))");
  toy_cmd->add_option("--vu-tau", toy_vu_tau, "baseline tau (default 0.9)");
  toy_cmd->add_option("--vu-sigma", toy_vu_sigma,
                      "baseline sigma (default 0.1)");
  toy_cmd->add_option("--x0", toy.cfg.x0, "primal start")
      ->capture_default_str();
  toy_cmd->add_option("--v0", toy.cfg.v0, "dual start")->capture_default_str();

  // --- validate ---
  ValidateCli val;
  double val_theta = -1.0;
  auto* validate = app.add_subcommand(
      "validate", "report feasibility margins for a parameter set");
  validate->add_option("--algorithm", val.algorithm, "vu|accel|linear")
      ->capture_default_str();
  validate->add_option("--tau", val.tau, "baseline tau");
  validate->add_option("--sigma", val.sigma, "baseline sigma_i");
  validate->add_option("--tau0", val.tau0, "accel tau0");
  validate->add_option("--sigma0", val.sigma0, "accel sigma0_i");
  validate->add_option("--lambda", val.lambda, "accel lambda")
      ->capture_default_str();
  validate->add_option("--gamma", val.gamma, "strong monotonicity of A+C")
      ->capture_default_str();
  validate->add_option("--eta", val.eta,
                       "Lipschitz constant of C (vu: cocoercivity; 0 = absent)")
      ->capture_default_str();
  validate->add_option("--nu", val.nu,
                       "per-block nu_i (vu: strong monotonicity of D_i, "
                       "0/omitted = absent; linear: Lipschitz of D_i^{-1})");
  validate->add_option("--delta", val.delta,
                       "strong monotonicity of B_i^{-1}+D_i^{-1} (linear)");
  validate->add_option("--norms-sq", val.norms_sq, "per-block ||L_i||^2")
      ->required();
  validate->add_option("--theta", val_theta, "linear-rate theta");

  int exit_code = 0;
  try {
    app.parse(argc, argv);

    if (denoise->parsed()) {
      if (!dn_input.empty()) dn.input_path = dn_input;
      if (dn_lambda1 > 0.0) dn.lambda1 = dn_lambda1;
      if (dn_tol > 0.0) dn.tol = dn_tol;
      dn.algorithm = parse_algorithm(dn_algorithm);
      if (dn_variant == "isotropic")
        dn.variant = TvVariant::isotropic;
      else if (dn_variant == "anisotropic")
        dn.variant = TvVariant::anisotropic;
      else
        throw ConfigError("unknown TV variant '" + dn_variant + "'");
      exit_code = cmd_denoise(dn, out_dir);
    } else if (svm->parsed()) {
      if (!sv_train.empty()) sv.train_csv = sv_train;
      if (!sv_test.empty()) sv.test_csv = sv_test;
      if (!sv_train_images.empty()) sv.train_idx_images = sv_train_images;
      if (!sv_train_labels.empty()) sv.train_idx_labels = sv_train_labels;
      if (!sv_test_images.empty()) sv.test_idx_images = sv_test_images;
      if (!sv_test_labels.empty()) sv.test_idx_labels = sv_test_labels;
      if (sv_subsample > 0.0) sv.subsample_fraction = sv_subsample;
      exit_code = cmd_svm(sv, out_dir);
    } else if (toy_cmd->parsed()) {
      if (toy_tau0 > 0.0) toy.cfg.tau0 = toy_tau0;
      if (toy_sigma0 > 0.0) toy.cfg.sigma0 = toy_sigma0;
      if (toy_theta > 0.0) toy.cfg.theta = toy_theta;
      if (toy_vu_tau > 0.0) toy.cfg.vu_tau = toy_vu_tau;
      if (toy_vu_sigma > 0.0) toy.cfg.vu_sigma = toy_vu_sigma;
      exit_code = cmd_toy(toy, out_dir);
    } else if (validate->parsed()) {
      if (val_theta > 0.0) val.theta = val_theta;
      exit_code = cmd_validate(val);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help text or the parse error
    return code == 0 ? 0 : 2;
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s\n", e.what());
    return 4;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return exit_code;
}
