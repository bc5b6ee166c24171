// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one pass/fail line per criterion. Returns nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pdsplit/experiments.hpp"
#include "pdsplit/imaging.hpp"
#include "pdsplit/operators.hpp"
#include "pdsplit/proxlib.hpp"
#include "pdsplit/rng.hpp"
#include "pdsplit/solvers.hpp"
#include "pdsplit/svm.hpp"

using namespace pdsplit;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int id, std::string title, double time_limit_s)
      : id_(id),
        title_(std::move(title)),
        limit_(time_limit_s),
        start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& detail) {
    if (!ok && first_failure_.empty()) first_failure_ = detail;
    ok_ = ok_ && ok;
  }

  ~Criterion() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    if (limit_ > 0.0 && elapsed > limit_) {
      ok_ = false;
      if (first_failure_.empty())
        first_failure_ = "runtime " + std::to_string(elapsed) + "s exceeds " +
                         std::to_string(limit_) + "s";
    }
    std::printf("[%s] criterion %2d: %s (%.2f s)%s%s\n", ok_ ? "PASS" : "FAIL",
                id_, title_.c_str(), elapsed,
                first_failure_.empty() ? "" : " -- ",
                first_failure_.c_str());
    if (!ok_) ++failures;
  }

 private:
  int id_;
  std::string title_;
  double limit_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
  std::string first_failure_;
};

std::vector<ProxMap> library_proxes() {
  return {
      box_prox({0.0, 1.0, 4}),
      box_prox({-0.035, 0.035, 4}),
      box_prox({-0.01, 0.01, 4}),
      quad_box_prox({0.2, 0.4, 0.6, 0.8}),
      pixelwise_ball_prox(0.8, 2),
      separable_hinge_conj_prox({1.0, -1.0, 1.0, -1.0}, 1.0),
  };
}

void criterion_identities() {
  Criterion crit(1, "resolvent and Moreau identities to 1e-9", 5.0);
  CounterRng rng(2024);
  for (const auto& p : library_proxes()) {
    for (double gamma : {0.1, 1.0, 10.0}) {
      for (int k = 0; k < 100; ++k) {
        Vec x = rng.uniform_vec(4);
        for (auto& t : x) t *= 4.0;
        // prox_{gamma f}(x) + gamma prox_{(1/gamma) f*}(x/gamma) = x
        Vec direct = p.evaluate(x, gamma);
        Vec conj = conjugate_prox(p, scaled(x, 1.0 / gamma), 1.0 / gamma);
        double err = 0.0;
        for (int i = 0; i < 4; ++i)
          err = std::max(err, std::abs(direct[i] + gamma * conj[i] - x[i]));
        crit.check(err <= 1e-9, "Moreau residual " + std::to_string(err) +
                                    " for " + p.descriptor);
      }
    }
    for (double gamma : {0.5, 1.0, 2.0}) {
      for (int k = 0; k < 100; ++k) {
        Vec u = rng.uniform_vec(4);
        for (auto& t : u) t *= 4.0;
        Vec left = p.evaluate(u, gamma);
        Vec right = resolvent_of_inverse(p, scaled(u, 1.0 / gamma), gamma);
        double err = 0.0;
        for (int i = 0; i < 4; ++i)
          err = std::max(err, std::abs(left[i] + gamma * right[i] - u[i]));
        crit.check(err <= 1e-9, "resolvent identity residual " +
                                    std::to_string(err) + " for " +
                                    p.descriptor);
      }
    }
  }
}

void criterion_prox_oracles() {
  Criterion crit(2, "closed-form proxes match brute-force oracles to 1e-4",
                 60.0);
  CounterRng rng(2025);

  for (int k = 0; k < 200; ++k) {
    // box projection, per coordinate
    const double lo = -1.0 + 0.5 * rng.uniform_symmetric();
    const double hi = 1.0 + 0.5 * rng.uniform_symmetric();
    const double x = 4.0 * rng.uniform_symmetric();
    const double gamma = 0.1 + 2.0 * rng.uniform();
    auto indicator = [lo, hi](double y) {
      return (y < lo || y > hi) ? std::numeric_limits<double>::infinity()
                                : 0.0;
    };
    const double expected =
        oracles::grid_prox_1d(indicator, x, gamma, lo, hi);
    const double got = project_box({x}, {lo, hi, 1})[0];
    crit.check(std::abs(got - expected) <= 1e-4, "box projection oracle");

    // data-fit prox, per coordinate
    const double b = rng.uniform();
    const double sigma = 0.1 + 3.0 * rng.uniform();
    const double p = 4.0 * rng.uniform_symmetric();
    auto quad = [b](double y) {
      if (y < 0.0 || y > 1.0) return std::numeric_limits<double>::infinity();
      return 0.5 * (y - b) * (y - b);
    };
    const double expected_quad =
        oracles::grid_prox_1d(quad, p, sigma, 0.0, 1.0);
    crit.check(std::abs(prox_quad_box({p}, sigma, {b})[0] - expected_quad) <=
                   1e-4,
               "quad-box prox oracle");

    // hinge conjugate, per coordinate
    const double label = rng.uniform() < 0.5 ? 1.0 : -1.0;
    const double C = 0.5 + 2.0 * rng.uniform();
    const double mu = 0.05 + 2.0 * rng.uniform();
    const double v = 4.0 * rng.uniform_symmetric();
    auto conj = [label](double s) { return label * s; };
    const double expected_hinge = oracles::grid_prox_1d(
        conj, v, mu, label > 0 ? -C : 0.0, label > 0 ? 0.0 : C);
    crit.check(std::abs(prox_hinge_conj({v}, 0, mu, label, C)[0] -
                        expected_hinge) <= 1e-4,
               "hinge conjugate oracle");

    // pixelwise disk projection via projected gradient
    const double cu = 3.0 * rng.uniform_symmetric();
    const double cv = 3.0 * rng.uniform_symmetric();
    const double lambda1 = 0.2 + rng.uniform();
    auto [pu, pv] = project_pixelwise_ball({cu}, {cv}, lambda1);
    auto [ou, ov] = oracles::pg_disk_projection(cu, cv, lambda1);
    crit.check(std::hypot(pu[0] - ou, pv[0] - ov) <= 1e-7,
               "disk projection oracle");
  }
}

void criterion_schedule_limit() {
  Criterion crit(3, "n tau_n converges to lambda/gamma within 1%", 10.0);
  struct Combo {
    double eta;
    double lambda;
  };
  for (const Combo combo : {Combo{0.0, 1.0}, Combo{0.0, 2.0}, Combo{1.0, 2.0}}) {
    ToyRunConfig cfg;
    cfg.algorithm = Algorithm::accel;
    cfg.iterations = 100000;
    cfg.with_forward_term = combo.eta > 0.0;
    cfg.lambda = combo.lambda;
    ToyRunResult result = run_toy(cfg);
    const auto& last = result.diagnostics.records.back();
    const double ratio = last.n_tau_n * 1.0 / combo.lambda;  // gamma = 1
    crit.check(std::abs(ratio - 1.0) <= 0.01,
               "eta=" + std::to_string(combo.eta) +
                   " lambda=" + std::to_string(combo.lambda) +
                   " ratio=" + std::to_string(ratio));
  }
}

void criterion_o1n_rate() {
  Criterion crit(4, "log-log slope of the accel distance is at most -0.9",
                 10.0);
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::accel;
  cfg.iterations = 10000;
  ToyRunResult result = run_toy(cfg);

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (const auto& rec : result.diagnostics.records) {
    if (rec.n < 100 || rec.n > 10000) continue;
    if (rec.dist_to_ref <= 0.0) continue;
    const double lx = std::log(static_cast<double>(rec.n));
    const double ly = std::log(rec.dist_to_ref);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  const double denom = sxx - sx * sx / static_cast<double>(count);
  const double slope = (sxy - sx * sy / static_cast<double>(count)) / denom;
  crit.check(count > 9000, "degenerate distance series");
  crit.check(slope <= -0.9, "slope=" + std::to_string(slope));
}

void criterion_fejer() {
  Criterion crit(5, "accel distance inequality holds for n <= 1e4", 30.0);
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::accel;
  cfg.iterations = 10000;
  ToyRunResult result = run_toy(cfg);
  for (const auto& rec : result.diagnostics.records)
    crit.check(rec.cert_lhs <= rec.cert_rhs + 1e-9,
               "n=" + std::to_string(rec.n) +
                   " lhs=" + std::to_string(rec.cert_lhs) +
                   " rhs=" + std::to_string(rec.cert_rhs));
}

void criterion_geometric() {
  Criterion crit(6, "geometric bound and contraction factor", 30.0);
  ToyRunConfig cfg;
  cfg.algorithm = Algorithm::linear;
  cfg.iterations = 200;
  ToyRunResult result = run_toy(cfg);
  const double omega = result.linear_params->omega;
  const auto& recs = result.diagnostics.records;
  for (const auto& rec : recs)
    crit.check(rec.cert_lhs <= rec.cert_rhs + 1e-9,
               "bound violated at n=" + std::to_string(rec.n));

  // squared-distance contraction, measured on a window to ride out the
  // rotation of the iterate pair
  const std::size_t window = 40;
  for (std::size_t start = 40; start + window < recs.size(); start += 10) {
    const double d0 = recs[start].dist_to_ref;
    const double d1 = recs[start + window].dist_to_ref;
    if (d0 < 1e-140 || d1 < 1e-140) break;
    const double per_step_sq =
        std::pow((d1 * d1) / (d0 * d0), 1.0 / static_cast<double>(window));
    crit.check(per_step_sq <= omega + 0.05,
               "window at n=" + std::to_string(start) + " contracts at " +
                   std::to_string(per_step_sq) + " vs omega=" +
                   std::to_string(omega));
  }
}

void criterion_denoise_ordering() {
  Criterion crit(7, "accel reaches the RMSE tolerance before the baseline",
                 180.0);
  for (double noise : {defaults::kNoiseSigmaLow, defaults::kNoiseSigmaHigh}) {
    for (TvVariant variant : {TvVariant::isotropic, TvVariant::anisotropic}) {
      DenoiseExperimentConfig cfg;
      cfg.synthetic_size = 64;
      cfg.noise_sigma = noise;
      cfg.seed = 7;
      cfg.variant = variant;
      cfg.tol = 1e-4;
      cfg.reference_iters = 10000;

      cfg.algorithm = Algorithm::accel;
      cfg.iterations = 10000;
      DenoiseExperimentResult accel = run_denoise_experiment(cfg);

      cfg.algorithm = Algorithm::vu;
      cfg.iterations = 20000;
      cfg.reference_override = accel.reference;  // same target for both
      DenoiseExperimentResult baseline = run_denoise_experiment(cfg);

      const std::string tag =
          "noise=" + std::to_string(noise) +
          (variant == TvVariant::isotropic ? " iso" : " aniso");
      crit.check(accel.iterations_to_tol.has_value(),
                 tag + ": accel never reached tolerance");
      crit.check(baseline.iterations_to_tol.has_value(),
                 tag + ": baseline never reached tolerance");
      if (accel.iterations_to_tol && baseline.iterations_to_tol) {
        crit.check(*accel.iterations_to_tol < *baseline.iterations_to_tol,
                   tag + ": accel=" +
                       std::to_string(*accel.iterations_to_tol) +
                       " baseline=" +
                       std::to_string(*baseline.iterations_to_tol));
      }
    }
  }
}

void criterion_operator_facts() {
  Criterion crit(8, "gradient norm bound and wavelet orthogonality", 30.0);
  LinearMap grad = gradient_map(64, 64);
  grad.norm_bound.reset();
  const double grad_norm = estimate_norm(grad, 5000, 1e-13, 88);
  crit.check(grad_norm * grad_norm <= 8.0 + 1e-6,
             "||grad||^2=" + std::to_string(grad_norm * grad_norm));

  LinearMap wavelet = haar_map(64, 64, 4);
  wavelet.norm_bound.reset();
  const double w_norm = estimate_norm(wavelet, 5000, 1e-13, 89);
  crit.check(std::abs(w_norm - 1.0) <= 1e-8,
             "||W||=" + std::to_string(w_norm));
}

void criterion_svm() {
  Criterion crit(9, "svm desk-scale training, generalization and objective",
                 120.0);
  auto [train_data, test_data] = synthetic_blobs(200, 200, 1.5, 0.5, 9);
  SvmConfig cfg;
  cfg.kernel_sigma = 0.05;
  cfg.iterations = 1500;
  KernelModel model = train(train_data, cfg);
  const double train_err = misclassification_rate(model, train_data);
  const double test_err = misclassification_rate(model, test_data);
  crit.check(train_err == 0.0, "train error " + std::to_string(train_err));
  crit.check(test_err < 10.0, "test error " + std::to_string(test_err));

  // small instance against the projected-subgradient oracle
  auto [small_train, small_test] = synthetic_blobs(16, 2, 1.5, 0.5, 13);
  SvmConfig small_cfg;
  small_cfg.kernel_sigma = 0.15;
  small_cfg.iterations = 6000;
  KernelModel small_model = train(small_train, small_cfg);
  Vec gram = gram_matrix(small_model.support_features, small_model.n,
                         small_model.d, small_cfg.kernel_sigma);
  const double solver_value =
      svm_objective(gram, small_model.n, small_model.coefficients,
                    small_train.labels, small_cfg.C);
  const double oracle_value = oracles::subgradient_svm_objective(
      gram, small_model.n, small_train.labels, small_cfg.C, 2000000,
      min_eigenvalue(gram, small_model.n));
  crit.check(std::abs(solver_value - oracle_value) <=
                 1e-3 * std::abs(oracle_value),
             "solver=" + std::to_string(solver_value) +
                 " oracle=" + std::to_string(oracle_value));
}

void criterion_determinism() {
  Criterion crit(10, "identical seeds give byte-identical diagnostics", 60.0);

  DenoiseExperimentConfig dn;
  dn.synthetic_size = 32;
  dn.iterations = 30;
  dn.reference_iters = 100;
  dn.seed = 99;
  const std::string a = diagnostics_csv(run_denoise_experiment(dn).diagnostics);
  const std::string b = diagnostics_csv(run_denoise_experiment(dn).diagnostics);
  crit.check(a == b, "denoise diagnostics differ across runs");
  const std::string ra = rmse_series_csv(run_denoise_experiment(dn).diagnostics);
  const std::string rb = rmse_series_csv(run_denoise_experiment(dn).diagnostics);
  crit.check(ra == rb, "rmse series differ across runs");

  ToyRunConfig toy;
  toy.algorithm = Algorithm::accel;
  toy.iterations = 500;
  crit.check(diagnostics_csv(run_toy(toy).diagnostics) ==
                 diagnostics_csv(run_toy(toy).diagnostics),
             "toy diagnostics differ across runs");

  SvmExperimentConfig sv;
  sv.synthetic_n = 40;
  sv.iterations = 100;
  sv.kernel_sigmas = {0.5};
  sv.seed = 5;
  SvmExperimentResult s1 = run_svm_experiment(sv);
  SvmExperimentResult s2 = run_svm_experiment(sv);
  crit.check(s1.rows[0].train_error == s2.rows[0].train_error &&
                 s1.rows[0].test_error == s2.rows[0].test_error,
             "svm metrics differ across runs");
}

}  // namespace

int main() {
  criterion_identities();
  criterion_prox_oracles();
  criterion_schedule_limit();
  criterion_o1n_rate();
  criterion_fejer();
  criterion_geometric();
  criterion_denoise_ordering();
  criterion_operator_facts();
  criterion_svm();
  criterion_determinism();
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
