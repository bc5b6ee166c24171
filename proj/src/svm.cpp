#include "pdsplit/svm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pdsplit/errors.hpp"
#include "pdsplit/operators.hpp"
#include "pdsplit/proxlib.hpp"
#include "pdsplit/rng.hpp"

namespace pdsplit {

namespace {

constexpr std::uint64_t kNormSeed = 0x5bd1e995u;  // power-iteration start
constexpr double kMinEigTol = 1e-8;

double gaussian_kernel(const double* a, const double* b, std::size_t d,
                       double sigma) {
  double sq = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    sq += diff * diff;
  }
  return std::exp(-sq / (2.0 * sigma * sigma));
}

}  // namespace

Vec gram_matrix(const Vec& features, std::size_t n, std::size_t d,
                double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("gram_matrix: sigma must be > 0");
  if (features.size() != n * d)
    throw ParameterError("gram_matrix: features must be n*d");
  Vec gram(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    gram[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double value = gaussian_kernel(features.data() + i * d,
                                           features.data() + j * d, d, sigma);
      gram[i * n + j] = value;
      gram[j * n + i] = value;
    }
  }
  return gram;
}

double min_eigenvalue(const Vec& matrix, std::size_t n, double tol) {
  if (matrix.size() != n * n)
    throw ParameterError("min_eigenvalue: matrix must be n*n");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(matrix[i * n + j] - matrix[j * n + i]) >
          tol * (1.0 + std::abs(matrix[i * n + j])))
        throw ParameterError("min_eigenvalue: matrix not symmetric");

  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          matrix[i * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw ParameterError("min_eigenvalue: eigensolver failed");
  return solver.eigenvalues()(0);
}

std::pair<PrimalDualProblem, StrongMonotonicityCert> build_svm_problem(
    std::shared_ptr<const Vec> gram, const Vec& labels, const SvmConfig& cfg) {
  if (!gram) throw ParameterError("build_svm_problem: null gram matrix");
  const std::size_t n = labels.size();
  if (gram->size() != n * n)
    throw ParameterError("build_svm_problem: gram/label size mismatch");
  if (!(cfg.C > 0.0)) throw ParameterError("build_svm_problem: C must be > 0");

  const double lambda_min = min_eigenvalue(*gram, n, kMinEigTol);
  if (lambda_min <= kMinEigTol)
    throw InfeasibleError(
        "build_svm_problem: lambda_min(K) <= 1e-8, problem not strongly "
        "convex (lambda_min = " +
        std::to_string(lambda_min) + ")");

  LinearMap kernel_map = dense_symmetric_map(gram, n);
  const double norm_k = estimate_norm(kernel_map, 1000, 1e-12, kNormSeed);

  PrimalDualProblem problem;
  problem.z = Vec(n, 0.0);
  problem.resolvent_A = identity_prox();  // f = 0
  problem.forward_C.evaluate = kernel_map.apply;
  problem.forward_C.lipschitz_const = norm_k;
  problem.forward_C.is_zero = false;

  // the n per-coordinate hinge blocks share L_i = K, so they fuse into one
  // block with the separable conjugate prox
  Block block;
  block.L = kernel_map;
  block.L.norm_bound = norm_k;
  block.forward_Dinv = zero_op();
  block.r = Vec(n, 0.0);
  block.resolvent_Bconj = separable_hinge_conj_prox(labels, cfg.C);
  problem.blocks.push_back(std::move(block));

  StrongMonotonicityCert cert;
  cert.gamma = lambda_min;
  return {std::move(problem), cert};
}

KernelModel train(const Dataset& dataset, const SvmConfig& cfg) {
  if (dataset.n == 0) throw ParameterError("train: empty dataset");
  if (dataset.features.size() != dataset.n * dataset.d)
    throw ParameterError("train: features must be n*d");

  double mean_sq = 0.0;
  for (std::size_t i = 0; i < dataset.n; ++i) {
    const double* x = dataset.sample(i);
    for (std::size_t k = 0; k < dataset.d; ++k) mean_sq += x[k] * x[k];
  }
  mean_sq /= static_cast<double>(dataset.n);
  if (!(mean_sq > 0.0)) throw ParameterError("train: all-zero features");
  const double scale = std::sqrt(mean_sq);

  KernelModel model;
  model.n = dataset.n;
  model.d = dataset.d;
  model.kernel_sigma = cfg.kernel_sigma;
  model.feature_scale = scale;
  model.support_features = dataset.features;
  for (auto& value : model.support_features) value /= scale;

  auto gram = std::make_shared<const Vec>(gram_matrix(
      model.support_features, dataset.n, dataset.d, cfg.kernel_sigma));
  auto [problem, cert] = build_svm_problem(gram, dataset.labels, cfg);

  const double norm_k = problem.forward_C.lipschitz_const;
  const double gamma = cert.gamma;
  const double tau0 = 0.99 * 2.0 * gamma / norm_k;
  const double lambda = norm_k + 1.0;
  const double sigma0 =
      std::sqrt(1.0 + tau0 * (2.0 * gamma - norm_k * tau0) / lambda) /
      (static_cast<double>(dataset.n) * tau0 * norm_k * norm_k);

  AccelSchedule schedule = accel_init(tau0, {sigma0}, lambda, cert, norm_k,
                                      {norm_k * norm_k});

  RunOptions options;
  options.max_iters = cfg.iterations;
  RunDiagnostics diag =
      run(problem, Algorithm::accel, std::move(schedule),
          make_initial_state(problem, Vec(dataset.n, 0.0)), options);

  model.coefficients = std::move(diag.final_state.x);
  return model;
}

double decision_value(const KernelModel& model, const double* x) {
  Vec normalized(model.d);
  for (std::size_t k = 0; k < model.d; ++k)
    normalized[k] = x[k] / model.feature_scale;
  double value = 0.0;
  for (std::size_t j = 0; j < model.n; ++j)
    value += model.coefficients[j] *
             gaussian_kernel(normalized.data(),
                             model.support_features.data() + j * model.d,
                             model.d, model.kernel_sigma);
  return value;
}

double predict(const KernelModel& model, const double* x) {
  return decision_value(model, x) >= 0.0 ? 1.0 : -1.0;
}

double misclassification_rate(const KernelModel& model, const Dataset& data) {
  if (data.d != model.d)
    throw ParameterError("misclassification_rate: feature dim mismatch");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.n; ++i)
    if (predict(model, data.sample(i)) != data.labels[i]) ++wrong;
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(data.n);
}

double svm_objective(const Vec& gram, std::size_t n, const Vec& coefficients,
                     const Vec& labels, double C) {
  if (gram.size() != n * n || coefficients.size() != n || labels.size() != n)
    throw ParameterError("svm_objective: size mismatch");
  Vec kc(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += gram[i * n + j] * coefficients[j];
    kc[i] = s;
  }
  double value = 0.5 * dot(coefficients, kc);
  for (std::size_t i = 0; i < n; ++i)
    value += C * std::max(1.0 - kc[i] * labels[i], 0.0);
  return value;
}

Dataset load_dataset_csv(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError("cannot open: " + path);

  Dataset data;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(field, &used));
        while (used < field.size() && std::isspace(
                   static_cast<unsigned char>(field[used])))
          ++used;
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(line_no) +
                      ": cannot parse '" + field + "'");
      }
    }
    if (row.size() < 2)
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": need at least one feature and a label");
    const double label = row.back();
    row.pop_back();
    if (label != 1.0 && label != -1.0)
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": label must be +1 or -1");
    if (data.n == 0) {
      data.d = row.size();
    } else if (row.size() != data.d) {
      throw IoError(path + ":" + std::to_string(line_no) +
                    ": inconsistent feature count");
    }
    data.features.insert(data.features.end(), row.begin(), row.end());
    data.labels.push_back(label);
    ++data.n;
  }
  if (data.n == 0) throw IoError(path + ": empty dataset");
  return data;
}

namespace {

std::uint32_t read_be32(std::ifstream& stream, const std::string& path) {
  unsigned char bytes[4];
  stream.read(reinterpret_cast<char*>(bytes), 4);
  if (!stream) throw IoError("truncated IDX file: " + path);
  return (std::uint32_t(bytes[0]) << 24) | (std::uint32_t(bytes[1]) << 16) |
         (std::uint32_t(bytes[2]) << 8) | std::uint32_t(bytes[3]);
}

}  // namespace

Dataset load_dataset_idx(const std::string& images_path,
                         const std::string& labels_path,
                         const std::map<int, int>& label_map) {
  std::ifstream images(images_path, std::ios::binary);
  if (!images) throw IoError("cannot open: " + images_path);
  if (read_be32(images, images_path) != 0x00000803u)
    throw IoError("bad IDX image magic (expect 0x00000803): " + images_path);
  const std::uint32_t count = read_be32(images, images_path);
  const std::uint32_t rows = read_be32(images, images_path);
  const std::uint32_t cols = read_be32(images, images_path);

  std::ifstream labels(labels_path, std::ios::binary);
  if (!labels) throw IoError("cannot open: " + labels_path);
  if (read_be32(labels, labels_path) != 0x00000801u)
    throw IoError("bad IDX label magic (expect 0x00000801): " + labels_path);
  if (read_be32(labels, labels_path) != count)
    throw IoError("IDX image/label count mismatch");

  Dataset data;
  data.n = count;
  data.d = static_cast<std::size_t>(rows) * cols;
  data.features.resize(data.n * data.d);
  data.labels.resize(data.n);

  std::vector<unsigned char> pixels(data.d);
  for (std::size_t i = 0; i < data.n; ++i) {
    images.read(reinterpret_cast<char*>(pixels.data()),
                static_cast<std::streamsize>(pixels.size()));
    if (!images) throw IoError("truncated IDX pixel data: " + images_path);
    for (std::size_t k = 0; k < data.d; ++k)
      data.features[i * data.d + k] = static_cast<double>(pixels[k]) / 255.0;

    char raw = 0;
    labels.read(&raw, 1);
    if (!labels) throw IoError("truncated IDX label data: " + labels_path);
    const auto found = label_map.find(static_cast<unsigned char>(raw));
    if (found == label_map.end())
      throw IoError("IDX label " + std::to_string(int(raw)) +
                    " outside the label mapping");
    data.labels[i] = static_cast<double>(found->second);
  }
  return data;
}

Dataset subsample(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw ParameterError("subsample: fraction must be in (0,1]");
  const std::size_t keep = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(data.n)));
  std::vector<std::size_t> order(data.n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  CounterRng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + rng.next_u64() % (data.n - i);
    std::swap(order[i], order[j]);
  }
  Dataset out;
  out.n = keep;
  out.d = data.d;
  out.features.resize(keep * data.d);
  out.labels.resize(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    std::copy(data.sample(order[i]), data.sample(order[i]) + data.d,
              out.features.begin() + static_cast<std::ptrdiff_t>(i * data.d));
    out.labels[i] = data.labels[order[i]];
  }
  return out;
}

void save_model_csv(const std::string& path, const KernelModel& model,
                    double C) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g\n", model.kernel_sigma);
  stream << buf;
  std::snprintf(buf, sizeof(buf), "%.17g\n", C);
  stream << buf;
  for (double c : model.coefficients) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", c);
    stream << buf;
  }
  if (!stream) throw IoError("write failed: " + path);
}

}  // namespace pdsplit
