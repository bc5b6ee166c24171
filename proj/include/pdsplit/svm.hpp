#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "pdsplit/solvers.hpp"
#include "pdsplit/vec.hpp"

namespace pdsplit {

struct Dataset {
  Vec features;  // n x d, row-major
  Vec labels;    // +-1
  std::size_t n = 0;
  std::size_t d = 0;

  const double* sample(std::size_t i) const { return features.data() + i * d; }
};

// Kernel expansion sum_j c_j kappa(., X_j) over the (normalized) training
// features. feature_scale is the divisor applied during training so raw
// inputs can be mapped into the model's feature space at prediction time.
struct KernelModel {
  Vec coefficients;
  Vec support_features;  // n x d, already normalized
  std::size_t n = 0;
  std::size_t d = 0;
  double kernel_sigma = 0.0;
  double feature_scale = 1.0;
};

struct SvmConfig {
  double C = 1.0;
  double kernel_sigma = 0.15;
  std::size_t iterations = 1500;
};

// Gaussian kernel Gram matrix K_{ij} = exp(-||X_i-X_j||^2 / (2 sigma^2)),
// n x n row-major, computed once per unordered pair (exactly symmetric).
Vec gram_matrix(const Vec& features, std::size_t n, std::size_t d,
                double sigma);

// Smallest eigenvalue of a symmetric matrix to relative tolerance tol.
double min_eigenvalue(const Vec& matrix, std::size_t n, double tol = 1e-8);

// Splitting of the training problem: f = 0, forward term c -> Kc with
// eta = ||K|| (power iteration), one fused block with L = K and the
// separable hinge-conjugate prox. Certificate gamma = lambda_min(K);
// throws InfeasibleError when lambda_min <= tol (1e-8).
std::pair<PrimalDualProblem, StrongMonotonicityCert> build_svm_problem(
    std::shared_ptr<const Vec> gram, const Vec& labels, const SvmConfig& cfg);

// Normalizes features by sqrt(mean ||X_i||^2), builds the Gram matrix and
// runs the O(1/n) scheme for cfg.iterations steps with the defaults
// tau0 = 0.99*2 gamma/||K||, lambda = ||K||+1,
// sigma0 = sqrt(1+tau0(2 gamma-||K|| tau0)/lambda)/(n tau0 ||K||^2).
KernelModel train(const Dataset& dataset, const SvmConfig& cfg);

double decision_value(const KernelModel& model, const double* x);
// sign of the decision value; exactly 0 maps to +1
double predict(const KernelModel& model, const double* x);

// 100 * (#misclassified) / n on raw (unnormalized) data
double misclassification_rate(const KernelModel& model, const Dataset& data);

// 1/2 c^T K c + C sum_i max{1 - (Kc)_i Y_i, 0}
double svm_objective(const Vec& gram, std::size_t n, const Vec& coefficients,
                     const Vec& labels, double C);

// CSV rows "f1,...,fd,label" with label +-1 in the last column.
Dataset load_dataset_csv(const std::string& path);

// Big-endian IDX image/label file pair; raw labels are translated through
// `label_map` (default {8 -> -1, 9 -> +1}).
Dataset load_dataset_idx(const std::string& images_path,
                         const std::string& labels_path,
                         const std::map<int, int>& label_map = {{8, -1},
                                                                {9, +1}});

// Seeded subsample without replacement, keeping ceil(fraction*n) samples.
Dataset subsample(const Dataset& data, double fraction, std::uint64_t seed);

// First line sigma, second line C, then one coefficient per line.
void save_model_csv(const std::string& path, const KernelModel& model,
                    double C);

}  // namespace pdsplit
