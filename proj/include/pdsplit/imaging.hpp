#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "pdsplit/solvers.hpp"
#include "pdsplit/vec.hpp"

namespace pdsplit {

// Grayscale image, row-major. Valid denoising inputs/outputs have pixels in
// [0,1]; noisy observations may exceed the range and are stored unclipped.
struct Image {
  Vec data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  Image() = default;
  Image(std::size_t m, std::size_t n, double fill = 0.0)
      : data(m * n, fill), rows(m), cols(n) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  std::size_t size() const { return data.size(); }
};

// Discrete gradient field: u holds vertical differences (zero last row),
// v horizontal differences (zero last column).
struct GradField {
  Image u;
  Image v;
};

enum class TvVariant { isotropic, anisotropic };

struct DenoiseConfig {
  double lambda1;
  double lambda2;
  TvVariant variant = TvVariant::isotropic;
  int wavelet_levels = 4;
};

// Forward differences with Neumann boundary:
// u_{i,j} = x_{i+1,j}-x_{i,j} for i<M (0 at i=M),
// v_{i,j} = x_{i,j+1}-x_{i,j} for j<N (0 at j=N).
GradField grad_apply(const Image& x);

// Exact adjoint of grad_apply (negative divergence, matching boundary).
Image grad_adjoint(const GradField& g);

// Orthonormal 2-D Haar analysis, level-recursive on the low-pass quadrant
// (LL packed top-left). Requires rows and cols divisible by 2^levels.
Image haar_forward(const Image& x, int levels);
Image haar_inverse(const Image& coeffs, int levels);

double tv_value(const Image& x, TvVariant variant);

// 1/2||x-b||^2 + lambda1 TV(x) + lambda2 ||Wx||_1
double denoise_objective(const Image& x, const Image& b,
                         const DenoiseConfig& cfg);

// LinearMap views of the two analysis operators (flattened row-major;
// gradient codomain packs [u;v]).
LinearMap gradient_map(std::size_t rows, std::size_t cols);
LinearMap haar_map(std::size_t rows, std::size_t cols, int levels);

// Assembles the two-block splitting of the denoising problem:
// prox of f = 1/2||.-b||^2 + indicator([0,1]^k), zero forward term,
// TV block (pixelwise ball / box depending on variant) and wavelet box
// block. The certificate carries gamma = 1.
std::pair<PrimalDualProblem, StrongMonotonicityCert> build_denoise_problem(
    const Image& b, const DenoiseConfig& cfg);

// x + sigma * N(0,1) per pixel, deterministic given seed, unclipped.
Image add_gaussian_noise(const Image& x, double sigma, std::uint64_t seed);

double rmse(const Image& x, const Image& ref);

// Binary PGM (P5), maxval 255. Write scales [0,1] -> [0,255] with
// round-half-up (values clamped); read divides by 255.
Image read_pgm(const std::string& path);
void write_pgm(const std::string& path, const Image& image);

}  // namespace pdsplit
