#include "pdsplit/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "pdsplit/errors.hpp"
#include "pdsplit/proxlib.hpp"
#include "pdsplit/rng.hpp"

namespace pdsplit {

GradField grad_apply(const Image& x) {
  const std::size_t m = x.rows, n = x.cols;
  GradField g{Image(m, n), Image(m, n)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + 1 < m) g.u.at(i, j) = x.at(i + 1, j) - x.at(i, j);
      if (j + 1 < n) g.v.at(i, j) = x.at(i, j + 1) - x.at(i, j);
    }
  }
  return g;
}

Image grad_adjoint(const GradField& g) {
  if (g.u.rows != g.v.rows || g.u.cols != g.v.cols)
    throw ParameterError("grad_adjoint: plane shape mismatch");
  const std::size_t m = g.u.rows, n = g.u.cols;
  Image out(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      if (i + 1 < m) s -= g.u.at(i, j);
      if (i > 0) s += g.u.at(i - 1, j);
      if (j + 1 < n) s -= g.v.at(i, j);
      if (j > 0) s += g.v.at(i, j - 1);
      out.at(i, j) = s;
    }
  }
  return out;
}

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_divisible(const Image& x, int levels) {
  if (levels < 0) throw ParameterError("haar: levels must be >= 0");
  const std::size_t factor = std::size_t{1} << levels;
  if (x.rows % factor != 0 || x.cols % factor != 0)
    throw ParameterError("haar: image dims must be divisible by 2^levels");
}

// one analysis level on the top-left rows x cols block
void haar_level_forward(Image& a, std::size_t rows, std::size_t cols) {
  Vec tmp(std::max(rows, cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols / 2; ++j) {
      const double lo = a.at(i, 2 * j), hi = a.at(i, 2 * j + 1);
      tmp[j] = (lo + hi) * kInvSqrt2;
      tmp[cols / 2 + j] = (lo - hi) * kInvSqrt2;
    }
    for (std::size_t j = 0; j < cols; ++j) a.at(i, j) = tmp[j];
  }
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows / 2; ++i) {
      const double lo = a.at(2 * i, j), hi = a.at(2 * i + 1, j);
      tmp[i] = (lo + hi) * kInvSqrt2;
      tmp[rows / 2 + i] = (lo - hi) * kInvSqrt2;
    }
    for (std::size_t i = 0; i < rows; ++i) a.at(i, j) = tmp[i];
  }
}

void haar_level_inverse(Image& a, std::size_t rows, std::size_t cols) {
  Vec tmp(std::max(rows, cols));
  for (std::size_t j = 0; j < cols; ++j) {
    for (std::size_t i = 0; i < rows / 2; ++i) {
      const double lo = a.at(i, j), hi = a.at(rows / 2 + i, j);
      tmp[2 * i] = (lo + hi) * kInvSqrt2;
      tmp[2 * i + 1] = (lo - hi) * kInvSqrt2;
    }
    for (std::size_t i = 0; i < rows; ++i) a.at(i, j) = tmp[i];
  }
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols / 2; ++j) {
      const double lo = a.at(i, j), hi = a.at(i, cols / 2 + j);
      tmp[2 * j] = (lo + hi) * kInvSqrt2;
      tmp[2 * j + 1] = (lo - hi) * kInvSqrt2;
    }
    for (std::size_t j = 0; j < cols; ++j) a.at(i, j) = tmp[j];
  }
}

}  // namespace

Image haar_forward(const Image& x, int levels) {
  require_divisible(x, levels);
  Image a = x;
  std::size_t rows = x.rows, cols = x.cols;
  for (int level = 0; level < levels; ++level) {
    haar_level_forward(a, rows, cols);
    rows /= 2;
    cols /= 2;
  }
  return a;
}

Image haar_inverse(const Image& coeffs, int levels) {
  require_divisible(coeffs, levels);
  Image a = coeffs;
  std::size_t rows = coeffs.rows >> levels, cols = coeffs.cols >> levels;
  for (int level = levels - 1; level >= 0; --level) {
    rows *= 2;
    cols *= 2;
    haar_level_inverse(a, rows, cols);
  }
  return a;
}

double tv_value(const Image& x, TvVariant variant) {
  const std::size_t m = x.rows, n = x.cols;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double dv = x.at(i + 1, j) - x.at(i, j);
      const double dh = x.at(i, j + 1) - x.at(i, j);
      total += variant == TvVariant::isotropic
                   ? std::sqrt(dv * dv + dh * dh)
                   : std::abs(dv) + std::abs(dh);
    }
  }
  // last-column vertical and last-row horizontal terms
  for (std::size_t i = 0; i + 1 < m; ++i)
    total += std::abs(x.at(i + 1, n - 1) - x.at(i, n - 1));
  for (std::size_t j = 0; j + 1 < n; ++j)
    total += std::abs(x.at(m - 1, j + 1) - x.at(m - 1, j));
  return total;
}

double denoise_objective(const Image& x, const Image& b,
                         const DenoiseConfig& cfg) {
  if (x.rows != b.rows || x.cols != b.cols)
    throw ParameterError("denoise_objective: shape mismatch");
  double quad = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.data[i] - b.data[i];
    quad += d * d;
  }
  const Image w = haar_forward(x, cfg.wavelet_levels);
  double l1 = 0.0;
  for (double c : w.data) l1 += std::abs(c);
  return 0.5 * quad + cfg.lambda1 * tv_value(x, cfg.variant) +
         cfg.lambda2 * l1;
}

LinearMap gradient_map(std::size_t rows, std::size_t cols) {
  LinearMap map;
  const std::size_t k = rows * cols;
  map.apply = [rows, cols, k](const Vec& flat) {
    if (flat.size() != k) throw ParameterError("gradient_map: size mismatch");
    Image x;
    x.data = flat;
    x.rows = rows;
    x.cols = cols;
    GradField g = grad_apply(x);
    Vec out(2 * k);
    std::copy(g.u.data.begin(), g.u.data.end(), out.begin());
    std::copy(g.v.data.begin(), g.v.data.end(), out.begin() + k);
    return out;
  };
  map.adjoint_apply = [rows, cols, k](const Vec& packed) {
    if (packed.size() != 2 * k)
      throw ParameterError("gradient_map adjoint: size mismatch");
    GradField g{Image(rows, cols), Image(rows, cols)};
    std::copy(packed.begin(), packed.begin() + k, g.u.data.begin());
    std::copy(packed.begin() + k, packed.end(), g.v.data.begin());
    return grad_adjoint(g).data;
  };
  map.domain_dim = k;
  map.codomain_dim = 2 * k;
  map.norm_bound = std::sqrt(8.0);
  return map;
}

LinearMap haar_map(std::size_t rows, std::size_t cols, int levels) {
  LinearMap map;
  const std::size_t k = rows * cols;
  map.apply = [rows, cols, k, levels](const Vec& flat) {
    if (flat.size() != k) throw ParameterError("haar_map: size mismatch");
    Image x;
    x.data = flat;
    x.rows = rows;
    x.cols = cols;
    return haar_forward(x, levels).data;
  };
  map.adjoint_apply = [rows, cols, k, levels](const Vec& flat) {
    if (flat.size() != k)
      throw ParameterError("haar_map adjoint: size mismatch");
    Image x;
    x.data = flat;
    x.rows = rows;
    x.cols = cols;
    // orthogonal transform: adjoint = inverse
    return haar_inverse(x, levels).data;
  };
  map.domain_dim = k;
  map.codomain_dim = k;
  map.norm_bound = 1.0;
  return map;
}

std::pair<PrimalDualProblem, StrongMonotonicityCert> build_denoise_problem(
    const Image& b, const DenoiseConfig& cfg) {
  if (!(cfg.lambda1 > 0.0) || !(cfg.lambda2 > 0.0))
    throw ParameterError("build_denoise_problem: lambda1, lambda2 must be > 0");
  const std::size_t factor = std::size_t{1} << cfg.wavelet_levels;
  if (b.rows % factor != 0 || b.cols % factor != 0)
    throw ParameterError(
        "build_denoise_problem: dims must be divisible by 2^wavelet_levels");
  const std::size_t k = b.size();

  PrimalDualProblem problem;
  problem.z = Vec(k, 0.0);
  problem.resolvent_A = quad_box_prox(b.data);
  problem.forward_C = zero_op();

  Block tv_block;
  tv_block.L = gradient_map(b.rows, b.cols);
  tv_block.forward_Dinv = zero_op();
  tv_block.r = Vec(2 * k, 0.0);
  if (cfg.variant == TvVariant::isotropic) {
    tv_block.resolvent_Bconj = pixelwise_ball_prox(cfg.lambda1, k);
  } else {
    tv_block.resolvent_Bconj = box_prox({-cfg.lambda1, cfg.lambda1, 2 * k});
  }
  problem.blocks.push_back(std::move(tv_block));

  Block wavelet_block;
  wavelet_block.L = haar_map(b.rows, b.cols, cfg.wavelet_levels);
  wavelet_block.forward_Dinv = zero_op();
  wavelet_block.r = Vec(k, 0.0);
  wavelet_block.resolvent_Bconj = box_prox({-cfg.lambda2, cfg.lambda2, k});
  problem.blocks.push_back(std::move(wavelet_block));

  StrongMonotonicityCert cert;
  cert.gamma = 1.0;  // f is 1-strongly convex
  return {std::move(problem), cert};
}

Image add_gaussian_noise(const Image& x, double sigma, std::uint64_t seed) {
  if (sigma < 0.0)
    throw ParameterError("add_gaussian_noise: sigma must be >= 0");
  CounterRng rng(seed);
  Image out = x;
  for (auto& p : out.data) p += sigma * rng.normal();
  return out;
}

double rmse(const Image& x, const Image& ref) {
  if (x.rows != ref.rows || x.cols != ref.cols)
    throw ParameterError("rmse: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x.data[i] - ref.data[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(x.size()));
}

Image read_pgm(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open: " + path);

  auto next_token = [&stream, &path]() {
    std::string token;
    int c = stream.get();
    while (c != EOF) {
      if (c == '#') {  // comment runs to end of line
        while (c != EOF && c != '\n') c = stream.get();
      } else if (!std::isspace(c)) {
        break;
      }
      c = stream.get();
    }
    while (c != EOF && !std::isspace(c)) {
      token.push_back(static_cast<char>(c));
      c = stream.get();
    }
    if (token.empty()) throw IoError("truncated PGM header: " + path);
    return token;
  };

  if (next_token() != "P5") throw IoError("not a binary PGM (P5): " + path);
  std::size_t width = 0, height = 0;
  long maxval = 0;
  try {
    width = std::stoul(next_token());
    height = std::stoul(next_token());
    maxval = std::stol(next_token());
  } catch (const std::exception&) {
    throw IoError("malformed PGM header: " + path);
  }
  if (width == 0 || height == 0)
    throw IoError("malformed PGM dimensions: " + path);
  if (maxval != 255) throw IoError("unsupported PGM maxval (need 255): " + path);

  Image image(height, width);
  std::vector<unsigned char> raw(width * height);
  stream.read(reinterpret_cast<char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(stream.gcount()) != raw.size())
    throw IoError("truncated PGM pixel data: " + path);
  for (std::size_t i = 0; i < raw.size(); ++i)
    image.data[i] = static_cast<double>(raw[i]) / 255.0;
  return image;
}

void write_pgm(const std::string& path, const Image& image) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path);
  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%zu %zu\n255\n", image.cols,
                image.rows);
  stream << header;
  std::vector<unsigned char> raw(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double scaled = std::floor(image.data[i] * 255.0 + 0.5);
    raw[i] = static_cast<unsigned char>(std::clamp(scaled, 0.0, 255.0));
  }
  stream.write(reinterpret_cast<const char*>(raw.data()),
               static_cast<std::streamsize>(raw.size()));
  if (!stream) throw IoError("write failed: " + path);
}

}  // namespace pdsplit
