#include "pdsplit/operators.hpp"

#include <cmath>

#include "pdsplit/errors.hpp"
#include "pdsplit/rng.hpp"

namespace pdsplit {

LipschitzOp zero_op() {
  LipschitzOp op;
  op.evaluate = [](const Vec& x) { return Vec(x.size(), 0.0); };
  op.lipschitz_const = 0.0;
  op.is_zero = true;
  return op;
}

ProxMap identity_prox() {
  ProxMap p;
  p.evaluate = [](const Vec& x, double) { return x; };
  p.descriptor = "prox of f=0 (identity)";
  return p;
}

LinearMap identity_map(std::size_t dim) { return scaled_identity_map(dim, 1.0); }

LinearMap scaled_identity_map(std::size_t dim, double alpha) {
  LinearMap map;
  map.apply = [alpha](const Vec& x) { return scaled(x, alpha); };
  map.adjoint_apply = map.apply;
  map.domain_dim = dim;
  map.codomain_dim = dim;
  map.norm_bound = std::abs(alpha);
  return map;
}

LinearMap dense_symmetric_map(std::shared_ptr<const Vec> matrix,
                              std::size_t n) {
  if (!matrix || matrix->size() != n * n)
    throw ParameterError("dense_symmetric_map: matrix must be n*n");
  LinearMap map;
  map.apply = [matrix, n](const Vec& x) {
    if (x.size() != n)
      throw ParameterError("dense_symmetric_map: dimension mismatch");
    Vec y(n, 0.0);
    const Vec& a = *matrix;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * x[j];
      y[i] = s;
    }
    return y;
  };
  map.adjoint_apply = map.apply;  // symmetric
  map.domain_dim = n;
  map.codomain_dim = n;
  return map;
}

Vec conjugate_prox(const ProxMap& prox_f, const Vec& x, double gamma) {
  if (!(gamma > 0.0)) throw ParameterError("conjugate_prox: gamma must be > 0");
  Vec inner = prox_f.evaluate(scaled(x, 1.0 / gamma), 1.0 / gamma);
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - gamma * inner[i];
  return out;
}

Vec resolvent_of_inverse(const ProxMap& resolvent_a, const Vec& x,
                         double gamma) {
  if (!(gamma > 0.0))
    throw ParameterError("resolvent_of_inverse: gamma must be > 0");
  Vec inner = resolvent_a.evaluate(scaled(x, gamma), gamma);
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    out[i] = x[i] - inner[i] / gamma;
  return out;
}

double estimate_norm(const LinearMap& map, int max_iters, double tol,
                     std::uint64_t seed) {
  if (max_iters < 1) throw ParameterError("estimate_norm: max_iters >= 1");
  if (!(tol > 0.0)) throw ParameterError("estimate_norm: tol must be > 0");
  CounterRng rng(seed);
  Vec x = rng.uniform_vec(map.domain_dim);
  double nx = norm(x);
  if (nx == 0.0) return 0.0;
  for (auto& t : x) t /= nx;

  double estimate = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    Vec w = map.adjoint_apply(map.apply(x));
    // Rayleigh quotient of L*L at the unit vector x
    const double lambda = dot(x, w);
    const double next = std::sqrt(std::max(lambda, 0.0));
    const double nw = norm(w);
    if (nw == 0.0) return 0.0;  // landed in the kernel; zero map in practice
    for (std::size_t i = 0; i < w.size(); ++i) x[i] = w[i] / nw;
    if (it > 0 && std::abs(next - estimate) <= tol * std::max(next, 1e-300)) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

double check_adjoint(const LinearMap& map, int trials, std::uint64_t seed) {
  if (trials < 1) throw ParameterError("check_adjoint: trials >= 1");
  CounterRng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec x = rng.uniform_vec(map.domain_dim);
    Vec y = rng.uniform_vec(map.codomain_dim);
    const double lhs = dot(map.apply(x), y);
    const double rhs = dot(x, map.adjoint_apply(y));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double norm_sq_estimate(const LinearMap& map, std::uint64_t seed) {
  if (map.norm_bound) return (*map.norm_bound) * (*map.norm_bound);
  const double est = estimate_norm(map, 1000, 1e-12, seed);
  return est * est;
}

}  // namespace pdsplit
