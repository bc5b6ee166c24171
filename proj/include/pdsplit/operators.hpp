#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "pdsplit/vec.hpp"

namespace pdsplit {

// Linear continuous operator together with its adjoint. Concrete problems
// only ever touch L through these two callables plus an optional a-priori
// bound on the operator norm (e.g. sqrt(8) for the discrete gradient).
struct LinearMap {
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> adjoint_apply;
  std::size_t domain_dim = 0;
  std::size_t codomain_dim = 0;
  std::optional<double> norm_bound;  // upper bound on ||L||, when known
};

// Resolvent J_{gamma A} of a maximally monotone operator, equivalently
// prox_{gamma f} of a convex function. The set-valued operator itself is
// never materialized; evaluate(x, gamma) is all any solver needs.
struct ProxMap {
  std::function<Vec(const Vec&, double)> evaluate;
  std::string descriptor;
};

// Single-valued monotone operator evaluated by forward steps (C, D_i^{-1}).
// The identically-zero operator is first class: is_zero with constant 0.
struct LipschitzOp {
  std::function<Vec(const Vec&)> evaluate;
  double lipschitz_const = 0.0;
  bool is_zero = false;
};

LipschitzOp zero_op();
ProxMap identity_prox();
LinearMap identity_map(std::size_t dim);
LinearMap scaled_identity_map(std::size_t dim, double alpha);

// Dense symmetric matrix (row-major, n*n) as a LinearMap; apply == adjoint.
LinearMap dense_symmetric_map(std::shared_ptr<const Vec> matrix,
                              std::size_t n);

// prox_{gamma f*}(x) via Moreau's decomposition:
// x - gamma * prox_{(1/gamma) f}(x / gamma).
Vec conjugate_prox(const ProxMap& prox_f, const Vec& x, double gamma);

// J_{gamma^{-1} A^{-1}}(x) from the resolvent of A, arranged so that
// J_{gamma A}(u) + gamma * J_{gamma^{-1} A^{-1}}(u / gamma) = u.
Vec resolvent_of_inverse(const ProxMap& resolvent_a, const Vec& x,
                         double gamma);

// Power iteration on L*L from a seeded random start. Returns an estimate of
// ||L|| with relative successive change <= tol, or after max_iters.
double estimate_norm(const LinearMap& map, int max_iters, double tol,
                     std::uint64_t seed);

// max |<Lx,y> - <x,L*y>| over `trials` random pairs.
double check_adjoint(const LinearMap& map, int trials, std::uint64_t seed);

// ||L||^2 for step-size conditions: norm_bound squared when present,
// otherwise a power-iteration estimate.
double norm_sq_estimate(const LinearMap& map, std::uint64_t seed = 20240001ull);

}  // namespace pdsplit
