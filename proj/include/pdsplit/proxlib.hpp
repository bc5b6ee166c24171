#pragma once

#include <cstddef>
#include <utility>

#include "pdsplit/operators.hpp"
#include "pdsplit/vec.hpp"

namespace pdsplit {

// Coordinatewise box [lo,hi]^dim.
struct BoxSpec {
  double lo;
  double hi;
  std::size_t dim;
};

// P_{[lo,hi]^k}(x): resolvent of the normal cone of the box.
Vec project_box(const Vec& x, const BoxSpec& box);

// prox of f(x) = 1/2||x-b||^2 + indicator of [0,1]^k:
// P_{[0,1]^k}((p + sigma*b) / (1 + sigma)).
Vec prox_quad_box(const Vec& p, double sigma, const Vec& b);

// Per-pixel projection of the pair field (p,q) onto the l2 ball of radius
// lambda1: (p,q) -> lambda1 (p,q) / max{lambda1, sqrt(p^2+q^2)}.
std::pair<Vec, Vec> project_pixelwise_ball(const Vec& p, const Vec& q,
                                           double lambda1);

// prox_{mu g_i*} for the hinge conjugate: zero in every coordinate except i,
// where it is P_{Y_i[-C,0]}(v_i - mu Y_i). Y_i[-C,0] means [-C,0] for
// label +1 and [0,C] for label -1.
Vec prox_hinge_conj(const Vec& v, std::size_t i, double mu, double label,
                    double C);

// All n hinge-conjugate coordinates at once; equals the superposition of the
// single-coordinate maps because each g_i depends only on coordinate i.
Vec prox_separable_hinge_conj(const Vec& v, double mu, const Vec& labels,
                              double C);

// Gradient of the conjugate of l = 1/(2 nu)||.||^2, i.e. v -> nu*v.
Vec grad_quadratic_conj(const Vec& v, double nu);

// ProxMap wrappers used when assembling PrimalDualProblem blocks.
ProxMap box_prox(const BoxSpec& box);
ProxMap quad_box_prox(Vec b);
// Packed field [p;q] of two plane_size halves, projected pairwise.
ProxMap pixelwise_ball_prox(double lambda1, std::size_t plane_size);
ProxMap separable_hinge_conj_prox(Vec labels, double C);

}  // namespace pdsplit
