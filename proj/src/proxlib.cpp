#include "pdsplit/proxlib.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pdsplit/errors.hpp"

namespace pdsplit {

namespace {

double clamp(double t, double lo, double hi) {
  return std::min(std::max(t, lo), hi);
}

}  // namespace

Vec project_box(const Vec& x, const BoxSpec& box) {
  if (!(box.lo <= box.hi)) throw ParameterError("project_box: lo > hi");
  if (x.size() != box.dim)
    throw ParameterError("project_box: dimension mismatch");
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = clamp(x[i], box.lo, box.hi);
  return y;
}

Vec prox_quad_box(const Vec& p, double sigma, const Vec& b) {
  if (!(sigma > 0.0)) throw ParameterError("prox_quad_box: sigma must be > 0");
  if (p.size() != b.size())
    throw ParameterError("prox_quad_box: dimension mismatch");
  Vec y(p.size());
  const double inv = 1.0 / (1.0 + sigma);
  for (std::size_t i = 0; i < p.size(); ++i)
    y[i] = clamp((p[i] + sigma * b[i]) * inv, 0.0, 1.0);
  return y;
}

std::pair<Vec, Vec> project_pixelwise_ball(const Vec& p, const Vec& q,
                                           double lambda1) {
  if (p.size() != q.size())
    throw ParameterError("project_pixelwise_ball: shape mismatch");
  if (!(lambda1 > 0.0))
    throw ParameterError("project_pixelwise_ball: lambda1 must be > 0");
  Vec pp(p.size()), qq(q.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mag = std::sqrt(p[i] * p[i] + q[i] * q[i]);
    const double scale = lambda1 / std::max(lambda1, mag);
    pp[i] = scale * p[i];
    qq[i] = scale * q[i];
  }
  return {std::move(pp), std::move(qq)};
}

namespace {

double hinge_conj_coord(double t, double mu, double label, double C) {
  const double shifted = t - mu * label;
  // Y_i[-C,0] is [-C,0] for label +1 and [0,C] for label -1
  if (label > 0.0) return clamp(shifted, -C, 0.0);
  return clamp(shifted, 0.0, C);
}

}  // namespace

Vec prox_hinge_conj(const Vec& v, std::size_t i, double mu, double label,
                    double C) {
  if (label != 1.0 && label != -1.0)
    throw ParameterError("prox_hinge_conj: label must be +1 or -1");
  if (!(C > 0.0)) throw ParameterError("prox_hinge_conj: C must be > 0");
  if (mu < 0.0) throw ParameterError("prox_hinge_conj: mu must be >= 0");
  if (i >= v.size()) throw ParameterError("prox_hinge_conj: index out of range");
  Vec out(v.size(), 0.0);
  out[i] = hinge_conj_coord(v[i], mu, label, C);
  return out;
}

Vec prox_separable_hinge_conj(const Vec& v, double mu, const Vec& labels,
                              double C) {
  if (v.size() != labels.size())
    throw ParameterError("prox_separable_hinge_conj: dimension mismatch");
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw ParameterError("prox_separable_hinge_conj: labels must be +-1");
    out[i] = hinge_conj_coord(v[i], mu, labels[i], C);
  }
  return out;
}

Vec grad_quadratic_conj(const Vec& v, double nu) { return scaled(v, nu); }

ProxMap box_prox(const BoxSpec& box) {
  ProxMap p;
  p.evaluate = [box](const Vec& x, double) { return project_box(x, box); };
  p.descriptor = "projection onto box [" + std::to_string(box.lo) + "," +
                 std::to_string(box.hi) + "]^k";
  return p;
}

ProxMap quad_box_prox(Vec b) {
  ProxMap p;
  auto data = std::make_shared<Vec>(std::move(b));
  p.evaluate = [data](const Vec& x, double sigma) {
    return prox_quad_box(x, sigma, *data);
  };
  p.descriptor = "prox of 1/2||x-b||^2 + indicator([0,1]^k)";
  return p;
}

ProxMap pixelwise_ball_prox(double lambda1, std::size_t plane_size) {
  ProxMap p;
  p.evaluate = [lambda1, plane_size](const Vec& x, double) {
    if (x.size() != 2 * plane_size)
      throw ParameterError("pixelwise_ball_prox: packed field size mismatch");
    Vec out(x.size());
    for (std::size_t i = 0; i < plane_size; ++i) {
      const double u = x[i];
      const double w = x[plane_size + i];
      const double mag = std::sqrt(u * u + w * w);
      const double scale = lambda1 / std::max(lambda1, mag);
      out[i] = scale * u;
      out[plane_size + i] = scale * w;
    }
    return out;
  };
  p.descriptor = "pixelwise projection onto l2 ball of radius lambda1";
  return p;
}

ProxMap separable_hinge_conj_prox(Vec labels, double C) {
  ProxMap p;
  auto data = std::make_shared<Vec>(std::move(labels));
  p.evaluate = [data, C](const Vec& x, double mu) {
    return prox_separable_hinge_conj(x, mu, *data, C);
  };
  p.descriptor = "prox of the separable hinge conjugate";
  return p;
}

}  // namespace pdsplit
