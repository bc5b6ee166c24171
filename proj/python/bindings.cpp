#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <utility>

#include "pdsplit/experiments.hpp"
#include "pdsplit/imaging.hpp"
#include "pdsplit/operators.hpp"
#include "pdsplit/proxlib.hpp"
#include "pdsplit/solvers.hpp"
#include "pdsplit/svm.hpp"

namespace py = pybind11;
using namespace pdsplit;

namespace {

Vec to_vec(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return Vec(a.data(), a.data() + a.size());
}

py::array_t<double> to_array(const Vec& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Image to_image(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw ParameterError("expected a 2-D array");
  Image img(static_cast<std::size_t>(a.shape(0)),
            static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), img.data.begin());
  return img;
}

py::array_t<double> to_array(const Image& img) {
  py::array_t<double> out({static_cast<py::ssize_t>(img.rows),
                           static_cast<py::ssize_t>(img.cols)});
  std::copy(img.data.begin(), img.data.end(), out.mutable_data());
  return out;
}

TvVariant parse_variant(const std::string& name) {
  if (name == "isotropic") return TvVariant::isotropic;
  if (name == "anisotropic") return TvVariant::anisotropic;
  throw ParameterError("variant must be 'isotropic' or 'anisotropic'");
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "vu") return Algorithm::vu;
  if (name == "accel") return Algorithm::accel;
  if (name == "linear") return Algorithm::linear;
  throw ParameterError("algorithm must be 'vu', 'accel' or 'linear'");
}

ProxMap prox_from_callable(const py::function& f, std::string name) {
  ProxMap p;
  p.evaluate = [f](const Vec& x, double step) {
    py::gil_scoped_acquire gil;
    auto result = f(to_array(x), step)
                      .cast<py::array_t<double,
                                        py::array::c_style | py::array::forcecast>>();
    return to_vec(result);
  };
  p.descriptor = std::move(name);
  return p;
}

py::dict diagnostics_to_dict(const RunDiagnostics& diag) {
  const py::ssize_t n = static_cast<py::ssize_t>(diag.records.size());
  py::array_t<double> tau(n), ntau(n), dist(n), objective(n), lhs(n), rhs(n);
  py::array_t<std::int64_t> iters(n);
  for (py::ssize_t i = 0; i < n; ++i) {
    const auto& rec = diag.records[static_cast<std::size_t>(i)];
    iters.mutable_data()[i] = static_cast<std::int64_t>(rec.n);
    tau.mutable_data()[i] = rec.tau_n;
    ntau.mutable_data()[i] = rec.n_tau_n;
    dist.mutable_data()[i] = rec.dist_to_ref;
    objective.mutable_data()[i] = rec.objective;
    lhs.mutable_data()[i] = rec.cert_lhs;
    rhs.mutable_data()[i] = rec.cert_rhs;
  }
  py::dict out;
  out["n"] = iters;
  out["tau_n"] = tau;
  out["n_tau_n"] = ntau;
  out["dist_to_ref"] = dist;
  out["objective"] = objective;
  out["cert_lhs"] = lhs;
  out["cert_rhs"] = rhs;
  out["final_x"] = to_array(diag.final_state.x);
  if (diag.iterations_to_tol)
    out["iterations_to_tol"] = py::int_(*diag.iterations_to_tol);
  else
    out["iterations_to_tol"] = py::none();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "primal-dual splitting solvers with TV denoising and kernel SVM";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError",
                                          PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  // --- proximal operators ---
  m.def(
      "project_box",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         double lo, double hi) {
        Vec v = to_vec(x);
        return to_array(project_box(v, {lo, hi, v.size()}));
      },
      py::arg("x"), py::arg("lo"), py::arg("hi"),
      "coordinatewise projection onto [lo, hi]");

  m.def(
      "prox_quad_box",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p,
         double sigma,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
        return to_array(prox_quad_box(to_vec(p), sigma, to_vec(b)));
      },
      py::arg("p"), py::arg("sigma"), py::arg("b"),
      "prox of 1/2||x-b||^2 + indicator([0,1]^k)");

  m.def(
      "project_pixelwise_ball",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& p,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& q,
         double lambda1) {
        auto [pp, qq] = project_pixelwise_ball(to_vec(p), to_vec(q), lambda1);
        return py::make_tuple(to_array(pp), to_array(qq));
      },
      py::arg("p"), py::arg("q"), py::arg("lambda1"),
      "per-pixel projection of the pair field onto the l2 ball");

  m.def(
      "prox_hinge_conj",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& v,
         std::size_t i, double mu, double label, double C) {
        return to_array(prox_hinge_conj(to_vec(v), i, mu, label, C));
      },
      py::arg("v"), py::arg("i"), py::arg("mu"), py::arg("label"),
      py::arg("C"));

  m.def(
      "prox_separable_hinge_conj",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& v,
         double mu,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& labels,
         double C) {
        return to_array(prox_separable_hinge_conj(to_vec(v), mu,
                                                  to_vec(labels), C));
      },
      py::arg("v"), py::arg("mu"), py::arg("labels"), py::arg("C"));

  m.def(
      "conjugate_prox",
      [](const py::function& prox,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         double gamma) {
        return to_array(conjugate_prox(prox_from_callable(prox, "callable"),
                                       to_vec(x), gamma));
      },
      py::arg("prox"), py::arg("x"), py::arg("gamma"),
      "prox of the conjugate via Moreau decomposition; prox(x, step) -> array");

  m.def(
      "resolvent_of_inverse",
      [](const py::function& resolvent,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         double gamma) {
        return to_array(resolvent_of_inverse(
            prox_from_callable(resolvent, "callable"), to_vec(x), gamma));
      },
      py::arg("resolvent"), py::arg("x"), py::arg("gamma"));

  // --- imaging ---
  m.def(
      "grad_apply",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x) {
        GradField g = grad_apply(to_image(x));
        return py::make_tuple(to_array(g.u), to_array(g.v));
      },
      py::arg("x"), "forward differences (u, v) with Neumann boundary");

  m.def(
      "grad_adjoint",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& u,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
        GradField g{to_image(u), to_image(v)};
        return to_array(grad_adjoint(g));
      },
      py::arg("u"), py::arg("v"));

  m.def(
      "haar_forward",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         int levels) { return to_array(haar_forward(to_image(x), levels)); },
      py::arg("x"), py::arg("levels") = 4);

  m.def(
      "haar_inverse",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         int levels) { return to_array(haar_inverse(to_image(x), levels)); },
      py::arg("x"), py::arg("levels") = 4);

  m.def(
      "tv_value",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         const std::string& variant) {
        return tv_value(to_image(x), parse_variant(variant));
      },
      py::arg("x"), py::arg("variant") = "isotropic");

  m.def(
      "add_gaussian_noise",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         double sigma, std::uint64_t seed) {
        return to_array(add_gaussian_noise(to_image(x), sigma, seed));
      },
      py::arg("x"), py::arg("sigma"), py::arg("seed"));

  m.def(
      "rmse",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& x,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& ref) {
        return rmse(to_image(x), to_image(ref));
      },
      py::arg("x"), py::arg("ref"));

  m.def("read_pgm",
        [](const std::string& path) { return to_array(read_pgm(path)); },
        py::arg("path"));
  m.def(
      "write_pgm",
      [](const std::string& path,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& img) {
        write_pgm(path, to_image(img));
      },
      py::arg("path"), py::arg("image"));

  m.def("synthetic_piecewise_image",
        [](std::size_t rows, std::size_t cols) {
          return to_array(synthetic_piecewise_image(rows, cols));
        },
        py::arg("rows") = 64, py::arg("cols") = 64);

  m.def(
      "estimate_gradient_norm",
      [](std::size_t rows, std::size_t cols) {
        LinearMap map = gradient_map(rows, cols);
        map.norm_bound.reset();
        return estimate_norm(map, 3000, 1e-12, 20240001ull);
      },
      py::arg("rows"), py::arg("cols"),
      "power-iteration estimate of the discrete gradient norm");

  m.def(
      "estimate_haar_norm",
      [](std::size_t rows, std::size_t cols, int levels) {
        LinearMap map = haar_map(rows, cols, levels);
        map.norm_bound.reset();
        return estimate_norm(map, 3000, 1e-12, 20240002ull);
      },
      py::arg("rows"), py::arg("cols"), py::arg("levels") = 4);

  // --- parameter validation ---
  m.def(
      "validate_vu_params",
      [](double tau, const std::vector<double>& sigma, double eta,
         const std::vector<double>& nu, const std::vector<double>& norms_sq) {
        const VuValidation v = validate_vu_params(tau, sigma, eta, nu, norms_sq);
        py::dict out;
        out["feasible"] = v.feasible;
        out["margin"] = v.margin;
        return out;
      },
      py::arg("tau"), py::arg("sigma"), py::arg("eta"), py::arg("nu"),
      py::arg("norms_sq"));

  m.def(
      "check_accel_init",
      [](double tau0, const std::vector<double>& sigma0, double lambda,
         double gamma, double eta, const std::vector<double>& norms_sq) {
        const FeasibilityReport report = check_accel_init(
            tau0, sigma0, lambda, {gamma, std::nullopt}, eta, norms_sq);
        py::list items;
        for (const auto& item : report.items) {
          py::dict d;
          d["name"] = item.name;
          d["margin"] = item.margin;
          d["ok"] = item.ok;
          items.append(d);
        }
        py::dict out;
        out["feasible"] = report.feasible;
        out["constraints"] = items;
        return out;
      },
      py::arg("tau0"), py::arg("sigma0"), py::arg("lambda_"), py::arg("gamma"),
      py::arg("eta"), py::arg("norms_sq"));

  m.def(
      "default_tau0",
      [](const std::vector<double>& sigma0, const std::vector<double>& norms_sq,
         double gamma, double eta, double lambda) {
        return default_tau0(sigma0, norms_sq, {gamma, std::nullopt}, eta,
                            lambda);
      },
      py::arg("sigma0"), py::arg("norms_sq"), py::arg("gamma"), py::arg("eta"),
      py::arg("lambda_"));

  m.def(
      "linear_rate_params",
      [](double gamma, const std::vector<double>& delta, double eta,
         const std::vector<double>& nu, const std::vector<double>& norms_sq,
         std::optional<double> theta) {
        const LinearRateParams p =
            linear_rate_init({gamma, delta}, eta, nu, norms_sq, theta);
        py::dict out;
        out["mu"] = p.mu;
        out["tau"] = p.tau;
        out["sigma"] = p.sigma;
        out["theta"] = p.theta;
        out["omega"] = p.omega;
        return out;
      },
      py::arg("gamma"), py::arg("delta"), py::arg("eta"), py::arg("nu"),
      py::arg("norms_sq"), py::arg("theta") = py::none());

  // --- experiments ---
  m.def(
      "run_toy",
      [](const std::string& algorithm, std::size_t iterations, double z,
         bool with_forward_term, double lambda, std::optional<double> tau0,
         std::optional<double> sigma0, std::optional<double> theta, double x0,
         double v0) {
        ToyRunConfig cfg;
        cfg.algorithm = parse_algorithm(algorithm);
        cfg.iterations = iterations;
        cfg.z = z;
        cfg.with_forward_term = with_forward_term;
        cfg.lambda = lambda;
        cfg.tau0 = tau0;
        cfg.sigma0 = sigma0;
        cfg.theta = theta;
        cfg.x0 = x0;
        cfg.v0 = v0;
        ToyRunResult result = run_toy(cfg);
        py::dict out = diagnostics_to_dict(result.diagnostics);
        out["x_star"] = result.toy.solution.x[0];
        if (result.linear_params) {
          out["mu"] = result.linear_params->mu;
          out["omega"] = result.linear_params->omega;
          out["theta"] = result.linear_params->theta;
        }
        return out;
      },
      py::arg("algorithm") = "accel", py::arg("iterations") = 1000,
      py::arg("z") = 0.0, py::arg("with_forward_term") = false,
      py::arg("lambda_") = 1.0, py::arg("tau0") = py::none(),
      py::arg("sigma0") = py::none(), py::arg("theta") = py::none(),
      py::arg("x0") = 1.0, py::arg("v0") = 0.0,
      "run a solver on the built-in strongly convex scalar toy");

  m.def(
      "denoise",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>&
             noisy,
         double lambda1, double lambda2, const std::string& variant,
         const std::string& algorithm, std::size_t iterations, int levels,
         std::optional<std::size_t> reference_iters, std::optional<double> tol) {
        DenoiseConfig cfg;
        cfg.lambda1 = lambda1;
        cfg.lambda2 = lambda2;
        cfg.variant = parse_variant(variant);
        cfg.wavelet_levels = levels;

        DenoiseSolverSettings settings;
        settings.algorithm = parse_algorithm(algorithm);
        settings.iterations = iterations;
        settings.tol = tol;
        if (reference_iters) settings.reference_iters = *reference_iters;

        DenoiseSolveResult result =
            solve_denoise(to_image(noisy), cfg, settings);
        py::dict out = diagnostics_to_dict(result.diagnostics);
        out["denoised"] = to_array(result.denoised);
        out["reference"] = to_array(result.reference);
        return out;
      },
      py::arg("noisy"), py::arg("lambda1"), py::arg("lambda2") = 0.01,
      py::arg("variant") = "isotropic", py::arg("algorithm") = "accel",
      py::arg("iterations") = 100, py::arg("levels") = 4,
      py::arg("reference_iters") = py::none(), py::arg("tol") = py::none(),
      "solve the TV + wavelet denoising problem for a noisy observation");

  // --- svm ---
  py::class_<KernelModel>(m, "KernelModel")
      .def_property_readonly(
          "coefficients",
          [](const KernelModel& model) { return to_array(model.coefficients); })
      .def_readonly("kernel_sigma", &KernelModel::kernel_sigma)
      .def_readonly("feature_scale", &KernelModel::feature_scale)
      .def_property_readonly("n", [](const KernelModel& m_) { return m_.n; })
      .def(
          "decision_values",
          [](const KernelModel& model,
             const py::array_t<double,
                               py::array::c_style | py::array::forcecast>& x) {
            if (x.ndim() != 2 ||
                static_cast<std::size_t>(x.shape(1)) != model.d)
              throw ParameterError("expected an (m, d) array");
            const std::size_t rows = static_cast<std::size_t>(x.shape(0));
            Vec out(rows);
            for (std::size_t i = 0; i < rows; ++i)
              out[i] = decision_value(model, x.data() + i * model.d);
            return to_array(out);
          },
          py::arg("x"))
      .def(
          "predict",
          [](const KernelModel& model,
             const py::array_t<double,
                               py::array::c_style | py::array::forcecast>& x) {
            if (x.ndim() != 2 ||
                static_cast<std::size_t>(x.shape(1)) != model.d)
              throw ParameterError("expected an (m, d) array");
            const std::size_t rows = static_cast<std::size_t>(x.shape(0));
            Vec out(rows);
            for (std::size_t i = 0; i < rows; ++i)
              out[i] = predict(model, x.data() + i * model.d);
            return to_array(out);
          },
          py::arg("x"));

  m.def(
      "svm_train",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& X,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
         double kernel_sigma, double C, std::size_t iterations) {
        if (X.ndim() != 2) throw ParameterError("X must be (n, d)");
        Dataset data;
        data.n = static_cast<std::size_t>(X.shape(0));
        data.d = static_cast<std::size_t>(X.shape(1));
        data.features = to_vec(X);
        data.labels = to_vec(y);
        SvmConfig cfg;
        cfg.kernel_sigma = kernel_sigma;
        cfg.C = C;
        cfg.iterations = iterations;
        return train(data, cfg);
      },
      py::arg("X"), py::arg("y"), py::arg("kernel_sigma"), py::arg("C") = 1.0,
      py::arg("iterations") = 1500);

  m.def(
      "misclassification_rate",
      [](const KernelModel& model,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& X,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& y) {
        if (X.ndim() != 2) throw ParameterError("X must be (n, d)");
        Dataset data;
        data.n = static_cast<std::size_t>(X.shape(0));
        data.d = static_cast<std::size_t>(X.shape(1));
        data.features = to_vec(X);
        data.labels = to_vec(y);
        return misclassification_rate(model, data);
      },
      py::arg("model"), py::arg("X"), py::arg("y"));

  m.def(
      "gram_matrix",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& X,
         double sigma) {
        if (X.ndim() != 2) throw ParameterError("X must be (n, d)");
        const std::size_t n = static_cast<std::size_t>(X.shape(0));
        const std::size_t d = static_cast<std::size_t>(X.shape(1));
        Vec gram = gram_matrix(to_vec(X), n, d, sigma);
        py::array_t<double> out({static_cast<py::ssize_t>(n),
                                 static_cast<py::ssize_t>(n)});
        std::copy(gram.begin(), gram.end(), out.mutable_data());
        return out;
      },
      py::arg("X"), py::arg("sigma"));

  m.def(
      "min_eigenvalue",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& K,
         double tol) {
        if (K.ndim() != 2 || K.shape(0) != K.shape(1))
          throw ParameterError("K must be square");
        return min_eigenvalue(to_vec(K),
                              static_cast<std::size_t>(K.shape(0)), tol);
      },
      py::arg("K"), py::arg("tol") = 1e-8);

  m.def(
      "synthetic_blobs",
      [](std::size_t n_train, std::size_t n_test, double offset, double spread,
         std::uint64_t seed) {
        auto [train_split, test_split] =
            synthetic_blobs(n_train, n_test, offset, spread, seed);
        auto pack = [](const Dataset& d) {
          py::array_t<double> X({static_cast<py::ssize_t>(d.n),
                                 static_cast<py::ssize_t>(d.d)});
          std::copy(d.features.begin(), d.features.end(), X.mutable_data());
          return py::make_tuple(X, to_array(d.labels));
        };
        return py::make_tuple(pack(train_split), pack(test_split));
      },
      py::arg("n_train"), py::arg("n_test"), py::arg("offset") = 1.5,
      py::arg("spread") = 0.5, py::arg("seed") = 1);
}
