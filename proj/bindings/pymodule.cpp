#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "heatquad/annealer.hpp"
#include "heatquad/baselines.hpp"
#include "heatquad/energy.hpp"
#include "heatquad/eval.hpp"
#include "heatquad/pointset_io.hpp"
#include "heatquad/weights.hpp"

namespace py = pybind11;
using namespace heatquad;

namespace {

py::array_t<double> coords_array(const PointSet& ps) {
  const int dim = ps.manifold.ambient_dim();
  py::array_t<double> out({ps.n, dim});
  std::copy(ps.coords.begin(), ps.coords.end(), out.mutable_data());
  return out;
}

py::object weights_array(const PointSet& ps) {
  if (!ps.has_weights()) return py::none();
  py::array_t<double> out(ps.n);
  std::copy(ps.weights.begin(), ps.weights.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(py::array_t<double, py::array::c_style |
                                                       py::array::forcecast>
                                  arr) {
  return {arr.data(), arr.data() + arr.size()};
}

EnergySpec make_energy(const ManifoldSpec& m, int n, const std::string& kind,
                       std::optional<double> t, double theta, double s) {
  EnergySpec e;
  if (kind == "gaussian") {
    e = EnergySpec::gaussian(t && *t > 0.0 ? *t
                                           : default_bandwidth(n, m.dim, theta));
  } else if (kind == "riesz") {
    e = EnergySpec::riesz(s);
  } else {
    throw std::invalid_argument("energy kind must be 'gaussian' or 'riesz'");
  }
  return e;
}

}  // namespace

PYBIND11_MODULE(_heatquad, m) {
  m.doc() = "Quadrature point sets on compact manifolds via heat-kernel "
            "energy minimization";

  py::class_<ManifoldSpec>(m, "ManifoldSpec")
      .def_static("torus", &ManifoldSpec::torus, py::arg("d"))
      .def_static("sphere", &ManifoldSpec::sphere)
      .def_static("dented_sphere", &ManifoldSpec::dented_sphere,
                  py::arg("alpha"))
      .def_static("compact_hyperboloid", &ManifoldSpec::compact_hyperboloid,
                  py::arg("r") = 0.8)
      .def_readonly("dim", &ManifoldSpec::dim)
      .def_readonly("alpha", &ManifoldSpec::alpha)
      .def_readonly("r", &ManifoldSpec::r)
      .def_property_readonly("ambient_dim", &ManifoldSpec::ambient_dim)
      .def_property_readonly(
          "kind", [](const ManifoldSpec& s) { return manifold_name(s.kind); })
      .def("__repr__", [](const ManifoldSpec& s) {
        return "ManifoldSpec(" + manifold_name(s.kind) +
               ", d=" + std::to_string(s.dim) + ")";
      });

  py::class_<PointSet>(m, "PointSet")
      .def_property_readonly("n", [](const PointSet& ps) { return ps.n; })
      .def_readonly("manifold", &PointSet::manifold)
      .def_property_readonly("coords", &coords_array)
      .def_property_readonly("weights", &weights_array)
      .def_property_readonly("meta",
                             [](const PointSet& ps) {
                               py::dict d;
                               for (const auto& [k, v] : ps.meta)
                                 d[py::str(k)] = v;
                               return d;
                             })
      .def("write", [](const PointSet& ps,
                       const std::string& path) { write_point_set(ps, path); },
           py::arg("path"))
      .def_static("read", &read_point_set, py::arg("path"))
      .def("__repr__", [](const PointSet& ps) {
        return "PointSet(" + manifold_name(ps.manifold.kind) +
               ", n=" + std::to_string(ps.n) +
               (ps.has_weights() ? ", weighted)" : ")");
      });

  // generators
  m.def("halton", &halton, py::arg("n"), py::arg("d"));
  m.def("sobol", &sobol, py::arg("n"), py::arg("d"),
        py::arg("scramble_seed") = std::nullopt);
  m.def("fibonacci_lattice", &fibonacci_lattice, py::arg("fib_index"));
  m.def("fibonacci_index_of", &fibonacci_index_of, py::arg("n"));
  m.def("korobov_lattice", &korobov_lattice, py::arg("n"), py::arg("d"),
        py::arg("a") = std::nullopt);
  m.def("lhs", &lhs, py::arg("n"), py::arg("d"), py::arg("seed") = 0);
  m.def("uniform_random", &uniform_random, py::arg("n"), py::arg("manifold"),
        py::arg("seed") = 0);
  m.def("spherical_fibonacci", &spherical_fibonacci, py::arg("n"));
  m.def("load_spherical_design", &load_spherical_design, py::arg("path"));

  // geometry
  m.def("constraint", [](const ManifoldSpec& mf, std::vector<double> x) {
    return constraint(mf, x);
  });
  m.def("constraint_grad", [](const ManifoldSpec& mf, std::vector<double> x) {
    return constraint_grad(mf, x);
  });
  m.def("hyperboloid_to_disk", &hyperboloid_to_disk, py::arg("x"));
  m.def("disk_to_hyperboloid", &disk_to_hyperboloid, py::arg("u"));
  m.def("dented_sphere_lift", &dented_sphere_lift, py::arg("x"),
        py::arg("alpha"));
  m.def("vol_normalizer", &vol_normalizer, py::arg("manifold"));

  // energies
  m.def("gaussian_energy", &gaussian_energy, py::arg("ps"), py::arg("t"));
  m.def("weighted_gaussian_energy", &weighted_gaussian_energy, py::arg("ps"),
        py::arg("t"));
  m.def("riesz_energy", &riesz_energy, py::arg("ps"), py::arg("s"));
  m.def("gaussian_energy_grad",
        [](const PointSet& ps, double t) {
          auto g = gaussian_energy_grad(ps, t);
          py::array_t<double> out({ps.n, ps.manifold.ambient_dim()});
          std::copy(g.begin(), g.end(), out.mutable_data());
          return out;
        },
        py::arg("ps"), py::arg("t"));
  m.def("riesz_energy_grad",
        [](const PointSet& ps, double s) {
          auto g = riesz_energy_grad(ps, s);
          py::array_t<double> out({ps.n, ps.manifold.ambient_dim()});
          std::copy(g.begin(), g.end(), out.mutable_data());
          return out;
        },
        py::arg("ps"), py::arg("s"));
  m.def("default_bandwidth", &default_bandwidth, py::arg("n"), py::arg("d"),
        py::arg("theta") = 1.0);

  // weights
  m.def("solve_weights",
        [](PointSet& ps, std::optional<double> t, double theta, bool attach) {
          const double bw =
              t && *t > 0.0 ? *t
                            : default_bandwidth(ps.n, ps.manifold.dim, theta);
          WeightSolveInfo info;
          auto w = solve_weights(ps, bw, &info);
          if (attach) ps.weights = w;
          py::array_t<double> out(static_cast<py::ssize_t>(w.size()));
          std::copy(w.begin(), w.end(), out.mutable_data());
          py::dict d;
          d["t"] = bw;
          d["kkt_residual"] = info.kkt_residual;
          d["min_weight"] = info.min_weight;
          d["cond_estimate"] = info.cond_estimate;
          d["jittered"] = info.jittered;
          d["has_negative"] = info.has_negative;
          d["factorization"] = info.factorization;
          return py::make_tuple(out, d);
        },
        py::arg("ps"), py::arg("t") = std::nullopt, py::arg("theta") = 1.0,
        py::arg("attach") = true);

  // annealer
  py::class_<AnnealResult>(m, "AnnealResult")
      .def_readonly("best", &AnnealResult::best)
      .def_readonly("best_energy", &AnnealResult::best_energy)
      .def_readonly("accepted_step", &AnnealResult::accepted_step)
      .def_readonly("tail_rel_change", &AnnealResult::tail_rel_change)
      .def_readonly("resolved_dt", &AnnealResult::resolved_dt)
      .def_readonly("resolved_cool_c", &AnnealResult::resolved_cool_c)
      .def_property_readonly("trace", [](const AnnealResult& r) {
        py::array_t<double> out(
            {static_cast<py::ssize_t>(r.trace.size()), py::ssize_t(4)});
        double* p = out.mutable_data();
        for (const auto& row : r.trace) {
          *p++ = static_cast<double>(row.step);
          *p++ = row.time;
          *p++ = row.beta_inv;
          *p++ = row.energy;
        }
        return out;
      });

  m.def("cooling_schedule", &cooling_schedule, py::arg("c"), py::arg("time"));
  m.def("anneal",
        [](const ManifoldSpec& mf, int n, const std::string& kind,
           std::optional<double> t, double theta, double s, double dt,
           std::int64_t steps, double gamma, double cool_c,
           std::uint64_t seed, std::int64_t trace_every,
           std::optional<std::string> init, const std::string& init_path) {
          EnergySpec e = make_energy(mf, n, kind, t, theta, s);
          AnnealConfig cfg;
          cfg.dt = dt;
          cfg.steps = steps;
          cfg.gamma = gamma;
          cfg.cool_c = cool_c;
          cfg.seed = seed;
          cfg.trace_every = trace_every;
          cfg.init = init ? init_from_name(*init) : default_init_for(mf);
          cfg.init_path = init_path;
          return anneal(mf, n, e, cfg);
        },
        py::arg("manifold"), py::arg("n"), py::arg("kind") = "gaussian",
        py::arg("t") = std::nullopt, py::arg("theta") = 1.0,
        py::arg("s") = 1.0, py::arg("dt") = 0.0, py::arg("steps") = 200000,
        py::arg("gamma") = 1.0, py::arg("cool_c") = 0.0, py::arg("seed") = 0,
        py::arg("trace_every") = 1, py::arg("init") = std::nullopt,
        py::arg("init_path") = std::string(),
        py::call_guard<py::gil_scoped_release>());

  // evaluation
  py::class_<ErrorSpectrum>(m, "ErrorSpectrum")
      .def_property_readonly("lambdas",
                             [](const ErrorSpectrum& s) {
                               py::array_t<double> out(
                                   static_cast<py::ssize_t>(s.labels.size()));
                               double* p = out.mutable_data();
                               for (const auto& lab : s.labels)
                                 *p++ = lab.lambda;
                               return out;
                             })
      .def_property_readonly("labels",
                             [](const ErrorSpectrum& s) {
                               py::list out;
                               for (const auto& lab : s.labels) {
                                 if (lab.kind == ManifoldKind::Sphere)
                                   out.append(py::make_tuple(lab.l, lab.m));
                                 else
                                   out.append(py::cast(lab.k));
                               }
                               return out;
                             })
      .def_property_readonly("e_lambda",
                             [](const ErrorSpectrum& s) {
                               py::array_t<double> out(
                                   static_cast<py::ssize_t>(s.e_lambda.size()));
                               std::copy(s.e_lambda.begin(), s.e_lambda.end(),
                                         out.mutable_data());
                               return out;
                             })
      .def_property_readonly("e_cum", [](const ErrorSpectrum& s) {
        py::array_t<double> out(static_cast<py::ssize_t>(s.e_cum.size()));
        std::copy(s.e_cum.begin(), s.e_cum.end(), out.mutable_data());
        return out;
      });

  m.def("error_spectrum", &error_spectrum, py::arg("ps"), py::arg("count"),
        py::call_guard<py::gil_scoped_release>());
  m.def("torus_error", &torus_error, py::arg("ps"), py::arg("k"));
  m.def("sphere_error", &sphere_error, py::arg("ps"), py::arg("l"),
        py::arg("m"));
  m.def("sph_harm",
        [](int l, int mm, std::array<double, 3> x) { return sph_harm(l, mm, x); },
        py::arg("l"), py::arg("m"), py::arg("x"));
  m.def("ensemble_stats",
        [](const std::vector<ErrorSpectrum>& spectra) {
          const EnsembleStats st = ensemble_stats(spectra);
          py::dict d;
          const auto n = static_cast<py::ssize_t>(st.median.size());
          py::array_t<double> lam(n), med(n), lo(n), hi(n);
          for (py::ssize_t i = 0; i < n; ++i) {
            lam.mutable_data()[i] = st.labels[i].lambda;
            med.mutable_data()[i] = st.median[i];
            lo.mutable_data()[i] = st.min[i];
            hi.mutable_data()[i] = st.max[i];
          }
          d["lambda"] = lam;
          d["median"] = med;
          d["min"] = lo;
          d["max"] = hi;
          return d;
        },
        py::arg("spectra"));
}
