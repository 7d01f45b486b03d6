#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tpmpm/basis.hpp"
#include "tpmpm/config.hpp"
#include "tpmpm/error.hpp"
#include "tpmpm/parallel.hpp"
#include "tpmpm/pressure.hpp"
#include "tpmpm/scenarios.hpp"
#include "tpmpm/timestepper.hpp"

namespace py = pybind11;
using namespace tpmpm;

namespace {

template <class Fn>
py::array_t<double> per_particle(const Simulation& sim, int width, Fn&& fn) {
  const auto& ps = sim.particles();
  std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(ps.size())};
  if (width > 1) shape.push_back(width);
  py::array_t<double> out(shape);
  double* data = out.mutable_data();
  for (std::size_t i = 0; i < ps.size(); ++i) fn(ps[i], data + i * width);
  return out;
}

py::tuple vec(const Vec2& v) { return py::make_tuple(v.x(), v.y()); }

py::dict stats_dict(const StepStats& s) {
  py::dict d;
  d["contact_nodes"] = s.contact_nodes;
  d["active_contacts"] = s.active_contacts;
  d["cg_iterations"] = s.cg_iterations;
  d["cg_residual"] = s.cg_residual;
  d["divergence_star"] = s.divergence_star;
  d["divergence_final"] = s.divergence_final;
  return d;
}

}  // namespace

PYBIND11_MODULE(_tpmpm, m) {
  m.doc() = "Two-phase material point solver with rigid-body contact";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<ParticleEscapedError>(m, "ParticleEscapedError", base.ptr());
  py::register_exception<UnsupportedDomainError>(m, "UnsupportedDomainError", base.ptr());
  py::register_exception<InvertedParticleError>(m, "InvertedParticleError", base.ptr());
  py::register_exception<DetectionError>(m, "DetectionError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  m.def("scenario_names", &scenario_names);
  m.def("scenario_json", [](const std::string& name) {
    return serialize_config(build_scenario(name));
  }, py::arg("name"), "JSON text of a built-in scenario");
  m.def("normalize_config", [](const std::string& text) {
    return serialize_config(parse_config(text));
  }, py::arg("text"), "Parse, validate and re-serialize a scenario");

  m.def("set_thread_count", &set_thread_count, py::arg("threads"));
  m.def("thread_count", &thread_count);

  m.def("terzaghi_pressure",
        [](double z, double t, double height, double cv, double p0, int terms) {
          TerzaghiOracle o{height, cv, p0, terms};
          return terzaghi_pressure(z, t, o);
        },
        py::arg("z"), py::arg("t"), py::arg("drainage_height"),
        py::arg("consolidation_coefficient"), py::arg("initial_pressure"),
        py::arg("terms") = 100);
  m.def("terzaghi_average_consolidation", &terzaghi_average_consolidation,
        py::arg("time_factor"), py::arg("terms") = 100);
  m.def("pressure_laplacian_coefficient", &pressure_laplacian_coefficient,
        py::arg("permeability"), py::arg("porosity"), py::arg("water_density"),
        py::arg("mixture_density"), py::arg("dt"),
        py::arg("gravity") = kStandardGravity);
  m.def("gimp_1d", [](double xi, double h, double l) {
    double w = 0.0, dw = 0.0;
    detail::gimp_1d(xi, h, l, w, dw);
    return py::make_tuple(w, dw);
  }, py::arg("xi"), py::arg("h"), py::arg("half_width"));

  py::class_<Simulation>(m, "Simulation")
      .def(py::init([](const std::string& text) {
             return std::make_unique<Simulation>(parse_config(text));
           }),
           py::arg("config_json"))
      .def("step", [](Simulation& s, int n) {
             for (int i = 0; i < n; ++i) s.step();
           }, py::arg("n") = 1, py::call_guard<py::gil_scoped_release>())
      .def_property_readonly("time", &Simulation::time)
      .def_property_readonly("steps_taken", &Simulation::steps_taken)
      .def_property_readonly("warnings", &Simulation::warnings)
      .def("explicit_stable_dt", &Simulation::explicit_stable_dt)
      .def_property_readonly("first_contact_time", &Simulation::first_contact_time)
      .def_property_readonly("rigid_velocity_at_contact",
                             [](const Simulation& s) -> py::object {
                               const auto v = s.rigid_velocity_at_contact();
                               return v ? py::object(vec(*v)) : py::none();
                             })
      .def_property_readonly("last_stats",
                             [](const Simulation& s) { return stats_dict(s.last_stats()); })
      .def_property_readonly("num_particles",
                             [](const Simulation& s) { return s.particles().size(); })
      .def("positions", [](const Simulation& s) {
        return per_particle(s, 2, [](const TwoPhaseParticle& p, double* d) {
          d[0] = p.position.x();
          d[1] = p.position.y();
        });
      })
      .def("velocities", [](const Simulation& s) {
        return per_particle(s, 2, [](const TwoPhaseParticle& p, double* d) {
          d[0] = p.velocity.x();
          d[1] = p.velocity.y();
        });
      })
      .def("pore_pressure", [](const Simulation& s) {
        return per_particle(s, 1, [](const TwoPhaseParticle& p, double* d) {
          d[0] = p.pore_pressure;
        });
      })
      .def("effective_stress", [](const Simulation& s) {
        return per_particle(s, 4, [](const TwoPhaseParticle& p, double* d) {
          d[0] = p.effective_stress.xx;
          d[1] = p.effective_stress.yy;
          d[2] = p.effective_stress.xy;
          d[3] = p.effective_stress.zz;
        });
      }, "columns xx, yy, xy, zz; tension positive")
      .def("plastic_strain", [](const Simulation& s) {
        return per_particle(s, 1, [](const TwoPhaseParticle& p, double* d) {
          d[0] = p.plastic_strain.equivalent();
        });
      })
      .def("solid_mass", [](const Simulation& s) {
        return per_particle(s, 1, [](const TwoPhaseParticle& p, double* d) {
          d[0] = p.solid_mass();
        });
      })
      .def("particle_field", [](const Simulation& s, std::size_t index,
                                const std::string& field) {
        return particle_field(s.particles().at(index), field);
      }, py::arg("index"), py::arg("field"))
      .def("rigid_state", [](const Simulation& s) -> py::object {
        if (!s.rigid()) return py::none();
        const auto& b = *s.rigid();
        py::dict d;
        d["mass"] = b.mass;
        d["velocity"] = vec(b.velocity);
        d["acceleration"] = vec(b.acceleration);
        d["displacement"] = vec(b.displacement);
        d["traction"] = b.traction(s.time());
        return d;
      });

  m.def("run",
        [](const std::string& text, const std::string& output_dir) {
          const auto config = parse_config(text);
          RunResult r;
          {
            py::gil_scoped_release release;
            r = run(config, {output_dir, {}});
          }
          py::list probes;
          for (const auto& p : r.probes)
            probes.append(py::make_tuple(p.time, p.probe, p.field, p.value));
          py::dict d;
          d["steps"] = r.steps;
          d["probes"] = probes;
          d["snapshot_files"] = r.snapshot_files;
          d["first_contact_time"] = r.first_contact_time;
          return d;
        },
        py::arg("config_json"), py::arg("output_dir") = "");
}
