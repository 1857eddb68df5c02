#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nharmonic/bubbling.hpp"
#include "nharmonic/energy.hpp"
#include "nharmonic/geometry.hpp"
#include "nharmonic/io.hpp"
#include "nharmonic/kernel.hpp"
#include "nharmonic/solver.hpp"

namespace py = pybind11;
using namespace nharm;

namespace {

GrowthParams make_params(int n, int N, double p, double delta, double s) {
  GrowthParams params;
  params.n = n;
  params.ambient = N;
  params.p = p;
  params.delta = delta;
  params.s = s;
  params.validate();
  return params;
}

MapField field_from_values(std::shared_ptr<const DomainMesh> mesh, TargetManifold target,
                           std::vector<double> values) {
  MapField f;
  f.mesh = std::move(mesh);
  f.target = std::move(target);
  f.values = std::move(values);
  f.validate(1e-9);
  return f;
}

}  // namespace

PYBIND11_MODULE(nharmonic, m) {
  m.doc() = "two-parameter approximation energies for manifold-valued maps: "
            "meshes, energies, projected descent, bubbling diagnostics";

  py::class_<GrowthParams>(m, "GrowthParams")
      .def(py::init(&make_params), py::arg("n"), py::arg("N"), py::arg("p"),
           py::arg("delta"), py::arg("s") = 1.0)
      .def_readonly("n", &GrowthParams::n)
      .def_readonly("N", &GrowthParams::ambient)
      .def_readonly("p", &GrowthParams::p)
      .def_readonly("delta", &GrowthParams::delta)
      .def_readonly("s", &GrowthParams::s)
      .def("__repr__", [](const GrowthParams& g) {
        return "GrowthParams(n=" + std::to_string(g.n) + ", N=" + std::to_string(g.ambient) +
               ", p=" + std::to_string(g.p) + ", delta=" + std::to_string(g.delta) +
               ", s=" + std::to_string(g.s) + ")";
      });

  py::class_<DomainMesh, std::shared_ptr<DomainMesh>>(m, "DomainMesh")
      .def_property_readonly("node_count", &DomainMesh::node_count)
      .def_property_readonly("cell_count", &DomainMesh::cell_count)
      .def_property_readonly("total_volume", &DomainMesh::total_volume)
      .def_property_readonly("diameter", &DomainMesh::diameter)
      .def_property_readonly("spacing", &DomainMesh::spacing)
      .def("distance", &DomainMesh::distance)
      .def("to_json", [](const DomainMesh& mesh) { return mesh_to_json(mesh); });

  m.def("build_torus_mesh",
        [](int n, int resolution, double side) {
          return std::make_shared<DomainMesh>(build_torus_mesh(n, resolution, side));
        },
        py::arg("n"), py::arg("resolution"), py::arg("side") = 1.0);
  m.def("build_icosphere_mesh",
        [](int subdivisions) {
          return std::make_shared<DomainMesh>(build_icosphere_mesh(subdivisions));
        },
        py::arg("subdivisions"));
  m.def("mesh_from_json",
        [](const std::string& text) {
          return std::shared_ptr<DomainMesh>(mesh_from_json(text));
        });

  py::class_<TargetManifold>(m, "TargetManifold")
      .def_static("sphere", &TargetManifold::sphere, py::arg("ambient"),
                  py::arg("radius") = 1.0)
      .def_static("flat_torus", &TargetManifold::flat_torus, py::arg("periods"))
      .def_readonly("ambient", &TargetManifold::ambient)
      .def("project",
           [](const TargetManifold& t, std::vector<double> x) { return t.project(x); })
      .def("tangent_project",
           [](const TargetManifold& t, std::vector<double> base, std::vector<double> v) {
             return t.tangent_project(base, v);
           })
      .def("second_fundamental_form",
           [](const TargetManifold& t, std::vector<double> base, std::vector<double> X,
              std::vector<double> Y) { return t.second_fundamental_form(base, X, Y); });

  py::class_<MapField>(m, "MapField")
      .def(py::init(&field_from_values), py::arg("mesh"), py::arg("target"),
           py::arg("values"))
      .def_property_readonly("values", [](const MapField& f) { return f.values; })
      .def_property_readonly("mesh", [](const MapField& f) { return f.mesh; })
      .def("to_json", [](const MapField& f) { return field_to_json(f); });

  m.def("field_from_json", &field_from_json);
  m.def("constant_field",
        [](std::shared_ptr<const DomainMesh> mesh, TargetManifold target,
           std::vector<double> value) {
          return constant_field(std::move(mesh), std::move(target), value);
        });
  m.def("identity_sphere_field", &identity_sphere_field);
  m.def("degree_field_icosphere", &degree_field_icosphere);
  m.def("degree_field_torus", &degree_field_torus, py::arg("mesh"), py::arg("target"),
        py::arg("degree"), py::arg("scale") = 0.15);

  // pointwise kernel
  m.def("integrand",
        [](std::vector<double> G, const GrowthParams& params) {
          return integrand(G, params);
        });
  m.def("integrand_from_norm_sq", &integrand_from_norm_sq);
  m.def("weight", &weight);
  m.def("half_weight", &half_weight);
  m.def("v_map", [](std::vector<double> X, const GrowthParams& params) {
    return v_map(X, params);
  });
  m.def("monotonicity_gap",
        [](std::vector<double> X, std::vector<double> Y, const GrowthParams& params) {
          const GapReport gap = monotonicity_gap(X, Y, params);
          return py::make_tuple(gap.pairing, gap.v_gap, gap.p_gap);
        });
  m.def("uniqueness_lower_check",
        [](std::vector<double> X, std::vector<double> Y, const GrowthParams& params) {
          const SlackCheck chk = uniqueness_lower_check(X, Y, params);
          return py::make_tuple(chk.ok, chk.slack);
        });
  m.def("uniqueness_upper_check",
        [](std::vector<double> X, std::vector<double> Y, const GrowthParams& params) {
          const SlackCheck chk = uniqueness_upper_check(X, Y, params);
          return py::make_tuple(chk.ok, chk.slack);
        });
  m.def("cordes_epsilon_max", &cordes_epsilon_max, py::arg("p"), py::arg("nN"));
  m.def("cordes_admissible", &cordes_admissible, py::arg("n"), py::arg("N"), py::arg("p"));
  m.def("contraction_factor", &contraction_factor);
  m.def("rescaling_identity_check",
        [](std::vector<double> G, double r, const GrowthParams& params) {
          return rescaling_identity_check(G, r, params);
        });
  m.attr("GAP_C0") = kGapC0;
  m.attr("GAP_C1") = kGapC1;

  // energies
  m.def("total_energy",
        [](const MapField& f, const GrowthParams& params) {
          return total_energy_value(f, params);
        });
  m.def("per_cell_energy", [](const MapField& f, const GrowthParams& params) {
    return total_energy(f, params).per_cell;
  });
  m.def("dirichlet_energy", &dirichlet_energy, py::arg("field"), py::arg("n"),
        py::arg("threads") = 1);
  m.def("euclidean_gradient",
        [](const MapField& f, const GrowthParams& params) {
          return euclidean_gradient(f, params);
        });
  m.def("tangent_gradient", [](const MapField& f, const GrowthParams& params) {
    return tangent_gradient(f, params);
  });
  m.def("entropy", [](const MapField& f, const GrowthParams& params) {
    return entropy(f, params);
  });
  m.def("local_energy", &local_energy, py::arg("field"), py::arg("params"),
        py::arg("center"), py::arg("radius"));
  m.def("el_residual_norm", [](const MapField& f, const GrowthParams& params) {
    return el_residual_norm(f, params);
  });
  m.def("degree", [](const MapField& f) {
    const DegreeResult d = degree(f);
    return py::make_tuple(d.value, d.residual);
  });
  m.def("geodesic_ball_nodes", &geodesic_ball_nodes);

  // solver
  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("max_iters", &SolverConfig::max_iters)
      .def_readwrite("grad_tol", &SolverConfig::grad_tol)
      .def_readwrite("armijo_c", &SolverConfig::armijo_c)
      .def_readwrite("backtrack", &SolverConfig::backtrack)
      .def_readwrite("initial_step", &SolverConfig::initial_step)
      .def_readwrite("min_step", &SolverConfig::min_step)
      .def_readwrite("threads", &SolverConfig::threads);

  py::enum_<SolveStatus>(m, "SolveStatus")
      .value("converged", SolveStatus::Converged)
      .value("max_iters", SolveStatus::MaxIters)
      .value("degree_jump", SolveStatus::DegreeJump);

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("initial_energy", &SolveResult::initial_energy)
      .def_readonly("final_energy", &SolveResult::final_energy)
      .def_readonly("final_residual", &SolveResult::final_residual)
      .def_readonly("energy_trace", &SolveResult::energy_trace)
      .def_readonly("degree_trace", &SolveResult::degree_trace)
      .def_readonly("status", &SolveResult::status)
      .def_property_readonly("field", [](const SolveResult& r) { return r.field; });

  m.def("minimize", &minimize, py::arg("field"), py::arg("params"), py::arg("config"));
  m.def("solve_dirichlet", &solve_dirichlet, py::arg("field"), py::arg("fixed_nodes"),
        py::arg("params"), py::arg("config"));
  m.def("minimize_in_degree_class", &minimize_in_degree_class, py::arg("degree"),
        py::arg("mesh"), py::arg("target"), py::arg("params"), py::arg("config"),
        py::arg("torus_bubble_scale") = 0.15);

  py::class_<ContinuationSchedule>(m, "ContinuationSchedule")
      .def(py::init([](std::vector<double> p_list, std::vector<double> delta_list) {
             ContinuationSchedule s;
             s.p_list = std::move(p_list);
             s.delta_list = std::move(delta_list);
             return s;
           }),
           py::arg("p_list"), py::arg("delta_list"));

  py::class_<TraceRow>(m, "TraceRow")
      .def_readonly("k", &TraceRow::k)
      .def_readonly("p", &TraceRow::p)
      .def_readonly("delta", &TraceRow::delta)
      .def_readonly("e_pdelta", &TraceRow::e_pdelta)
      .def_readonly("d_n", &TraceRow::d_n)
      .def_readonly("entropy", &TraceRow::entropy)
      .def_readonly("residual", &TraceRow::residual)
      .def_readonly("iterations", &TraceRow::iterations)
      .def_readonly("degree", &TraceRow::degree);

  py::class_<ContinuationResult>(m, "ContinuationResult")
      .def_readonly("trace", &ContinuationResult::trace)
      .def_readonly("all_converged", &ContinuationResult::all_converged)
      .def_readonly("warm_start_energy", &ContinuationResult::warm_start_energy)
      .def_property_readonly("fields", [](const ContinuationResult& r) {
        std::vector<MapField> fields;
        for (const SolveResult& s : r.steps) fields.push_back(s.field);
        return fields;
      });

  m.def("run_continuation", &run_continuation, py::arg("field"), py::arg("schedule"),
        py::arg("params"), py::arg("config"));
  m.def("trace_to_csv", &trace_to_csv);

  // bubbling diagnostics
  py::class_<BubbleDiagnosticsConfig>(m, "BubbleDiagnosticsConfig")
      .def(py::init<>())
      .def_readwrite("threshold", &BubbleDiagnosticsConfig::threshold)
      .def_readwrite("chart_multiple", &BubbleDiagnosticsConfig::chart_multiple)
      .def_readwrite("annulus_outer", &BubbleDiagnosticsConfig::annulus_outer)
      .def_readwrite("min_shell_cells", &BubbleDiagnosticsConfig::min_shell_cells)
      .def_readwrite("patch_resolution", &BubbleDiagnosticsConfig::patch_resolution);

  py::class_<BubbleReport>(m, "BubbleReport")
      .def_readonly("concentration", &BubbleReport::concentration)
      .def_readonly("node", &BubbleReport::node)
      .def_readonly("radius", &BubbleReport::radius)
      .def_readonly("radii_exponent", &BubbleReport::radii_exponent)
      .def_readonly("bubble_energies", &BubbleReport::bubble_energies)
      .def_readonly("base_energy", &BubbleReport::base_energy)
      .def_readonly("e_pdelta", &BubbleReport::e_pdelta)
      .def_readonly("d_n", &BubbleReport::d_n)
      .def_readonly("defect", &BubbleReport::defect)
      .def_readonly("multi_bubble", &BubbleReport::multi_bubble)
      .def("to_json", [](const BubbleReport& r) { return bubble_report_to_json(r); });

  m.def("max_concentration", &max_concentration);
  m.def("concentration_radius",
        [](const MapField& f, const GrowthParams& params, double threshold)
            -> py::object {
          const auto found = concentration_radius(f, params, threshold);
          if (!found) return py::none();
          return py::make_tuple(found->first, found->second);
        });
  m.def("neck_energy", &neck_energy);
  m.def("tangential_neck_energy", &tangential_neck_energy);
  m.def("hopf_balance", [](const MapField& f, const GrowthParams& params, int center,
                           double r) { return hopf_balance(f, params, center, r); });
  m.def("gradient_decay_check", &gradient_decay_check);
  m.def("energy_identity_report", &energy_identity_report, py::arg("field"),
        py::arg("params"), py::arg("config") = BubbleDiagnosticsConfig{});
  m.def("default_concentration_threshold", &default_concentration_threshold);
}
