#include <cmath>
#include <memory>

#include "doctest.h"
#include "nharmonic/io.hpp"

using namespace nharm;

namespace {

const char* kValidConfig = R"json({
  "version": 1,
  "mesh": {"kind": "torus2", "resolution": 16, "side": 1.0},
  "target": {"kind": "sphere", "ambient": 3, "radius": 1.0},
  "initial_map": {"kind": "degree", "degree": 1, "scale": 0.2},
  "params": {"n": 2, "N": 3, "p": 2.2, "delta": 0.1, "s": 1.0},
  "schedule": {"p_list": [2.2, 2.1], "delta_list": [0.1, 0.05]},
  "solver": {"max_iters": 50, "grad_tol": 1e-3},
  "diagnostics": {"concentration_threshold": 3.7699111843077517},
  "output_dir": "out"
})json";

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("mesh json round trip") {
  for (const DomainMesh& mesh :
       {build_torus_mesh(2, 5, 1.5), build_torus_mesh(3, 3, 1.0), build_icosphere_mesh(2)}) {
    const std::string text = mesh_to_json(mesh);
    const auto back = mesh_from_json(text);
    CHECK(back->kind == mesh.kind);
    CHECK(back->node_count() == mesh.node_count());
    CHECK(back->cell_count() == mesh.cell_count());
    for (std::size_t i = 0; i < mesh.positions.size(); ++i)
      CHECK(back->positions[i] == mesh.positions[i]);
    for (std::size_t i = 0; i < mesh.volumes.size(); ++i)
      CHECK(back->volumes[i] == mesh.volumes[i]);
  }
}

TEST_CASE("field json round trip") {
  const auto mesh = std::make_shared<DomainMesh>(build_icosphere_mesh(1));
  const MapField field = identity_sphere_field(mesh, TargetManifold::sphere(3));
  const std::string text = field_to_json(field);
  const MapField back = field_from_json(text);
  CHECK(back.target.kind == TargetKind::Sphere);
  CHECK(back.values.size() == field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i)
    CHECK(back.values[i] == field.values[i]);
}

TEST_CASE("energy report round trip") {
  EnergyReport rep;
  rep.total = 1.0 / 3.0;
  rep.per_cell = {0.1, 1.0 / 7.0, 4e-17};
  const EnergyReport back = energy_report_from_json(energy_report_to_json(rep));
  CHECK(back.total == rep.total);
  REQUIRE(back.per_cell.size() == rep.per_cell.size());
  for (std::size_t i = 0; i < rep.per_cell.size(); ++i)
    CHECK(back.per_cell[i] == rep.per_cell[i]);
}

TEST_CASE("trace csv round trip") {
  std::vector<TraceRow> rows(2);
  rows[0].k = 0;
  rows[0].p = 2.2;
  rows[0].delta = 0.1;
  rows[0].e_pdelta = 12.566370614359172;
  rows[0].d_n = 4.0 * std::acos(-1.0);
  rows[0].entropy = 1.0 / 3.0;
  rows[0].residual = 3.5e-4;
  rows[0].iterations = 17;
  rows[0].degree = 1;
  rows[1].k = 1;
  rows[1].p = 2.1;
  rows[1].delta = 0.05;
  rows[1].e_pdelta = 12.0;
  rows[1].d_n = 11.9;
  rows[1].entropy = 0.2;
  rows[1].residual = 1e-5;
  rows[1].iterations = 3;
  // no degree for the second row

  const std::string csv = trace_to_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "k,p,delta,E_pdelta,D_n,entropy,residual,iterations,degree");
  const auto back = trace_from_csv(csv);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].k == rows[i].k);
    CHECK(back[i].p == rows[i].p);
    CHECK(back[i].delta == rows[i].delta);
    CHECK(back[i].e_pdelta == rows[i].e_pdelta);
    CHECK(back[i].d_n == rows[i].d_n);
    CHECK(back[i].entropy == rows[i].entropy);
    CHECK(back[i].residual == rows[i].residual);
    CHECK(back[i].iterations == rows[i].iterations);
    CHECK(back[i].degree == rows[i].degree);
  }
}

TEST_CASE("cordes csv") {
  {
    const std::string csv = cordes_table_csv({}, {});
    CHECK(csv == "p,nN,epsilon_max,contraction_factor\n");
    CHECK(cordes_table_from_csv(csv).empty());
  }
  const std::string csv = cordes_table_csv({2.0, 3.5}, {6});
  const auto rows = cordes_table_from_csv(csv);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].p == 2.0);
  CHECK(rows[0].nN == 6);
  CHECK(rows[0].epsilon_max == 1.0);
  CHECK(rows[0].contraction == 0.0);
  CHECK(rows[1].epsilon_max == 0.0);
}

TEST_CASE("bubble report round trip") {
  BubbleReport rep;
  rep.concentration = true;
  rep.node = 42;
  rep.point = {0.5, 0.25};
  rep.radius = 0.03125;
  rep.radii_exponent = 1.01;
  rep.bubble_energies = {12.3};
  rep.base_energy = 0.4;
  rep.e_pdelta = 13.0;
  rep.d_n = 12.8;
  rep.defect = 0.3;
  rep.multi_bubble = false;
  NeckLadderRow row;
  row.r_in = 0.0625;
  row.r_out = 0.125;
  row.neck_energy = 0.2;
  row.tangential_energy = 0.1;
  row.hopf_lhs = 0.9;
  row.hopf_rhs = 1.0;
  row.hopf_valid = true;
  rep.ladder.push_back(row);

  const BubbleReport back = bubble_report_from_json(bubble_report_to_json(rep));
  CHECK(back.concentration == rep.concentration);
  CHECK(back.node == rep.node);
  CHECK(back.point == rep.point);
  CHECK(back.radius == rep.radius);
  CHECK(back.radii_exponent == rep.radii_exponent);
  CHECK(back.bubble_energies == rep.bubble_energies);
  CHECK(back.base_energy == rep.base_energy);
  CHECK(back.e_pdelta == rep.e_pdelta);
  CHECK(back.d_n == rep.d_n);
  CHECK(back.defect == rep.defect);
  REQUIRE(back.ladder.size() == 1);
  CHECK(back.ladder[0].r_in == row.r_in);
  CHECK(back.ladder[0].hopf_rhs == row.hopf_rhs);
  CHECK(back.ladder[0].hopf_valid == row.hopf_valid);
}

TEST_CASE("ladder csv round trip") {
  std::vector<NeckLadderRow> rows(2);
  rows[0].r_in = 0.03125;
  rows[0].r_out = 0.0625;
  rows[0].neck_energy = 1.0 / 3.0;
  rows[0].tangential_energy = 0.125;
  rows[0].hopf_lhs = 2.2e-3;
  rows[0].hopf_rhs = 3.1e-3;
  rows[0].hopf_valid = true;
  rows[1].r_in = 0.0625;
  rows[1].r_out = 0.125;
  rows[1].neck_energy = 0.2;
  rows[1].tangential_energy = 0.05;
  rows[1].hopf_valid = false;  // under-resolved shell

  const std::string csv = ladder_to_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "r_in,r_out,neck_energy,tangential_energy,hopf_lhs,hopf_rhs");
  const auto back = ladder_from_csv(csv);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].r_in == rows[i].r_in);
    CHECK(back[i].r_out == rows[i].r_out);
    CHECK(back[i].neck_energy == rows[i].neck_energy);
    CHECK(back[i].tangential_energy == rows[i].tangential_energy);
    CHECK(back[i].hopf_valid == rows[i].hopf_valid);
  }
  CHECK(back[0].hopf_lhs == rows[0].hopf_lhs);
  CHECK(back[0].hopf_rhs == rows[0].hopf_rhs);
}

TEST_CASE("run config parsing and named errors") {
  const RunConfig cfg = run_config_from_json(kValidConfig);
  CHECK(cfg.mesh_kind == "torus2");
  CHECK(cfg.resolution == 16);
  CHECK(cfg.params.p == 2.2);
  CHECK(cfg.schedule.p_list.size() == 2);
  CHECK(cfg.solver.max_iters == 50);
  CHECK(cfg.diagnostics.threshold == doctest::Approx(3.7699111843077517));

  // Missing field is reported by name.
  {
    const std::string broken = replace_once(kValidConfig, "\"params\"", "\"parms\"");
    try {
      run_config_from_json(broken);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field == "params");
    }
  }
  // Schedule violations are named.
  {
    const std::string broken = replace_once(kValidConfig, "[2.2, 2.1]", "[2.1, 2.2]");
    try {
      run_config_from_json(broken);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field == "schedule");
    }
  }
  // Parameter range violations are named.
  {
    const std::string broken = replace_once(kValidConfig, "\"delta\": 0.1", "\"delta\": 1.5");
    try {
      run_config_from_json(broken);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field == "params");
    }
  }
  // Unknown mesh kind.
  {
    const std::string broken = replace_once(kValidConfig, "torus2", "moebius");
    try {
      run_config_from_json(broken);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.field == "mesh.kind");
    }
  }
}

TEST_CASE("missing field file is a named error") {
  const std::string config = replace_once(
      kValidConfig, R"({"kind": "degree", "degree": 1, "scale": 0.2})",
      R"({"kind": "file", "path": "/nonexistent/field.json"})");
  const RunConfig cfg = run_config_from_json(config);
  auto mesh = build_mesh_from_config(cfg);
  const TargetManifold target = build_target_from_config(cfg);
  CHECK_THROWS_WITH_AS(build_initial_field(cfg, mesh, target),
                       doctest::Contains("/nonexistent/field.json"),
                       std::runtime_error);
}

TEST_CASE("format_double round trips") {
  for (double v : {1.0 / 3.0, 4.0 * std::acos(-1.0), 1e-300, 12345.678901234567}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}
