#include "nharmonic/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace nharm {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

namespace {

std::string kind_name(MeshKind kind) {
  switch (kind) {
    case MeshKind::Torus2: return "torus2";
    case MeshKind::Torus3: return "torus3";
    case MeshKind::Icosphere2: return "icosphere2";
  }
  return "?";
}

json target_to_json_obj(const TargetManifold& t) {
  json j;
  if (t.kind == TargetKind::Sphere) {
    j["kind"] = "sphere";
    j["ambient"] = t.ambient;
    j["radius"] = t.radius;
  } else {
    j["kind"] = "flat_torus";
    j["periods"] = t.periods;
  }
  return j;
}

TargetManifold target_from_json_obj(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sphere")
    return TargetManifold::sphere(j.at("ambient").get<int>(), j.at("radius").get<double>());
  if (kind == "flat_torus")
    return TargetManifold::flat_torus(j.at("periods").get<std::vector<double>>());
  throw ConfigError("target.kind", "unknown target kind '" + kind + "'");
}

json mesh_to_json_obj(const DomainMesh& mesh) {
  json j;
  j["kind"] = kind_name(mesh.kind);
  if (mesh.kind == MeshKind::Icosphere2) {
    j["subdivisions"] = mesh.resolution;
  } else {
    j["resolution"] = mesh.resolution;
    j["side"] = mesh.side;
  }
  j["nodes"] = mesh.positions;
  json cells = json::array();
  for (const Cell& c : mesh.cells) {
    json cell = json::array();
    for (int k = 0; k < c.node_count; ++k) cell.push_back(c.nodes[k]);
    cells.push_back(cell);
  }
  j["cells"] = cells;
  return j;
}

std::shared_ptr<DomainMesh> mesh_from_json_obj(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  std::shared_ptr<DomainMesh> mesh;
  if (kind == "torus2")
    mesh = std::make_shared<DomainMesh>(
        build_torus_mesh(2, j.at("resolution").get<int>(), j.at("side").get<double>()));
  else if (kind == "torus3")
    mesh = std::make_shared<DomainMesh>(
        build_torus_mesh(3, j.at("resolution").get<int>(), j.at("side").get<double>()));
  else if (kind == "icosphere2")
    mesh = std::make_shared<DomainMesh>(
        build_icosphere_mesh(j.at("subdivisions").get<int>()));
  else
    throw ConfigError("mesh.kind", "unknown mesh kind '" + kind + "'");

  if (j.contains("nodes")) {
    const auto nodes = j.at("nodes").get<std::vector<double>>();
    if (nodes.size() != mesh->positions.size())
      throw ConfigError("mesh.nodes", "node array does not match the declared mesh");
  }
  if (j.contains("cells")) {
    if (j.at("cells").size() != std::size_t(mesh->cell_count()))
      throw ConfigError("mesh.cells", "cell array does not match the declared mesh");
  }
  return mesh;
}

}  // namespace

std::string mesh_to_json(const DomainMesh& mesh) { return mesh_to_json_obj(mesh).dump(); }

std::shared_ptr<DomainMesh> mesh_from_json(const std::string& text) {
  return mesh_from_json_obj(json::parse(text));
}

std::string field_to_json(const MapField& field) {
  json j;
  j["mesh"] = mesh_to_json_obj(*field.mesh);
  j["target"] = target_to_json_obj(field.target);
  j["values"] = field.values;
  return j.dump();
}

MapField field_from_json(const std::string& text) {
  const json j = json::parse(text);
  MapField f;
  f.mesh = mesh_from_json_obj(j.at("mesh"));
  f.target = target_from_json_obj(j.at("target"));
  f.values = j.at("values").get<std::vector<double>>();
  if (f.values.size() != std::size_t(f.mesh->node_count()) * std::size_t(f.target.ambient))
    throw ConfigError("values", "value array length does not match mesh and target");
  return f;
}

std::string energy_report_to_json(const EnergyReport& report) {
  json j;
  j["total"] = report.total;
  j["per_cell"] = report.per_cell;
  return j.dump();
}

EnergyReport energy_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  EnergyReport rep;
  rep.total = j.at("total").get<double>();
  rep.per_cell = j.at("per_cell").get<std::vector<double>>();
  return rep;
}

std::string bubble_report_to_json(const BubbleReport& report) {
  json j;
  j["concentration"] = report.concentration;
  j["node"] = report.node;
  j["point"] = report.point;
  j["radius"] = report.radius;
  j["radii_exponent"] = report.radii_exponent;
  j["bubble_energies"] = report.bubble_energies;
  j["base_energy"] = report.base_energy;
  j["e_pdelta"] = report.e_pdelta;
  j["d_n"] = report.d_n;
  j["defect"] = report.defect;
  j["multi_bubble"] = report.multi_bubble;
  json ladder = json::array();
  for (const NeckLadderRow& row : report.ladder) {
    json r;
    r["r_in"] = row.r_in;
    r["r_out"] = row.r_out;
    r["neck_energy"] = row.neck_energy;
    r["tangential_energy"] = row.tangential_energy;
    r["hopf_lhs"] = row.hopf_lhs;
    r["hopf_rhs"] = row.hopf_rhs;
    r["hopf_valid"] = row.hopf_valid;
    ladder.push_back(r);
  }
  j["ladder"] = ladder;
  return j.dump();
}

BubbleReport bubble_report_from_json(const std::string& text) {
  const json j = json::parse(text);
  BubbleReport rep;
  rep.concentration = j.at("concentration").get<bool>();
  rep.node = j.at("node").get<int>();
  rep.point = j.at("point").get<std::vector<double>>();
  rep.radius = j.at("radius").get<double>();
  rep.radii_exponent = j.at("radii_exponent").get<double>();
  rep.bubble_energies = j.at("bubble_energies").get<std::vector<double>>();
  rep.base_energy = j.at("base_energy").get<double>();
  rep.e_pdelta = j.at("e_pdelta").get<double>();
  rep.d_n = j.at("d_n").get<double>();
  rep.defect = j.at("defect").get<double>();
  rep.multi_bubble = j.at("multi_bubble").get<bool>();
  for (const json& r : j.at("ladder")) {
    NeckLadderRow row;
    row.r_in = r.at("r_in").get<double>();
    row.r_out = r.at("r_out").get<double>();
    row.neck_energy = r.at("neck_energy").get<double>();
    row.tangential_energy = r.at("tangential_energy").get<double>();
    row.hopf_lhs = r.at("hopf_lhs").get<double>();
    row.hopf_rhs = r.at("hopf_rhs").get<double>();
    row.hopf_valid = r.at("hopf_valid").get<bool>();
    rep.ladder.push_back(row);
  }
  return rep;
}

std::string ladder_to_csv(const std::vector<NeckLadderRow>& rows) {
  std::ostringstream ss;
  ss << "r_in,r_out,neck_energy,tangential_energy,hopf_lhs,hopf_rhs\n";
  for (const NeckLadderRow& r : rows) {
    ss << format_double(r.r_in) << ',' << format_double(r.r_out) << ','
       << format_double(r.neck_energy) << ',' << format_double(r.tangential_energy) << ',';
    if (r.hopf_valid) ss << format_double(r.hopf_lhs) << ',' << format_double(r.hopf_rhs);
    else ss << ',';
    ss << '\n';
  }
  return ss.str();
}

std::string trace_to_csv(const std::vector<TraceRow>& rows) {
  std::ostringstream ss;
  ss << "k,p,delta,E_pdelta,D_n,entropy,residual,iterations,degree\n";
  for (const TraceRow& r : rows) {
    ss << r.k << ',' << format_double(r.p) << ',' << format_double(r.delta) << ','
       << format_double(r.e_pdelta) << ',' << format_double(r.d_n) << ','
       << format_double(r.entropy) << ',' << format_double(r.residual) << ','
       << r.iterations << ',';
    if (r.degree.has_value()) ss << *r.degree;
    ss << '\n';
  }
  return ss.str();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<NeckLadderRow> ladder_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("ladder csv: missing header");
  std::vector<NeckLadderRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split_line(line);
    if (parts.size() != 6) throw std::runtime_error("ladder csv: bad row '" + line + "'");
    NeckLadderRow r;
    r.r_in = std::stod(parts[0]);
    r.r_out = std::stod(parts[1]);
    r.neck_energy = std::stod(parts[2]);
    r.tangential_energy = std::stod(parts[3]);
    r.hopf_valid = !parts[4].empty();
    if (r.hopf_valid) {
      r.hopf_lhs = std::stod(parts[4]);
      r.hopf_rhs = std::stod(parts[5]);
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<TraceRow> trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace csv: missing header");
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split_line(line);
    if (parts.size() != 9) throw std::runtime_error("trace csv: bad row '" + line + "'");
    TraceRow r;
    r.k = std::stoi(parts[0]);
    r.p = std::stod(parts[1]);
    r.delta = std::stod(parts[2]);
    r.e_pdelta = std::stod(parts[3]);
    r.d_n = std::stod(parts[4]);
    r.entropy = std::stod(parts[5]);
    r.residual = std::stod(parts[6]);
    r.iterations = std::stoi(parts[7]);
    if (!parts[8].empty()) r.degree = std::stoi(parts[8]);
    rows.push_back(r);
  }
  return rows;
}

std::string cordes_table_csv(const std::vector<double>& p_values,
                             const std::vector<int>& nN_values) {
  std::ostringstream ss;
  ss << "p,nN,epsilon_max,contraction_factor\n";
  for (double p : p_values)
    for (int m : nN_values) {
      const double eps = cordes_epsilon_max(p, m);
      const double factor = eps > 0.0 ? contraction_factor(eps) : 1.0;
      ss << format_double(p) << ',' << m << ',' << format_double(eps) << ','
         << format_double(factor) << '\n';
    }
  return ss.str();
}

std::vector<CordesRow> cordes_table_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("cordes csv: missing header");
  std::vector<CordesRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split_line(line);
    if (parts.size() != 4) throw std::runtime_error("cordes csv: bad row '" + line + "'");
    CordesRow r;
    r.p = std::stod(parts[0]);
    r.nN = std::stoi(parts[1]);
    r.epsilon_max = std::stod(parts[2]);
    r.contraction = std::stod(parts[3]);
    rows.push_back(r);
  }
  return rows;
}

namespace {

template <typename T>
T require(const json& j, const std::string& field) {
  if (!j.contains(field)) throw ConfigError(field, "missing");
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

template <typename T>
T optional_or(const json& j, const std::string& field, T fallback) {
  if (!j.contains(field)) return fallback;
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(field, "has the wrong type");
  }
}

}  // namespace

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("invalid json: ") + e.what());
  }
  RunConfig cfg;
  cfg.version = require<int>(j, "version");
  if (cfg.version != 1) throw ConfigError("version", "unsupported config version");

  const json mesh = require<json>(j, "mesh");
  cfg.mesh_kind = require<std::string>(mesh, "kind");
  if (cfg.mesh_kind == "torus2" || cfg.mesh_kind == "torus3") {
    cfg.resolution = require<int>(mesh, "resolution");
    cfg.side = require<double>(mesh, "side");
    if (cfg.resolution < 2) throw ConfigError("mesh.resolution", "must be >= 2");
    if (cfg.side <= 0.0) throw ConfigError("mesh.side", "must be > 0");
  } else if (cfg.mesh_kind == "icosphere2") {
    cfg.subdivisions = require<int>(mesh, "subdivisions");
    if (cfg.subdivisions < 0) throw ConfigError("mesh.subdivisions", "must be >= 0");
  } else {
    throw ConfigError("mesh.kind", "unknown mesh kind '" + cfg.mesh_kind + "'");
  }

  const json target = require<json>(j, "target");
  cfg.target_kind = require<std::string>(target, "kind");
  if (cfg.target_kind == "sphere") {
    cfg.ambient = require<int>(target, "ambient");
    cfg.radius = optional_or<double>(target, "radius", 1.0);
    if (cfg.ambient < 2) throw ConfigError("target.ambient", "must be >= 2");
    if (cfg.radius <= 0.0) throw ConfigError("target.radius", "must be > 0");
  } else if (cfg.target_kind == "flat_torus") {
    cfg.periods = require<std::vector<double>>(target, "periods");
    if (cfg.periods.empty()) throw ConfigError("target.periods", "must be nonempty");
    cfg.ambient = int(cfg.periods.size());
  } else {
    throw ConfigError("target.kind", "unknown target kind '" + cfg.target_kind + "'");
  }

  const json init = require<json>(j, "initial_map");
  cfg.initial_map.kind = require<std::string>(init, "kind");
  if (cfg.initial_map.kind == "constant") {
    cfg.initial_map.value = require<std::vector<double>>(init, "value");
  } else if (cfg.initial_map.kind == "degree") {
    cfg.initial_map.degree = require<int>(init, "degree");
    cfg.initial_map.scale = optional_or<double>(init, "scale", 0.15);
  } else if (cfg.initial_map.kind == "file") {
    cfg.initial_map.path = require<std::string>(init, "path");
  } else if (cfg.initial_map.kind != "identity") {
    throw ConfigError("initial_map.kind",
                      "unknown initial map kind '" + cfg.initial_map.kind + "'");
  }

  const json params = require<json>(j, "params");
  cfg.params.n = require<int>(params, "n");
  cfg.params.ambient = require<int>(params, "N");
  cfg.params.p = require<double>(params, "p");
  cfg.params.delta = require<double>(params, "delta");
  cfg.params.s = optional_or<double>(params, "s", 1.0);
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("params", e.what());
  }

  if (j.contains("schedule")) {
    const json schedule = j.at("schedule");
    cfg.schedule.p_list = require<std::vector<double>>(schedule, "p_list");
    cfg.schedule.delta_list = require<std::vector<double>>(schedule, "delta_list");
    try {
      cfg.schedule.validate(cfg.params.n);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("schedule", e.what());
    }
  }

  if (j.contains("solver")) {
    const json solver = j.at("solver");
    cfg.solver.max_iters = optional_or<int>(solver, "max_iters", cfg.solver.max_iters);
    cfg.solver.grad_tol = optional_or<double>(solver, "grad_tol", cfg.solver.grad_tol);
    cfg.solver.armijo_c = optional_or<double>(solver, "armijo_c", cfg.solver.armijo_c);
    cfg.solver.backtrack = optional_or<double>(solver, "backtrack", cfg.solver.backtrack);
    cfg.solver.initial_step =
        optional_or<double>(solver, "initial_step", cfg.solver.initial_step);
    cfg.solver.min_step = optional_or<double>(solver, "min_step", cfg.solver.min_step);
    try {
      cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("solver", e.what());
    }
  }

  if (j.contains("diagnostics")) {
    const json diag = j.at("diagnostics");
    cfg.diagnostics.threshold =
        optional_or<double>(diag, "concentration_threshold", cfg.diagnostics.threshold);
    cfg.diagnostics.chart_multiple =
        optional_or<double>(diag, "chart_multiple", cfg.diagnostics.chart_multiple);
    cfg.diagnostics.annulus_outer =
        optional_or<double>(diag, "annulus_outer", cfg.diagnostics.annulus_outer);
    cfg.diagnostics.min_shell_cells =
        optional_or<int>(diag, "min_shell_cells", cfg.diagnostics.min_shell_cells);
    cfg.diagnostics.patch_resolution =
        optional_or<int>(diag, "patch_resolution", cfg.diagnostics.patch_resolution);
    cfg.enable_bubble_report =
        optional_or<bool>(diag, "enable_bubble_report", cfg.enable_bubble_report);
  }

  cfg.output_dir = optional_or<std::string>(j, "output_dir", cfg.output_dir);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(read_text_file(path));
}

std::shared_ptr<const DomainMesh> build_mesh_from_config(const RunConfig& config) {
  if (config.mesh_kind == "torus2")
    return std::make_shared<DomainMesh>(build_torus_mesh(2, config.resolution, config.side));
  if (config.mesh_kind == "torus3")
    return std::make_shared<DomainMesh>(build_torus_mesh(3, config.resolution, config.side));
  return std::make_shared<DomainMesh>(build_icosphere_mesh(config.subdivisions));
}

TargetManifold build_target_from_config(const RunConfig& config) {
  if (config.target_kind == "sphere")
    return TargetManifold::sphere(config.ambient, config.radius);
  return TargetManifold::flat_torus(config.periods);
}

MapField build_initial_field(const RunConfig& config,
                             std::shared_ptr<const DomainMesh> mesh,
                             const TargetManifold& target) {
  const InitialMapSpec& init = config.initial_map;
  if (init.kind == "constant") {
    if (int(init.value.size()) != target.ambient)
      throw ConfigError("initial_map.value", "length must match the target ambient dim");
    const std::vector<double> v = target.project(init.value);
    return constant_field(std::move(mesh), target, v);
  }
  if (init.kind == "identity") return identity_sphere_field(std::move(mesh), target);
  if (init.kind == "degree") {
    if (mesh->kind == MeshKind::Icosphere2)
      return degree_field_icosphere(std::move(mesh), target, init.degree);
    return degree_field_torus(std::move(mesh), target, init.degree, init.scale);
  }
  if (init.kind == "file") {
    MapField f = field_from_json(read_text_file(init.path));
    if (f.target.ambient != target.ambient)
      throw ConfigError("initial_map.path", "stored field does not match the target");
    return f;
  }
  throw ConfigError("initial_map.kind", "unknown initial map kind");
}

}  // namespace nharm
