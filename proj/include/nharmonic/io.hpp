#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nharmonic/bubbling.hpp"
#include "nharmonic/energy.hpp"
#include "nharmonic/geometry.hpp"
#include "nharmonic/solver.hpp"

namespace nharm {

struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error("config field '" + field_name + "': " + message),
        field(std::move(field_name)) {}
};

std::string format_double(double v);  // 17 significant digits, '.' decimal

std::string mesh_to_json(const DomainMesh& mesh);
std::shared_ptr<DomainMesh> mesh_from_json(const std::string& text);

std::string field_to_json(const MapField& field);
MapField field_from_json(const std::string& text);

std::string energy_report_to_json(const EnergyReport& report);
EnergyReport energy_report_from_json(const std::string& text);

std::string bubble_report_to_json(const BubbleReport& report);
BubbleReport bubble_report_from_json(const std::string& text);

std::string ladder_to_csv(const std::vector<NeckLadderRow>& rows);
std::vector<NeckLadderRow> ladder_from_csv(const std::string& text);

std::string trace_to_csv(const std::vector<TraceRow>& rows);
std::vector<TraceRow> trace_from_csv(const std::string& text);

struct CordesRow {
  double p = 0.0;
  int nN = 0;
  double epsilon_max = 0.0;
  double contraction = 0.0;
};
std::string cordes_table_csv(const std::vector<double>& p_values,
                             const std::vector<int>& nN_values);
std::vector<CordesRow> cordes_table_from_csv(const std::string& text);

struct InitialMapSpec {
  std::string kind = "constant";  // constant | identity | degree | file
  std::vector<double> value;
  int degree = 1;
  double scale = 0.15;
  std::string path;
};

struct RunConfig {
  int version = 1;
  std::string mesh_kind = "torus2";  // torus2 | torus3 | icosphere2
  int resolution = 16;
  double side = 1.0;
  int subdivisions = 3;
  std::string target_kind = "sphere";  // sphere | flat_torus
  int ambient = 3;
  double radius = 1.0;
  std::vector<double> periods;
  InitialMapSpec initial_map;
  GrowthParams params;
  ContinuationSchedule schedule;
  SolverConfig solver;
  BubbleDiagnosticsConfig diagnostics;
  bool enable_bubble_report = true;
  std::string output_dir = "out";
};

RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

std::shared_ptr<const DomainMesh> build_mesh_from_config(const RunConfig& config);
TargetManifold build_target_from_config(const RunConfig& config);
MapField build_initial_field(const RunConfig& config,
                             std::shared_ptr<const DomainMesh> mesh,
                             const TargetManifold& target);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nharm
