#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nharmonic/bubbling.hpp"
#include "nharmonic/energy.hpp"
#include "nharmonic/geometry.hpp"
#include "nharmonic/io.hpp"
#include "nharmonic/kernel.hpp"
#include "nharmonic/parallel.hpp"
#include "nharmonic/solver.hpp"

namespace {

using nlohmann::json;
using namespace nharm;

// Parses "a,b,c" lists and "lo:hi:step" ranges.
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    double lo, hi, step;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
      throw std::runtime_error("bad range '" + text + "', expected lo:hi:step");
    for (double v = lo; v <= hi + 1e-12 * std::abs(step); v += step) out.push_back(v);
    return out;
  }
  std::istringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

struct CheckOutcome {
  std::string name;
  double min_slack = 1e300;
  long violations = 0;
  json first_violation;
};

int cmd_check_inequalities(long samples, unsigned long seed, const std::string& out_path,
                           int threads) {
  (void)threads;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<CheckOutcome> checks(6);
  checks[0].name = "monotonicity_chain_pairing_vs_c0_vgap";
  checks[1].name = "monotonicity_chain_c0_vgap_vs_c1_pgap";
  checks[2].name = "uniqueness_lower";
  checks[3].name = "uniqueness_upper";
  checks[4].name = "sandwich_p_integrand_ge_grad_p";
  checks[5].name = "v_norm_identity";

  auto record = [&](CheckOutcome& c, double slack, const json& sample) {
    if (slack < c.min_slack) c.min_slack = slack;
    if (slack < 0.0) {
      if (c.violations == 0) c.first_violation = sample;
      ++c.violations;
    }
  };

  for (long it = 0; it < samples; ++it) {
    GrowthParams params;
    params.n = (it % 2 == 0) ? 2 : 3;
    params.ambient = 1 + int(it % 3);
    params.p = params.n + 1e-9 + (1.0 - 2e-9) * unit(rng);
    params.delta = (it % 7 == 0) ? 0.0 : unit(rng);
    params.s = (it % 5 == 0) ? 0.0 : unit(rng);

    const int dim = params.ambient;
    auto draw_vec = [&](std::vector<double>& v) {
      v.resize(std::size_t(dim));
      const double mag = (it % 11 == 0) ? 0.0 : std::pow(10.0, -3.0 + 4.0 * unit(rng));
      double norm_sq = 0.0;
      for (double& x : v) {
        x = 2.0 * unit(rng) - 1.0;
        norm_sq += x * x;
      }
      const double norm = std::sqrt(norm_sq);
      for (double& x : v) x = norm > 0.0 ? x * mag / norm : 0.0;
    };
    std::vector<double> X, Y;
    draw_vec(X);
    draw_vec(Y);

    json sample = {{"n", params.n},     {"N", params.ambient}, {"p", params.p},
                   {"delta", params.delta}, {"s", params.s},   {"X", X},
                   {"Y", Y},            {"index", it}};

    const GapReport gap = monotonicity_gap(X, Y, params);
    const double tol = 1e-12 * gap.scale;
    record(checks[0], gap.pairing - kGapC0 * gap.v_gap + tol, sample);
    record(checks[1], kGapC0 * gap.v_gap - kGapC1 * gap.p_gap + tol, sample);

    const SlackCheck lower = uniqueness_lower_check(X, Y, params);
    record(checks[2], lower.slack + 1e-12 * lower.scale, sample);
    const SlackCheck upper = uniqueness_upper_check(X, Y, params);
    record(checks[3], upper.slack + 1e-12 * upper.scale, sample);

    const double t = [&] {
      double acc = 0.0;
      for (double v : X) acc += v * v;
      return acc;
    }();
    const double pi_val = params.p * integrand_from_norm_sq(t, params);
    const double xp = std::pow(t, 0.5 * params.p);
    record(checks[4], pi_val - xp + 1e-12 * (pi_val + xp + 1.0), sample);

    const std::vector<double> V = v_map(X, params);
    double vsq = 0.0;
    for (double v : V) vsq += v * v;
    const double wt = weight(t, params) * t;
    record(checks[5], 1e-12 * (vsq + wt + 1.0) - std::abs(vsq - wt), sample);
  }

  json summary;
  summary["samples"] = samples;
  summary["seed"] = seed;
  json list = json::array();
  bool all_ok = true;
  for (const CheckOutcome& c : checks) {
    json item;
    item["name"] = c.name;
    item["min_slack"] = c.min_slack;
    item["violations"] = c.violations;
    if (c.violations > 0) {
      item["first_violation"] = c.first_violation;
      all_ok = false;
    }
    list.push_back(item);
  }
  summary["checks"] = list;
  summary["pass"] = all_ok;

  const std::string text = summary.dump(2);
  if (out_path.empty())
    std::cout << text << "\n";
  else
    write_text_file(out_path, text);
  if (!all_ok) {
    for (const CheckOutcome& c : checks)
      if (c.violations > 0)
        std::cerr << "violated: " << c.name << " first sample " << c.first_violation.dump()
                  << "\n";
    return 1;
  }
  return 0;
}

int cmd_cordes(const std::string& p_spec, const std::string& nn_spec,
               const std::string& out_path) {
  const std::vector<double> p_values = parse_grid(p_spec);
  std::vector<int> nn_values;
  for (double v : parse_grid(nn_spec)) nn_values.push_back(int(std::lround(v)));
  const std::string csv = cordes_table_csv(p_values, nn_values);
  if (out_path.empty())
    std::cout << csv;
  else
    write_text_file(out_path, csv);
  return 0;
}

void write_run_outputs(const std::string& dir, const ContinuationResult& run,
                       const BubbleReport* report) {
  std::filesystem::create_directories(dir);
  write_text_file(dir + "/trace.csv", trace_to_csv(run.trace));
  write_text_file(dir + "/final_field.json", field_to_json(run.steps.back().field));
  if (report) {
    write_text_file(dir + "/bubble_report.json", bubble_report_to_json(*report));
    write_text_file(dir + "/bubble_ladder.csv", ladder_to_csv(report->ladder));
  }
}

int cmd_run(const std::string& config_path, const std::string& out_override, int threads) {
  RunConfig cfg = load_run_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (cfg.schedule.p_list.empty())
    throw ConfigError("schedule", "run requires a continuation schedule");

  auto mesh = build_mesh_from_config(cfg);
  const TargetManifold target = build_target_from_config(cfg);
  const MapField field0 = build_initial_field(cfg, mesh, target);

  SolverConfig solver = cfg.solver;
  solver.threads = resolve_threads(threads);
  const ContinuationResult run = run_continuation(field0, cfg.schedule, cfg.params, solver);

  BubbleReport report;
  const bool with_report = cfg.enable_bubble_report;
  if (with_report) {
    GrowthParams final_params = cfg.params;
    final_params.p = cfg.schedule.p_list.back();
    final_params.delta = cfg.schedule.delta_list.back();
    report = energy_identity_report(run.steps.back().field, final_params, cfg.diagnostics);
  }
  write_run_outputs(cfg.output_dir, run, with_report ? &report : nullptr);

  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    if (run.steps[k].status == SolveStatus::DegreeJump) {
      std::cerr << "degree jump at continuation step " << k << ": "
                << run.steps[k].diagnostic << "\n";
      return 3;
    }
  }
  std::cout << "wrote " << cfg.output_dir << "/trace.csv ("
            << (run.all_converged ? "all steps converged" : "some steps hit max_iters")
            << ")\n";
  return 0;
}

int cmd_minimize(const std::string& config_path, const std::string& out_override,
                 int threads) {
  RunConfig cfg = load_run_config(config_path);
  if (!out_override.empty()) cfg.output_dir = out_override;
  auto mesh = build_mesh_from_config(cfg);
  const TargetManifold target = build_target_from_config(cfg);
  const MapField field0 = build_initial_field(cfg, mesh, target);
  SolverConfig solver = cfg.solver;
  solver.threads = resolve_threads(threads);
  const SolveResult res = minimize(field0, cfg.params, solver);

  std::filesystem::create_directories(cfg.output_dir);
  write_text_file(cfg.output_dir + "/final_field.json", field_to_json(res.field));
  json summary;
  summary["status"] = res.status == SolveStatus::Converged ? "converged"
                      : res.status == SolveStatus::MaxIters ? "max_iters"
                                                            : "degree_jump";
  summary["iterations"] = res.iterations;
  summary["final_energy"] = res.final_energy;
  summary["final_residual"] = res.final_residual;
  write_text_file(cfg.output_dir + "/minimize_summary.json", summary.dump(2));
  std::cout << "energy " << format_double(res.final_energy) << " residual "
            << format_double(res.final_residual) << " iterations " << res.iterations << "\n";
  if (res.status == SolveStatus::DegreeJump) return 3;
  return 0;
}

int cmd_bubble_report(const std::string& field_path, double p, double delta, double s,
                      double threshold, const std::string& out_path) {
  const MapField field = field_from_json(read_text_file(field_path));
  GrowthParams params;
  params.n = field.mesh->dim;
  params.ambient = field.ambient();
  params.p = p;
  params.delta = delta;
  params.s = s;
  params.validate();
  BubbleDiagnosticsConfig cfg;
  cfg.threshold = threshold;
  const BubbleReport report = energy_identity_report(field, params, cfg);
  const std::string text = bubble_report_to_json(report);
  if (out_path.empty())
    std::cout << text << "\n";
  else
    write_text_file(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for two-parameter approximation energies of "
               "manifold-valued maps"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: NHARM_THREADS or 1)");

  auto* check = app.add_subcommand("check-inequalities",
                                   "verify the pointwise inequality suite on random samples");
  long samples = 100000;
  unsigned long seed = 1;
  std::string check_out;
  check->add_option("--samples", samples, "number of random samples")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed, "rng seed");
  check->add_option("--out", check_out, "write the JSON summary here");

  auto* cordes = app.add_subcommand("cordes", "tabulate epsilon_max over a (p, nN) grid");
  std::string p_spec = "1:5:0.25";
  std::string nn_spec = "1:12:1";
  std::string cordes_out;
  cordes->add_option("--p", p_spec, "p grid: comma list or lo:hi:step");
  cordes->add_option("--nn", nn_spec, "nN grid: comma list or lo:hi:step");
  cordes->add_option("--out", cordes_out, "write the CSV here");

  auto* run = app.add_subcommand("run", "continuation run from a JSON config");
  std::string run_config, run_out;
  run->add_option("--config", run_config, "RunConfig JSON path")->required();
  run->add_option("--out", run_out, "output directory override");

  auto* mini = app.add_subcommand("minimize", "single minimize from a JSON config");
  std::string mini_config, mini_out;
  mini->add_option("--config", mini_config, "RunConfig JSON path")->required();
  mini->add_option("--out", mini_out, "output directory override");

  auto* bubble = app.add_subcommand("bubble-report", "one-shot diagnostics on a stored field");
  std::string field_path, bubble_out;
  double p = 2.1, delta = 0.01, s = 1.0, threshold = 0.0;
  bubble->add_option("--field", field_path, "field JSON path")->required();
  bubble->add_option("--p", p, "growth exponent p");
  bubble->add_option("--delta", delta, "regularization delta");
  bubble->add_option("--s", s, "rescaling parameter s");
  bubble->add_option("--threshold", threshold, "concentration threshold (0 = default)");
  bubble->add_option("--out", bubble_out, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) return cmd_check_inequalities(samples, seed, check_out, threads);
    if (*cordes) return cmd_cordes(p_spec, nn_spec, cordes_out);
    if (*run) return cmd_run(run_config, run_out, threads);
    if (*mini) return cmd_minimize(mini_config, mini_out, threads);
    if (*bubble) return cmd_bubble_report(field_path, p, delta, s, threshold, bubble_out);
  } catch (const nharm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
