#include "lagns/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "lagns/config.hpp"
#include "lagns/diagnostics.hpp"
#include "lagns/io.hpp"
#include "lagns/oracle.hpp"
#include "lagns/solver.hpp"

namespace fs = std::filesystem;

namespace lagns {

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string snapshot_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "snap_%06zu.csv", i);
  return buf;
}

// Runs one configuration into out_dir. The whole setup is validated before
// anything is written.
int run_point(const Config& config, const std::string& config_text, const std::string& out_dir,
              std::ostream& log) {
  PhysParams params = config.params;
  std::optional<FlowState> initial;
  Forcing forcing;
  try {
    params.validate();
    config.run.validate();
    auto grid = std::make_shared<const MassGrid>(
        build_mass_grid(config.run.x_max, config.run.n_cells, config.run.grading));
    if (!config.case_name.empty()) {
      forcing = make_forcing(config.mcase, params);
      initial = sample_manufactured(config.mcase, grid, params, 0.0);
    } else {
      initial = make_initial_data(grid, config.run.profile, params);
    }
  } catch (const std::invalid_argument& e) {
    log << "config rejected: " << e.what() << '\n';
    return exit_config_rejected;
  } catch (const std::domain_error& e) {
    log << "config rejected: " << e.what() << '\n';
    return exit_config_rejected;
  }

  RunResult result;
  try {
    result = run_from(std::move(*initial), config.run, params, forcing ? &forcing : nullptr);
  } catch (const PositivityFailure& e) {
    log << "solver abort at t=" << e.time() << ": " << e.what() << '\n';
    return exit_solver_abort;
  }

  fs::create_directories(fs::path(out_dir) / "snapshots");
  {
    std::ofstream cfg(fs::path(out_dir) / "run.cfg");
    cfg << config_text;
  }
  write_diagnostics_csv((fs::path(out_dir) / "diagnostics.csv").string(), result.series);
  for (std::size_t i = 0; i < result.snapshots.size(); ++i)
    write_snapshot((fs::path(out_dir) / "snapshots" / snapshot_name(i)).string(), result.snapshots[i],
                   params);
  if (result.representation)
    write_representation_csv((fs::path(out_dir) / "representation.csv").string(), *result.representation);
  write_summary_json((fs::path(out_dir) / "summary.json").string(), result.summary, params);

  const auto& s = result.summary;
  log << "t_end=" << s.t_end << " steps=" << s.steps << " E0=" << s.energy_initial
      << " E=" << s.energy_final << " sup0=" << s.sup_initial << " sup=" << s.sup_final
      << " v=[" << s.v_min << "," << s.v_max << "] theta=[" << s.theta_min << "," << s.theta_max
      << "]\n";
  for (const auto& f : s.invariants)
    log << (f.passed ? "PASS " : "FAIL ") << f.name << " worst=" << f.worst << '\n';
  return s.all_passed() ? exit_ok : exit_invariant;
}

std::string with_overrides(const std::string& text, const std::vector<std::string>& overrides) {
  std::string out = text;
  if (!out.empty() && out.back() != '\n') out += '\n';
  for (const auto& o : overrides) out += o + '\n';
  return out;
}

int do_run(const Command& cmd) {
  const std::string text = read_text(cmd.config_path);
  const Config config = parse_config(text, cmd.overrides);
  if (cmd.out_dir.empty()) throw CLI::ValidationError("run needs --out");
  return run_point(config, with_overrides(text, cmd.overrides), cmd.out_dir, std::cout);
}

int do_verify(const Command& cmd) {
  Config config = parse_config(read_text(cmd.config_path), cmd.overrides);
  if (config.case_name.empty()) config.mcase = manufactured_fixture("tanh_bump");
  const auto& plan = config.verify;
  try {
    config.params.validate();
  } catch (const std::invalid_argument& e) {
    std::cout << "config rejected: " << e.what() << '\n';
    return exit_config_rejected;
  }

  StudySetup spatial{plan.x_max, plan.t_end, plan.scheme_order, StudyKind::spatial, {}};
  for (auto n : plan.spatial_n) {
    const double dx = plan.x_max / static_cast<double>(n);
    spatial.resolutions.push_back({n, plan.spatial_dt_factor * dx * dx});
  }
  StudySetup temporal{plan.x_max, plan.t_end, plan.scheme_order, StudyKind::temporal, {}};
  for (double dt : plan.temporal_dt) temporal.resolutions.push_back({plan.temporal_n, dt});

  ConvergenceResult rs, rt;
  try {
    rs = convergence_order(config.mcase, config.params, spatial);
    rt = convergence_order(config.mcase, config.params, temporal);
  } catch (const PositivityFailure& e) {
    std::cout << "solver abort: " << e.what() << '\n';
    return exit_solver_abort;
  } catch (const std::invalid_argument& e) {
    std::cout << "config rejected: " << e.what() << '\n';
    return exit_config_rejected;
  }

  bool ok = true;
  std::ostringstream table;
  table << "study,step,err_v,err_u,err_theta\n";
  auto emit = [&](const char* name, const ConvergenceResult& r, std::array<double, 2> window) {
    for (std::size_t i = 0; i < r.step_sizes.size(); ++i)
      table << name << ',' << format_double(r.step_sizes[i]) << ',' << format_double(r.errors[i][0])
            << ',' << format_double(r.errors[i][1]) << ',' << format_double(r.errors[i][2]) << '\n';
    static const char* fields[] = {"v", "u", "theta"};
    for (int f = 0; f < 3; ++f) {
      const bool in_window = r.floor[f] || (r.monotone[f] && r.orders[f] >= window[0] && r.orders[f] <= window[1]);
      ok = ok && in_window;
      std::cout << (in_window ? "PASS " : "FAIL ") << name << " order " << fields[f] << " = "
                << (r.floor[f] ? std::string("floor") : format_double(r.orders[f]))
                << (r.monotone[f] ? "" : " (non-monotone errors)") << " window [" << window[0] << ", "
                << window[1] << "]\n";
    }
  };
  emit("spatial", rs, plan.spatial_window);
  emit("temporal", rt, plan.temporal_window);
  std::cout << table.str();
  if (!cmd.out_dir.empty()) {
    fs::create_directories(cmd.out_dir);
    std::ofstream((fs::path(cmd.out_dir) / "convergence.csv").string()) << table.str();
  }
  return ok ? exit_ok : exit_order_window;
}

int do_sweep(const Command& cmd) {
  const std::string text = read_text(cmd.config_path);
  const Config base = parse_config(text, cmd.overrides);
  if (cmd.out_dir.empty()) throw CLI::ValidationError("sweep needs --out");
  if (base.sweep.empty()) throw ConfigError("sweep needs at least one sweep.KEY entry");

  // cartesian product of the sweep lists, first key varying slowest
  std::vector<std::vector<std::string>> points{{}};
  for (const auto& [key, values] : base.sweep) {
    std::vector<std::vector<std::string>> next;
    for (const auto& p : points)
      for (const auto& v : values) {
        auto q = p;
        q.push_back(key + "=" + v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }

  fs::create_directories(cmd.out_dir);
  std::vector<int> codes(points.size(), exit_ok);
  std::vector<std::string> logs(points.size());
  std::atomic<std::size_t> next_point{0};
  auto worker = [&] {
    for (std::size_t i = next_point++; i < points.size(); i = next_point++) {
      char name[32];
      std::snprintf(name, sizeof(name), "point_%03zu", i);
      auto overrides = cmd.overrides;
      overrides.insert(overrides.end(), points[i].begin(), points[i].end());
      std::ostringstream log;
      try {
        const Config c = parse_config(text, overrides);
        codes[i] = run_point(c, with_overrides(text, overrides), (fs::path(cmd.out_dir) / name).string(), log);
      } catch (const ConfigError& e) {
        log << e.what() << '\n';
        codes[i] = exit_config_parse;
      } catch (const std::exception& e) {
        // an exception must not leave the thread
        log << "error: " << e.what() << '\n';
        codes[i] = exit_usage;
      }
      logs[i] = log.str();
    }
  };
  const unsigned jobs = std::max(1u, cmd.jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ofstream index((fs::path(cmd.out_dir) / "points.csv").string());
  index << "point,exit,settings\n";
  int worst = exit_ok;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::string settings;
    for (const auto& s : points[i]) settings += (settings.empty() ? "" : ";") + s;
    index << i << ',' << codes[i] << ',' << settings << '\n';
    std::cout << "point " << i << " [" << settings << "] exit " << codes[i] << '\n' << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int do_report(const Command& cmd) {
  if (cmd.out_dir.empty()) throw CLI::ValidationError("report needs --out RUN_DIR");
  const fs::path dir(cmd.out_dir);
  Config config;
  if (!cmd.config_path.empty()) config = parse_config(read_text(cmd.config_path), cmd.overrides);
  else if (fs::exists(dir / "run.cfg")) config = parse_config(read_text((dir / "run.cfg").string()), cmd.overrides);

  const auto series = read_diagnostics_csv((dir / "diagnostics.csv").string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir / "snapshots"))
    if (e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty() || series.empty()) throw std::runtime_error("report needs snapshots and diagnostics");

  DiagnosticsOptions options = config.run.diagnostics;
  options.probe_enabled = false;
  std::optional<DiagnosticsRecorder> recorder;
  PhysParams params;
  bool reproduces = true;
  double worst_mismatch = 0.0;
  bool boundary_ok = true;
  for (const auto& f : files) {
    auto [state, p] = read_snapshot(f.string());
    if (!recorder) {
      params = p;
      recorder.emplace(params, options);
    }
    boundary_ok = boundary_ok && state.satisfies_boundary();
    recorder->sample(state);
    const auto it = std::find_if(series.begin(), series.end(), [&](const auto& s) { return s.t == state.t(); });
    if (it == series.end()) {
      reproduces = false;
      continue;
    }
    // instantaneous columns only; time integrals need every sample
    const auto recomputed = diagnostics_row(norm_report(state, nullptr, params, options));
    const auto stored = diagnostics_row(*it);
    const auto& cols = diagnostics_columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& name = cols[c];
      if (name == "balance_defect" || name.rfind("acc_", 0) == 0 || name.rfind("tv_", 0) == 0 ||
          name == "rate_u_t" || name == "rate_theta_t" || name.rfind("repr_", 0) == 0 ||
          name == "r_shadow_gap")
        continue;
      const double scale = std::max(std::abs(stored[c]), 1e-300);
      const double mismatch = std::abs(recomputed[c] - stored[c]) / scale;
      if (std::abs(recomputed[c] - stored[c]) > 1e-12 * std::max(std::abs(stored[c]), 1e-30))
        reproduces = false;
      worst_mismatch = std::max(worst_mismatch, std::min(mismatch, 1.0));
    }
  }

  std::vector<InvariantFlag> flags = recorder->invariants();
  flags.push_back({"boundary_conditions", boundary_ok, 0.0});
  flags.push_back({"reproduces_diagnostics", reproduces, worst_mismatch});
  double acc_worst = 0.0;
  double energy_worst = 0.0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    for (std::size_t a = 0; a < 5; ++a)
      acc_worst = std::min(acc_worst, series[i].accumulators[a] - series[i - 1].accumulators[a]);
    const double increment = series[i].balance_defect - series[i - 1].balance_defect;
    energy_worst = std::min(energy_worst, series[i - 1].energy + std::abs(increment) - series[i].energy +
                                              1e-14 * series[i - 1].energy + 1e-15);
  }
  flags.push_back({"series_accumulators_monotone", acc_worst >= 0.0, acc_worst});
  flags.push_back({"series_energy_monotone", energy_worst >= 0.0, energy_worst});

  nlohmann::json j;
  bool all = true;
  for (const auto& f : flags) {
    std::cout << (f.passed ? "PASS " : "FAIL ") << f.name << " worst=" << f.worst << '\n';
    j[f.name] = {{"passed", f.passed}, {"worst", f.worst}};
    all = all && f.passed;
  }
  j["all_passed"] = all;
  std::ofstream((dir / "report.json").string()) << j.dump(2) << '\n';
  return all ? exit_ok : exit_invariant;
}

}  // namespace

int execute(const Command& cmd) {
  try {
    if (cmd.verb == "run") return do_run(cmd);
    if (cmd.verb == "verify") return do_verify(cmd);
    if (cmd.verb == "sweep") return do_sweep(cmd);
    if (cmd.verb == "report") return do_report(cmd);
    std::cerr << "unknown command: " << cmd.verb << '\n';
    return exit_usage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config_parse;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Lagrangian spherically symmetric Navier-Stokes-Fourier simulator"};
  app.require_subcommand(1);
  Command cmd;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", cmd.config_path, "key=value configuration file");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--out", cmd.out_dir, "output directory");
    sub->add_option("--set", cmd.overrides, "KEY=VALUE override, repeatable");
    sub->add_option("--jobs", cmd.jobs, "parallel sweep points")->check(CLI::PositiveNumber);
  };
  add_common(app.add_subcommand("run", "integrate one configuration"), true);
  add_common(app.add_subcommand("verify", "manufactured-solution convergence study"), true);
  add_common(app.add_subcommand("sweep", "run every point of a parameter sweep"), true);
  add_common(app.add_subcommand("report", "re-check the invariant ledger of a run directory"), false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }
  cmd.verb = app.get_subcommands().front()->get_name();
  return execute(cmd);
}

}  // namespace lagns
