#include "cli.hpp"

#include "exo/config.hpp"
#include "exo/log_io.hpp"
#include "exo/simulation.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

namespace exo::cli {

namespace {

struct ScenarioOptions {
  std::string preset;
  std::string config;
  std::vector<std::string> overrides;
  bool no_guub = false;
  bool no_sync = false;
  bool no_dwell = false;
};

void add_scenario_options(CLI::App& cmd, ScenarioOptions& o) {
  cmd.add_option("--preset", o.preset, "built-in scenario (see `presets`)");
  cmd.add_option("--config", o.config, "scenario file of `key = value` lines");
  cmd.add_option("--set", o.overrides, "override one key, e.g. --set sync.k3=0.01")
      ->type_name("KEY=VALUE");
  cmd.add_flag("--no-guub", o.no_guub, "disable the joint envelope monitor");
  cmd.add_flag("--no-sync", o.no_sync, "disable the synchronization envelope monitor");
  cmd.add_flag("--no-dwell", o.no_dwell, "disable the dwell-time monitor");
}

Scenario build_scenario(const ScenarioOptions& o) {
  Scenario s;
  if (!o.config.empty()) {
    s = load_config(o.config);
    if (!o.preset.empty() && o.preset != s.preset)
      throw ConfigError("--preset " + o.preset + " conflicts with scenario.preset = " + s.preset +
                        " in " + o.config);
  } else {
    s = make_preset(o.preset.empty() ? "nominal" : o.preset);
  }
  apply_overrides(s, o.overrides);
  if (o.no_guub) s.monitors.guub = false;
  if (o.no_sync) s.monitors.sync = false;
  if (o.no_dwell) s.monitors.dwell = false;
  s.validate();
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& what,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + what + " to " + path.string());
  body(f);
  if (!f) throw ConfigError("failed writing " + what + " to " + path.string());
}

void write_outputs(const std::filesystem::path& dir, const SimulationResult& r,
                   const std::string& status) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file(dir / "log.csv", "log", [&](std::ostream& o) { write_log_csv(o, r.log.ticks); });
  write_file(dir / "switches.csv", "switch log",
             [&](std::ostream& o) { write_switches_csv(o, r.log.switches); });
  write_file(dir / "report.txt", "report", [&](std::ostream& o) {
    write_report(o, r.scenario, r.constants, r.report, r.log.ticks.size(), status);
  });
  write_file(dir / "scenario.cfg", "scenario",
             [&](std::ostream& o) { o << dump_config(r.scenario); });
}

void print_verdicts(std::ostream& out, const CertificateReport& r) {
  out << "guub: " << verdict_name(r.guub.verdict) << "\n"
      << "sync: " << verdict_name(r.sync.verdict) << "\n"
      << "dwell: " << verdict_name(r.dwell.verdict) << "\n"
      << "gain_conditions: " << (r.gains.passed() ? "pass" : "fail") << "\n";
}

int do_run(const ScenarioOptions& o, const std::string& out_dir, std::ostream& out,
           std::ostream& err) {
  const Scenario sc = build_scenario(o);
  try {
    const SimulationResult r = run(sc);
    write_outputs(out_dir, r, "completed");
    print_verdicts(out, r.report);
    return r.report.any_failure() ? kViolation : kOk;
  } catch (const DivergenceError& e) {
    write_outputs(out_dir, e.partial(), "diverged");
    err << "diverged: " << e.what() << "\n";
    return kDiverged;
  }
}

int do_check_gains(const ScenarioOptions& o, std::ostream& out) {
  const Scenario sc = build_scenario(o);
  const DerivedConstants c = derive_constants(sc);
  out << "c1: " << format_double(c.chi.c1) << "\n"
      << "c2: " << format_double(c.chi.c2) << "\n"
      << "B_lower: " << format_double(c.bounds.B_lower) << "\n"
      << "k3: " << format_double(sc.sync.k3) << " " << (c.gains.k3_ok ? "pass" : "fail")
      << " margin " << format_double(c.gains.k3_margin) << "\n"
      << "k4: " << format_double(sc.sync.k4) << " " << (c.gains.k4_ok ? "pass" : "fail")
      << " margin " << format_double(c.gains.k4_margin) << "\n"
      << "gain_conditions: " << (c.gains.passed() ? "pass" : "fail") << "\n";
  return c.gains.passed() ? kOk : kViolation;
}

int do_certify(const ScenarioOptions& o, const std::string& log_path, const std::string& out_dir,
               std::ostream& out) {
  const Scenario sc = build_scenario(o);
  const DerivedConstants c = derive_constants(sc);
  std::ifstream in(log_path);
  if (!in) throw ConfigError("cannot read log " + log_path);
  LoadedLog loaded = read_log_csv(in);
  if (loaded.ticks.empty()) throw ConfigError("log " + log_path + " has no rows");
  recompute_missing(loaded, sc, c);

  SimulationLog log;
  log.ticks = std::move(loaded.ticks);
  log.switches = switches_from_ticks(log.ticks);
  const CertificateReport report = certify(log, sc, c);

  write_report(out, sc, c, report, log.ticks.size(), "certified");
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + out_dir);
    write_file(std::filesystem::path(out_dir) / "report.txt", "report", [&](std::ostream& f) {
      write_report(f, sc, c, report, log.ticks.size(), "certified");
    });
  }
  return report.any_failure() ? kViolation : kOk;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-loop exoskeleton simulator with certificate monitors", "exosim"};
  app.require_subcommand(0, 1);

  ScenarioOptions run_opts, gain_opts, cert_opts, dump_opts;
  std::string run_out = "out";
  std::string cert_log, cert_out;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate a scenario and write log + report");
  add_scenario_options(*run_cmd, run_opts);
  run_cmd->add_option("--out", run_out, "output directory")->capture_default_str();

  CLI::App* gains_cmd = app.add_subcommand("check-gains", "verify the sync gain conditions only");
  add_scenario_options(*gains_cmd, gain_opts);

  CLI::App* cert_cmd = app.add_subcommand("certify", "run the monitors over an existing log");
  add_scenario_options(*cert_cmd, cert_opts);
  cert_cmd->add_option("--log", cert_log, "per-tick CSV written by `run`")->required();
  cert_cmd->add_option("--out", cert_out, "also write report.txt into this directory");

  CLI::App* presets_cmd = app.add_subcommand("presets", "list built-in scenarios");

  CLI::App* dump_cmd = app.add_subcommand("dump-config", "print the effective scenario file");
  add_scenario_options(*dump_cmd, dump_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*run_cmd) return do_run(run_opts, run_out, out, err);
    if (*gains_cmd) return do_check_gains(gain_opts, out);
    if (*cert_cmd) return do_certify(cert_opts, cert_log, cert_out, out);
    if (*presets_cmd) {
      for (const std::string& name : preset_names())
        out << name << ": " << preset_description(name) << "\n";
      return kOk;
    }
    if (*dump_cmd) {
      out << dump_config(build_scenario(dump_opts));
      return kOk;
    }
  } catch (const SingularityError& e) {
    err << "diverged: " << e.what() << "\n";
    return kDiverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  err << app.help();
  return kUsage;
}

}  // namespace exo::cli
