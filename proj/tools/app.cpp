#include "app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bundled.hpp"
#include "molcomm/expectation.hpp"
#include "molcomm/geometry.hpp"
#include "molcomm/montecarlo.hpp"
#include "molcomm/particle.hpp"

#ifndef MOLCOMM_VERSION
#define MOLCOMM_VERSION "0.0.0"
#endif

namespace molcomm::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Bump when the CSV column layout changes.
constexpr int kCsvSchema = 1;

constexpr Component kComponents[] = {Component::Nearest, Component::Interferers, Component::All};

// Shortest round-trip form: exact, and stable across runs.
std::string format_double(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config::ConfigError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::vector<std::string> manifest_lines(const RunManifest& m) {
  std::vector<std::string> lines;
  lines.push_back("manifest.scenario = " + m.scenario);
  lines.push_back("manifest.engine = " + std::string(to_string(m.engine)));
  if (m.seed) lines.push_back("manifest.seed = " + std::to_string(*m.seed));
  if (m.realizations) lines.push_back("manifest.realizations = " + std::to_string(*m.realizations));
  if (m.dt) lines.push_back("manifest.dt = " + format_double(*m.dt));
  for (const auto& o : m.overrides) lines.push_back("manifest.override = " + o);
  return lines;
}

std::string provenance(const RunManifest& m, const config::ScenarioConfig& cfg) {
  std::string out = "# molcomm " MOLCOMM_VERSION " csv-schema " + std::to_string(kCsvSchema) + "\n";
  for (const auto& line : manifest_lines(m)) out += "# " + line + "\n";
  for (const auto& [k, v] : config::to_settings(cfg)) out += "# config." + k + " = " + v + "\n";
  return out;
}

json manifest_json(const RunManifest& m) {
  json j;
  j["scenario"] = m.scenario;
  j["engine"] = to_string(m.engine);
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  j["realizations"] = m.realizations ? json(*m.realizations) : json(nullptr);
  j["dt"] = m.dt ? json(*m.dt) : json(nullptr);
  j["overrides"] = m.overrides;
  j["version"] = MOLCOMM_VERSION;
  return j;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::string_view to_string(Engine e) {
  switch (e) {
    case Engine::Analytic:
      return "analytic";
    case Engine::MonteCarlo:
      return "montecarlo";
    case Engine::Particle:
      return "particle";
    case Engine::All:
      return "all";
  }
  return "unknown";
}

Engine parse_engine(std::string_view text) {
  if (text == "analytic") return Engine::Analytic;
  if (text == "montecarlo" || text == "mc") return Engine::MonteCarlo;
  if (text == "particle") return Engine::Particle;
  if (text == "all") return Engine::All;
  throw std::invalid_argument("unknown engine '" + std::string(text) + "'");
}

std::string default_output_dir() {
  const char* env = std::getenv("MOLCOMM_OUTPUT_DIR");
  return (env && *env) ? env : "molcomm_out";
}

std::optional<std::string> bundled_scenario(std::string_view name) {
  if (name == "fig2" || name == "fig2.toml") return std::string(bundled::kFig2);
  if (name == "fig3" || name == "fig3.toml") return std::string(bundled::kFig3);
  return std::nullopt;
}

config::ScenarioConfig resolve(const RunManifest& m) {
  std::string text;
  if (fs::is_regular_file(m.scenario)) {
    text = read_file(m.scenario);
  } else if (auto b = bundled_scenario(fs::path(m.scenario).filename().string())) {
    text = *b;
  } else {
    throw config::ConfigError("scenario '" + m.scenario + "' is neither a file nor a bundled name");
  }
  std::vector<std::string> overrides = m.overrides;
  if (m.seed) overrides.push_back("run.seed=" + std::to_string(*m.seed));
  if (m.realizations) overrides.push_back("montecarlo.realizations=" + std::to_string(*m.realizations));
  if (m.dt) overrides.push_back("particle.dt=" + format_double(*m.dt));
  return config::load_config_text(text, overrides);
}

std::string curve_file_name(const SignalCurve& c) {
  return c.engine + "_" + std::string(to_string(c.receiver)) + "_" +
         std::string(to_string(c.component)) + ".csv";
}

std::string curve_csv(const SignalCurve& curve, const RunManifest& manifest,
                      const config::ScenarioConfig& cfg) {
  std::string out = provenance(manifest, cfg);
  out += "t_s,value,std_error,series,receiver,component\n";
  const std::string tail = "," + std::string(to_string(curve.receiver)) + "," +
                           std::string(to_string(curve.component)) + "\n";
  for (const auto& p : curve.points) {
    out += format_double(p.t) + "," + format_double(p.level) + "," +
           format_double(p.level_std_error) + ",level" + tail;
  }
  for (const auto& p : curve.points) {
    out += format_double(p.t) + "," + format_double(p.net) + "," +
           format_double(p.net_std_error) + ",net_change" + tail;
  }
  return out;
}

RunReport run(const RunManifest& manifest, const RunOptions& options) {
  RunReport report;
  report.config = resolve(manifest);
  const auto& cfg = report.config;
  report.out_dir = options.out_dir.empty() ? default_output_dir() : options.out_dir;
  fs::create_directories(report.out_dir);

  const bool analytic = manifest.engine == Engine::Analytic || manifest.engine == Engine::All;
  const bool montecarlo = manifest.engine == Engine::MonteCarlo || manifest.engine == Engine::All;
  const bool particle = manifest.engine == Engine::Particle || manifest.engine == Engine::All;

  json runtimes = json::object();
  json truncation = json::array();
  expectation::EngineOptions eopts;
  eopts.threads = options.threads;

  for (auto kind : cfg.receivers) {
    const Scenario s = cfg.for_receiver(kind);
    const std::string rx(to_string(kind));
    auto start = std::chrono::steady_clock::now();
    if (analytic) {
      for (auto c : kComponents) report.curves.push_back(expectation::analytic_curve(s, c, eopts));
      runtimes["analytic/" + rx] = seconds_since(start);
    }
    if (montecarlo) {
      start = std::chrono::steady_clock::now();
      const auto r = montecarlo::mc_signal(s, {cfg.realizations, cfg.seed, options.threads});
      for (auto c : kComponents) report.curves.push_back(r.curve(c));
      runtimes["montecarlo/" + rx] = seconds_since(start);
    }
    if (particle) {
      start = std::chrono::steady_clock::now();
      auto pcfg = cfg.particle_config();
      pcfg.threads = options.threads;
      const auto r = particle::simulate_ensemble(s, pcfg, cfg.particle.permutations,
                                                 cfg.particle.repetitions, cfg.seed);
      for (auto c : kComponents) report.curves.push_back(r.curve(c));
      runtimes["particle/" + rx] = seconds_since(start);
    }

    // Signal from transmitters beyond R, which sampled engines never place.
    json tb;
    tb["receiver"] = rx;
    const double big_r = s.max_placement_radius;
    tb["max_placement_radius_um"] = std::isfinite(big_r) ? json(big_r) : json("inf");
    if (std::isfinite(big_r) && s.field.active_density() > 0.0) {
      double level = 0.0;
      double net = 0.0;
      for (double t : s.sampling.t_grid) {
        const double a = expectation::truncation_tail(s, big_r, t, eopts);
        const double b =
            expectation::truncation_tail(s, big_r, t + s.sampling.sampling_interval, eopts);
        level = std::max(level, a);
        net = std::max(net, std::abs(b - a));
      }
      tb["nearest_mass_beyond_R"] =
          geometry::nearest_mass_beyond(big_r, s.field.active_density(), s.receiver.radius);
      tb["max_level_bound"] = level;
      tb["max_net_change_bound"] = net;
    } else {
      tb["nearest_mass_beyond_R"] = 0.0;
      tb["max_level_bound"] = 0.0;
      tb["max_net_change_bound"] = 0.0;
    }
    truncation.push_back(tb);
  }

  json curves = json::array();
  for (const auto& c : report.curves) {
    const auto name = curve_file_name(c);
    write_file(fs::path(report.out_dir) / name, curve_csv(c, manifest, cfg));
    report.files.push_back(name);
    const auto peak = c.peak_net();
    json entry;
    entry["file"] = name;
    entry["engine"] = c.engine;
    entry["receiver"] = to_string(c.receiver);
    entry["component"] = to_string(c.component);
    entry["peak_net_change"] = {{"t_s", peak.t}, {"value", peak.net}, {"std_error", peak.net_std_error}};
    entry["final_level"] = c.points.empty() ? 0.0 : c.points.back().level;
    curves.push_back(entry);
  }

  json summary;
  summary["manifest"] = manifest_json(manifest);
  summary["config"] = config::to_settings(cfg);
  summary["curves"] = curves;
  summary["truncation"] = truncation;
  summary["tolerances"] = {{"quadrature_rel_tol", eopts.quadrature.rel_tol},
                           {"quadrature_abs_tol", eopts.quadrature.abs_tol},
                           {"montecarlo_realizations", cfg.realizations},
                           {"particle_dt_s", cfg.particle.dt}};
  summary["runtimes_s"] = runtimes;
  write_file(fs::path(report.out_dir) / "summary.json", summary.dump(2) + "\n");
  report.files.push_back("summary.json");

  if (!options.quiet) {
    for (const auto& f : report.files) std::cout << (fs::path(report.out_dir) / f).string() << "\n";
  }
  return report;
}

std::vector<Table1Row> table1(unsigned threads) {
  const auto cfg = config::load_config_text(bundled::kFig2);
  expectation::EngineOptions opts;
  opts.threads = threads;
  struct Ref {
    Component c;
    ReceiverKind r;
    double value;
  };
  const Ref refs[] = {{Component::Nearest, ReceiverKind::Passive, 149.57},
                      {Component::Nearest, ReceiverKind::FullyAbsorbing, 354.52},
                      {Component::Interferers, ReceiverKind::Passive, 9.252},
                      {Component::Interferers, ReceiverKind::FullyAbsorbing, 59.42}};
  std::vector<Table1Row> rows;
  for (const auto& ref : refs) {
    const auto curve = expectation::analytic_curve(cfg.for_receiver(ref.r), ref.c, opts);
    const double v = curve.peak_net().net;
    rows.push_back({ref.c, ref.r, v, ref.value, (v - ref.value) / ref.value});
  }
  return rows;
}

RunReport reproduce(std::string_view target, Engine engine, const RunOptions& options) {
  RunOptions opts = options;
  if (opts.out_dir.empty()) opts.out_dir = (fs::path(default_output_dir()) / target).string();
  if (target == "fig2" || target == "fig3") {
    RunManifest m;
    m.scenario = std::string(target);
    m.engine = engine;
    return run(m, opts);
  }
  if (target != "table1") throw std::invalid_argument("unknown target '" + std::string(target) + "'");

  RunReport report;
  report.out_dir = opts.out_dir;
  report.config = config::load_config_text(bundled::kFig2);
  fs::create_directories(report.out_dir);
  RunManifest m;
  m.scenario = "fig2";
  std::string text = provenance(m, report.config);
  text += "series,receiver,value,reference,relative_error\n";
  for (const auto& row : table1(opts.threads)) {
    text += std::string(row.component == Component::Nearest ? "nearest," : "aggregate,") +
            std::string(to_string(row.receiver)) + "," + format_double(row.value) + "," +
            format_double(row.reference) + "," + format_double(row.relative_error) + "\n";
    if (!opts.quiet) {
      std::printf("%-9s %-9s %10.4f  reference %8.3f  rel.err %+.2f%%\n",
                  row.component == Component::Nearest ? "nearest" : "aggregate",
                  std::string(to_string(row.receiver)).c_str(), row.value, row.reference,
                  100.0 * row.relative_error);
    }
  }
  write_file(fs::path(report.out_dir) / "table1.csv", text);
  report.files.push_back("table1.csv");
  return report;
}

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kInvalid = 3, kNumerical = 4, kFailure = 5 };

int report_error(const std::string& kind, const std::string& message,
                 const std::vector<FieldViolation>& violations = {}) {
  json err;
  err["error"]["kind"] = kind;
  err["error"]["message"] = message;
  if (!violations.empty()) {
    json v = json::array();
    for (const auto& f : violations) v.push_back({{"path", f.path}, {"message", f.message}});
    err["error"]["violations"] = v;
  }
  std::cerr << err.dump(2) << "\n";
  if (kind == "validation") return kInvalid;
  if (kind == "config") return kUsage;
  if (kind == "quadrature") return kNumerical;
  return kFailure;
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App cli{"Expected molecular signal at a spherical receiver from a Poisson field of "
               "transmitters"};
  cli.set_version_flag("--version", MOLCOMM_VERSION);
  cli.require_subcommand(1);

  RunManifest manifest;
  RunOptions options;
  std::string engine_name = "analytic";

  auto* run_cmd = cli.add_subcommand("run", "Run engines on a scenario");
  run_cmd->add_option("--scenario", manifest.scenario, "Scenario file, or bundled name fig2/fig3")
      ->capture_default_str();
  run_cmd->add_option("--engine", engine_name, "analytic, montecarlo, particle or all")
      ->capture_default_str()
      ->check(CLI::IsMember({"analytic", "montecarlo", "particle", "all"}));
  run_cmd->add_option("--seed", manifest.seed, "Master seed (overrides run.seed)");
  run_cmd->add_option("--override", manifest.overrides, "key=value, repeatable")
      ->allow_extra_args(false);
  run_cmd->add_option("--realizations", manifest.realizations, "Monte Carlo realizations")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--dt", manifest.dt, "Particle time step in seconds")
      ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", options.out_dir, "Output directory (default $MOLCOMM_OUTPUT_DIR)");
  run_cmd->add_option("--threads", options.threads, "Worker threads, 0 for all cores");
  run_cmd->add_flag("--quiet", options.quiet, "Do not list written files");

  std::string target;
  auto* repro_cmd = cli.add_subcommand("reproduce", "Reproduce a bundled figure or table");
  repro_cmd->add_option("target", target, "fig2, fig3 or table1")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "table1"}));
  repro_cmd->add_option("--engine", engine_name, "Engine for figure targets")
      ->capture_default_str()
      ->check(CLI::IsMember({"analytic", "montecarlo", "particle", "all"}));
  repro_cmd->add_option("--out", options.out_dir, "Output directory");
  repro_cmd->add_option("--threads", options.threads, "Worker threads, 0 for all cores");
  repro_cmd->add_flag("--quiet", options.quiet, "Less output");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e);
  }

  try {
    manifest.engine = parse_engine(engine_name);
    if (run_cmd->parsed()) {
      run(manifest, options);
    } else {
      reproduce(target, manifest.engine, options);
    }
  } catch (const ValidationError& e) {
    return report_error("validation", e.what(), e.violations());
  } catch (const config::ConfigError& e) {
    return report_error("config", e.what());
  } catch (const numerics::QuadratureError& e) {
    return report_error("quadrature", e.what());
  } catch (const std::exception& e) {
    return report_error("failure", e.what());
  }
  return kOk;
}

}  // namespace molcomm::app
