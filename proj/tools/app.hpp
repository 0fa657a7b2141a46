#pragma once

// Batch front-end shared by the molcomm executable and the acceptance suite.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "molcomm/config.hpp"
#include "molcomm/curve.hpp"

namespace molcomm::app {

enum class Engine { Analytic, MonteCarlo, Particle, All };

std::string_view to_string(Engine e);
Engine parse_engine(std::string_view text);

/// Everything that determines the content of a run's CSV files. Thread count
/// and output location are deliberately absent.
struct RunManifest {
  std::string scenario = "fig2";  // path, or the name of a bundled scenario
  Engine engine = Engine::Analytic;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<double> dt;
};

struct RunOptions {
  std::string out_dir;  // empty: default_output_dir()
  unsigned threads = 0;
  bool quiet = false;
};

struct RunReport {
  std::vector<SignalCurve> curves;
  std::vector<std::string> files;  // written, relative to out_dir
  std::string out_dir;
  config::ScenarioConfig config;
};

/// MOLCOMM_OUTPUT_DIR when set, otherwise "molcomm_out".
std::string default_output_dir();

/// Scenario text for "fig2"/"fig3" (with or without ".toml"), if bundled.
std::optional<std::string> bundled_scenario(std::string_view name);

/// Loads the manifest's scenario with overrides and flag values applied.
config::ScenarioConfig resolve(const RunManifest& manifest);

/// Runs the requested engines and writes one CSV per curve plus summary.json.
RunReport run(const RunManifest& manifest, const RunOptions& options);

/// CSV text for one curve, including the provenance header.
std::string curve_csv(const SignalCurve& curve, const RunManifest& manifest,
                      const config::ScenarioConfig& cfg);

/// File name for a curve: <engine>_<receiver>_<component>.csv
std::string curve_file_name(const SignalCurve& curve);

struct Table1Row {
  Component component;
  ReceiverKind receiver;
  double value;
  double reference;
  double relative_error;
};

/// Peak analytic net change per sampling interval under the sparse bundled
/// scenario, with published reference values.
std::vector<Table1Row> table1(unsigned threads = 0);

/// Reproduces a bundled target ("fig2", "fig3" or "table1") into out_dir.
RunReport reproduce(std::string_view target, Engine engine, const RunOptions& options);

/// Command-line entry point; returns the process exit code.
int main_entry(int argc, char** argv);

}  // namespace molcomm::app
