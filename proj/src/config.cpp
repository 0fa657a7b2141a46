#include "molcomm/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace molcomm::config {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
    return std::string(v.substr(1, v.size() - 2));
  }
  return std::string(v);
}

// Drops a trailing '#' comment that is not inside quotes.
std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

double to_number(std::string_view key, std::string_view text) {
  const auto body = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc{} || ptr != body.data() + body.size()) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::uint64_t to_count(std::string_view key, std::string_view text) {
  const double v = to_number(key, text);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15) {
    throw ConfigError(std::string(key) + ": expected a nonnegative integer, got '" +
                      std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(v);
}

double to_quantity(std::string_view key, std::string_view text, std::string_view dimension) {
  try {
    return units::parse_quantity(text, dimension);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

std::vector<double> to_time_list(std::string_view key, std::string_view text) {
  auto body = trim(text);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
    throw ConfigError(std::string(key) + ": expected a list like [0, 0.1, 0.2]");
  }
  body = body.substr(1, body.size() - 2);
  std::vector<double> out;
  while (!trim(body).empty()) {
    const auto comma = body.find(',');
    const auto item = body.substr(0, comma);
    out.push_back(to_quantity(key, unquote(item), "time"));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

struct GridSpec {
  std::optional<double> start;
  std::optional<double> stop;
  std::optional<double> step;
  std::optional<std::vector<double>> explicit_grid;
};

const std::unordered_map<std::string, std::string>& aliases() {
  static const std::unordered_map<std::string, std::string> table{
      {"D", "environment.diffusion_coefficient"},
      {"diffusion", "environment.diffusion_coefficient"},
      {"rr", "receiver.radius"},
      {"r_r", "receiver.radius"},
      {"receiver", "receiver.kind"},
      {"lambda", "transmitters.density"},
      {"rho", "transmitters.activity"},
      {"ntx", "transmitters.pulse_amplitude"},
      {"N_tx", "transmitters.pulse_amplitude"},
      {"R", "transmitters.max_placement_radius"},
      {"tss", "sampling.interval"},
      {"T_ss", "sampling.interval"},
      {"t_start", "sampling.t_start"},
      {"t_stop", "sampling.t_stop"},
      {"t_step", "sampling.t_step"},
      {"realizations", "montecarlo.realizations"},
      {"dt", "particle.dt"},
      {"molecules", "particle.molecules_per_tx"},
      {"permutations", "particle.permutations"},
      {"repetitions", "particle.repetitions"},
      {"absorption_mode", "particle.absorption_mode"},
      {"seed", "run.seed"},
  };
  return table;
}

using Setter = void (*)(ScenarioConfig&, GridSpec&, const std::string& key,
                       const std::string& value);

const std::unordered_map<std::string, Setter>& setters() {
  static const std::unordered_map<std::string, Setter> table{
      {"environment.diffusion_coefficient",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.environment.diffusion_coefficient = to_quantity(k, v, "diffusion");
       }},
      {"receiver.radius",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.receiver.radius = to_quantity(k, v, "length");
       }},
      {"receiver.kind",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         if (v == "both") {
           c.receivers = {ReceiverKind::FullyAbsorbing, ReceiverKind::Passive};
           return;
         }
         try {
           c.receivers = {parse_receiver_kind(v)};
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"transmitters.density",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.field.density = to_quantity(k, v, "density");
       }},
      {"transmitters.activity",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.field.activity = to_number(k, v);
       }},
      {"transmitters.pulse_amplitude",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.field.pulse_amplitude = to_number(k, v);
       }},
      {"transmitters.emission_time",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.field.emission_time = to_quantity(k, v, "time");
       }},
      {"transmitters.max_placement_radius",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.max_placement_radius = to_quantity(k, v, "length");
       }},
      {"sampling.interval",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.scenario.sampling.sampling_interval = to_quantity(k, v, "time");
       }},
      {"sampling.t_start",
       [](ScenarioConfig&, GridSpec& g, const std::string& k, const std::string& v) {
         g.start = to_quantity(k, v, "time");
       }},
      {"sampling.t_stop",
       [](ScenarioConfig&, GridSpec& g, const std::string& k, const std::string& v) {
         g.stop = to_quantity(k, v, "time");
       }},
      {"sampling.t_step",
       [](ScenarioConfig&, GridSpec& g, const std::string& k, const std::string& v) {
         g.step = to_quantity(k, v, "time");
       }},
      {"sampling.t_grid",
       [](ScenarioConfig&, GridSpec& g, const std::string& k, const std::string& v) {
         g.explicit_grid = to_time_list(k, v);
       }},
      {"montecarlo.realizations",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.realizations = to_count(k, v);
       }},
      {"particle.dt",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.particle.dt = to_quantity(k, v, "time");
       }},
      {"particle.molecules_per_tx",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.particle.molecules_per_tx = to_count(k, v);
       }},
      {"particle.permutations",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.particle.permutations = to_count(k, v);
       }},
      {"particle.repetitions",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.particle.repetitions = to_count(k, v);
       }},
      {"particle.absorption_mode",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         try {
           c.particle.absorption_mode = particle::parse_absorption_mode(v);
         } catch (const std::invalid_argument& e) {
           throw ConfigError(k + ": " + e.what());
         }
       }},
      {"run.seed",
       [](ScenarioConfig& c, GridSpec&, const std::string& k, const std::string& v) {
         c.seed = to_count(k, v);
       }},
  };
  return table;
}

void apply(ScenarioConfig& cfg, GridSpec& grid, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown setting '" + key + "'");
  it->second(cfg, grid, key, value);
}

}  // namespace

std::string canonical_key(std::string_view key) {
  const auto it = aliases().find(std::string(key));
  return it == aliases().end() ? std::string(key) : it->second;
}

Scenario ScenarioConfig::for_receiver(ReceiverKind kind) const {
  Scenario s = scenario;
  s.receiver.kind = kind;
  return s;
}

particle::ParticleSimConfig ScenarioConfig::particle_config() const {
  particle::ParticleSimConfig p;
  p.dt = particle.dt;
  p.molecules_per_tx = particle.molecules_per_tx != 0
                           ? particle.molecules_per_tx
                           : static_cast<std::uint64_t>(std::llround(scenario.field.pulse_amplitude));
  p.record_scheme = scenario.sampling;
  p.absorption_mode = particle.absorption_mode;
  return p;
}

Settings parse_keyvalue(std::string_view text) {
  Settings out;
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = std::string(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    const auto full = section.empty() ? key : section + "." + key;
    if (out.contains(full)) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + full + "'");
    }
    out[full] = unquote(line.substr(eq + 1));
  }
  return out;
}

Settings parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("JSON scenario must be an object");
  Settings out;
  std::function<void(const nlohmann::json&, const std::string&)> walk =
      [&](const nlohmann::json& node, const std::string& prefix) {
        for (const auto& [k, v] : node.items()) {
          const auto key = prefix.empty() ? k : prefix + "." + k;
          if (v.is_object()) {
            walk(v, key);
          } else if (v.is_string()) {
            out[key] = v.get<std::string>();
          } else {
            out[key] = v.dump();
          }
        }
      };
  walk(doc, "");
  return out;
}

ScenarioConfig build_config(const Settings& settings, const std::vector<std::string>& overrides) {
  ScenarioConfig cfg;
  cfg.scenario.environment.diffusion_coefficient = 0.0;
  cfg.scenario.field.pulse_amplitude = 1e4;
  GridSpec grid;
  for (const auto& [key, value] : settings) apply(cfg, grid, key, value);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + item + "' is not key=value");
    apply(cfg, grid, canonical_key(trim(std::string_view(item).substr(0, eq))),
          unquote(std::string_view(item).substr(eq + 1)));
  }

  if (grid.explicit_grid) {
    cfg.scenario.sampling.t_grid = *grid.explicit_grid;
  } else {
    const double step = grid.step.value_or(cfg.scenario.sampling.sampling_interval);
    if (!grid.stop) throw ConfigError("sampling.t_stop or sampling.t_grid is required");
    if (!(step > 0.0)) throw ConfigError("sampling.t_step must be positive");
    cfg.scenario.sampling.t_grid =
        SamplingScheme::uniform(grid.start.value_or(0.0), *grid.stop, step, 1.0).t_grid;
  }
  cfg.scenario.receiver.kind = cfg.receivers.front();
  for (auto kind : cfg.receivers) validate_scenario(cfg.for_receiver(kind));
  return cfg;
}

namespace {

std::string exact(double v) {
  if (std::isinf(v)) return "inf";
  // Shortest text that reads back to the same double.
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

Settings to_settings(const ScenarioConfig& cfg) {
  const Scenario& s = cfg.scenario;
  Settings out;
  out["environment.diffusion_coefficient"] = exact(s.environment.diffusion_coefficient) + " um^2/s";
  out["receiver.radius"] = exact(s.receiver.radius) + " um";
  out["receiver.kind"] = cfg.receivers.size() > 1 ? "both" : std::string(to_string(cfg.receivers.front()));
  out["transmitters.density"] = exact(s.field.density) + " um^-3";
  out["transmitters.activity"] = exact(s.field.activity);
  out["transmitters.pulse_amplitude"] = exact(s.field.pulse_amplitude);
  out["transmitters.emission_time"] = exact(s.field.emission_time) + " s";
  out["transmitters.max_placement_radius"] =
      std::isinf(s.max_placement_radius) ? "inf" : exact(s.max_placement_radius) + " um";
  out["sampling.interval"] = exact(s.sampling.sampling_interval) + " s";
  std::string grid = "[";
  for (std::size_t i = 0; i < s.sampling.t_grid.size(); ++i) {
    grid += (i ? ", " : "") + exact(s.sampling.t_grid[i]);
  }
  out["sampling.t_grid"] = grid + "]";
  out["montecarlo.realizations"] = std::to_string(cfg.realizations);
  out["particle.dt"] = exact(cfg.particle.dt) + " s";
  out["particle.molecules_per_tx"] = std::to_string(cfg.particle.molecules_per_tx);
  out["particle.permutations"] = std::to_string(cfg.particle.permutations);
  out["particle.repetitions"] = std::to_string(cfg.particle.repetitions);
  out["particle.absorption_mode"] = std::string(particle::to_string(cfg.particle.absorption_mode));
  out["run.seed"] = std::to_string(cfg.seed);
  return out;
}

std::string render_keyvalue(const Settings& settings) {
  std::string out;
  std::string section;
  for (const auto& [key, value] : settings) {
    const auto dot = key.rfind('.');
    const std::string sec = dot == std::string::npos ? "" : key.substr(0, dot);
    const std::string name = dot == std::string::npos ? key : key.substr(dot + 1);
    if (sec != section) {
      out += "[" + sec + "]\n";
      section = sec;
    }
    const bool quote = value.find(' ') != std::string::npos && value.front() != '[';
    out += name + " = " + (quote ? "\"" + value + "\"" : value) + "\n";
  }
  return out;
}

ScenarioConfig load_config_text(std::string_view text, const std::vector<std::string>& overrides) {
  const auto body = trim(text);
  const Settings settings = (!body.empty() && body.front() == '{') ? parse_json(body)
                                                                    : parse_keyvalue(text);
  return build_config(settings, overrides);
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config_text(buf.str(), overrides);
}

}  // namespace molcomm::config
