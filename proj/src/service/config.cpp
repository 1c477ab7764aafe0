#include "cctv/service/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

#include "cctv/exposure.hpp"
#include "cctv/json_util.hpp"

namespace cctv::service {

namespace {

double to_double(const std::string& name, const std::string& raw) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || ptr != raw.data() + raw.size() || raw.empty()) {
    throw InputError(name + ": expected a number, got \"" + raw + "\"");
  }
  return v;
}

int to_int(const std::string& name, const std::string& raw) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || ptr != raw.data() + raw.size() || raw.empty()) {
    throw InputError(name + ": expected an integer, got \"" + raw + "\"");
  }
  return v;
}

struct Setting {
  const char* name;
  std::function<void(AppConfig&, const std::string&)> set;
};

const std::vector<Setting>& settings() {
  static const std::vector<Setting> table = {
      {"registry_path", [](AppConfig& c, const std::string& v) { c.registry_path = v; }},
      {"graph_path", [](AppConfig& c, const std::string& v) { c.graph_path = v; }},
      {"host", [](AppConfig& c, const std::string& v) { c.host = v; }},
      {"listen_port", [](AppConfig& c, const std::string& v) { c.listen_port = to_int("listen_port", v); }},
      {"lambda", [](AppConfig& c, const std::string& v) { c.lambda = to_double("lambda", v); }},
      {"beta", [](AppConfig& c, const std::string& v) { c.beta = to_double("beta", v); }},
      {"camera_penalty_m",
       [](AppConfig& c, const std::string& v) { c.camera_penalty_m = to_double("camera_penalty_m", v); }},
      {"sample_interval_m",
       [](AppConfig& c, const std::string& v) { c.sample_interval_m = to_double("sample_interval_m", v); }},
      {"cluster_eps_m", [](AppConfig& c, const std::string& v) { c.cluster_eps_m = to_double("cluster_eps_m", v); }},
      {"validate_radius_m",
       [](AppConfig& c, const std::string& v) { c.validate_radius_m = to_double("validate_radius_m", v); }},
      {"heading_sigma_deg",
       [](AppConfig& c, const std::string& v) { c.heading_sigma_deg = to_double("heading_sigma_deg", v); }},
      {"cors_origin", [](AppConfig& c, const std::string& v) { c.cors_origin = v; }},
  };
  return table;
}

const Setting& find_setting(const std::string& name) {
  for (const Setting& s : settings()) {
    if (name == s.name) return s;
  }
  throw InputError("unknown configuration key \"" + name + "\"");
}

std::string env_name(const char* name) {
  std::string out = "CCTV_";
  for (const char* p = name; *p; ++p) out += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
  return out;
}

}  // namespace

void validate_config(const AppConfig& c) {
  if (c.listen_port < 0 || c.listen_port > 65535) throw std::invalid_argument("listen_port must be in [0, 65535]");
  if (!(c.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (!(c.beta >= 0.0 && c.beta <= 0.9)) throw std::invalid_argument("beta must be in [0, 0.9]");
  if (!(c.camera_penalty_m >= 0.0)) throw std::invalid_argument("camera_penalty_m must be >= 0");
  if (!(c.sample_interval_m > 0.0 && c.sample_interval_m <= kMaxSampleIntervalM)) {
    throw std::invalid_argument("sample_interval_m must be in (0, 5]");
  }
  if (!(c.cluster_eps_m > 0.0)) throw std::invalid_argument("cluster_eps_m must be > 0");
  if (!(c.validate_radius_m > 0.0)) throw std::invalid_argument("validate_radius_m must be > 0");
  if (!(c.heading_sigma_deg >= 0.0)) throw std::invalid_argument("heading_sigma_deg must be >= 0");
}

AppConfig resolve_config(const Overrides& flags, const std::optional<std::string>& config_path, const EnvLookup& env) {
  AppConfig config;

  std::optional<std::string> file = config_path;
  if (!file) {
    if (const char* p = env("CCTV_CONFIG"); p != nullptr && *p != '\0') file = p;
  }
  if (file) {
    const auto doc = json_util::parse(json_util::read_file(*file));
    if (!doc.is_object()) throw InputError(*file + ": expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
      const Setting& s = find_setting(key);
      s.set(config, value.is_string() ? value.get<std::string>() : value.dump());
    }
  }
  for (const Setting& s : settings()) {
    if (const char* v = env(env_name(s.name).c_str()); v != nullptr && *v != '\0') s.set(config, v);
  }
  for (const auto& [key, value] : flags) find_setting(key).set(config, value);

  validate_config(config);
  return config;
}

}  // namespace cctv::service
