#pragma once

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>

namespace cctv::service {

struct AppConfig {
  std::string registry_path = "cctv_registry.geojson";
  std::string graph_path = "cctv_graph.json";
  std::string host = "127.0.0.1";
  int listen_port = 8080;
  double lambda = 10.0;
  double beta = 0.7;
  double camera_penalty_m = 50.0;
  double sample_interval_m = 1.0;
  double cluster_eps_m = 8.0;
  double validate_radius_m = 15.0;
  double heading_sigma_deg = 1.0;
  std::string cors_origin = "*";
};

/// Setting name -> raw value, as given on the command line.
using Overrides = std::map<std::string, std::string>;
using EnvLookup = std::function<const char*(const char*)>;

/// Recognised setting names: registry_path, graph_path, host, listen_port,
/// lambda, beta, camera_penalty_m, sample_interval_m, cluster_eps_m,
/// validate_radius_m, heading_sigma_deg, cors_origin. The environment uses
/// the upper-cased name with a CCTV_ prefix.
///
/// Precedence: flags > environment > config file > defaults. The config file
/// (JSON object keyed by setting name) comes from `config_path`, else
/// CCTV_CONFIG. Throws InputError on unknown keys or unparsable values and
/// std::invalid_argument on out-of-range numbers.
AppConfig resolve_config(const Overrides& flags, const std::optional<std::string>& config_path,
                         const EnvLookup& env = [](const char* k) { return static_cast<const char*>(std::getenv(k)); });

void validate_config(const AppConfig& config);

}  // namespace cctv::service
