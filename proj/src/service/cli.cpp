#include "cctv/service/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "cctv/coco_io.hpp"
#include "cctv/graph_io.hpp"
#include "cctv/json_util.hpp"
#include "cctv/obs_log.hpp"
#include "cctv/registry_io.hpp"
#include "cctv/service/api.hpp"
#include "cctv/service/http_server.hpp"
#include "cctv/service/state.hpp"

namespace cctv::service {

namespace {

struct Options {
  std::optional<std::string> config_path;
  Overrides flags;

  std::string input_path;
  std::string graph_format = "auto";

  std::string from, to, mode = "default";
  std::string geojson_out;
  bool json = false;

  std::string gt_path, dets_path, dets2_path, out_path;
  bool fuse = false;

  std::string obs_path;
};

// Adds a string option whose value, when given, becomes a config override.
CLI::Option* add_override(CLI::App& app, Options& o, const std::string& flag, const std::string& key,
                          const std::string& help) {
  return app.add_option_function<std::string>(
      flag, [&o, key](const std::string& v) { o.flags[key] = v; }, help);
}

std::vector<CameraEstimate> load_estimates(const std::string& obs_path, const AppConfig& config) {
  const auto observations = parse_observation_log(json_util::read_file(obs_path));
  const LocalizerConfig lc{config.heading_sigma_deg};
  std::vector<CameraEstimate> estimates;
  estimates.reserve(observations.size());
  for (const Observation& obs : observations) estimates.push_back(localize(obs, lc));
  return estimates;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

int cmd_import_cameras(const Options& o, const AppConfig& config, std::ostream& out) {
  const auto cameras = parse_registry(json_util::read_file(o.input_path));
  json_util::write_file_atomic(config.registry_path, serialize_registry(cameras));
  out << registry_summary(cameras) << '\n';
  return kExitOk;
}

int cmd_import_graph(const Options& o, const AppConfig& config, std::ostream& out) {
  const RoadGraph graph = parse_graph(json_util::read_file(o.input_path), parse_graph_format(o.graph_format));
  json_util::write_file_atomic(config.graph_path, serialize_graph_json(graph));
  out << graph.nodes().size() << " nodes, " << graph.edges().size() << " edges\n";
  return kExitOk;
}

int cmd_route(const Options& o, const AppConfig& config, std::ostream& out) {
  RouteRequest request;
  request.from = parse_lat_lon(o.from, "from");
  request.to = parse_lat_lon(o.to, "to");
  const auto mode = parse_route_mode(o.mode);
  if (!mode) throw InvalidRequest("mode", "expected default|privacy|safety");
  request.mode = *mode;
  request.params = {config.lambda, config.beta, config.camera_penalty_m};
  validate_params(request.params);

  auto graph = std::make_shared<const RoadGraph>(load_graph_file(config.graph_path));
  const auto snap = make_snapshot(load_registry_file(config.registry_path), graph, {config.sample_interval_m});
  const Json response = route_response(*snap, request);
  if (!o.geojson_out.empty()) write_text(o.geojson_out, response.at("route").dump(2) + "\n");
  out << (o.json ? response.dump() + "\n" : route_text(response));
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto gt = eval::parse_coco_ground_truth(json_util::read_file(o.gt_path));
  auto dets = eval::parse_coco_results(json_util::read_file(o.dets_path), &gt.image_ids);
  if (o.fuse) {
    const auto dets2 = eval::parse_coco_results(json_util::read_file(o.dets2_path), &gt.image_ids);
    dets = eval::fuse(dets, dets2);
  }
  const eval::EvalReport report = eval::evaluate(dets, gt.boxes);
  out << eval::report_text(report);
  if (!o.out_path.empty()) write_text(o.out_path, eval::report_json(report));
  return kExitOk;
}

int cmd_localize(const Options& o, const AppConfig& config, std::ostream& out) {
  const auto estimates = load_estimates(o.obs_path, config);
  const auto found = cluster(estimates, config.cluster_eps_m);
  auto registry = load_registry_file(config.registry_path);
  std::set<std::string> ids;
  for (const Camera& c : registry) ids.insert(c.id);
  std::size_t added = 0;
  for (const Camera& c : found) {
    if (!ids.insert(c.id).second) {
      out << "skip " << c.id << " (already in registry)\n";
      continue;
    }
    registry.push_back(c);
    ++added;
    out << c.id << ' ' << to_string(c.kind) << ' ' << std::fixed << std::setprecision(7) << c.position.lat << ','
        << c.position.lon << '\n';
  }
  json_util::write_file_atomic(config.registry_path, serialize_registry(registry));
  out << estimates.size() << " observations -> " << found.size() << " cameras, " << added << " added; "
      << registry_summary(registry) << '\n';
  return kExitOk;
}

int cmd_validate(const Options& o, const AppConfig& config, std::ostream& out) {
  const auto estimates = load_estimates(o.obs_path, config);
  const auto registry = load_registry_file(config.registry_path);
  const ValidationReport report = validate_registry(registry, estimates, config.validate_radius_m);
  out << "confirmed: " << report.confirmed() << '\n'
      << "unconfirmed: " << report.unconfirmed() << '\n'
      << "novel: " << report.novel.size() << '\n';
  if (!o.out_path.empty()) write_text(o.out_path, validation_json(report, estimates).dump(2) + "\n");
  return kExitOk;
}

int cmd_export_exposure(const Options& o, const AppConfig& config, std::ostream& out) {
  const RoadGraph graph = load_graph_file(config.graph_path);
  const auto cameras = load_registry_file(config.registry_path);
  const std::string csv = exposure_table_csv(annotate_graph(graph, cameras, {config.sample_interval_m}));
  if (o.out_path.empty()) {
    out << csv;
  } else {
    write_text(o.out_path, csv);
  }
  return kExitOk;
}

int cmd_serve(const AppConfig& config, std::ostream& out) {
  StateStore store(config);
  store.load();
  httplib::Server server;
  install_routes(server, store);
  out << "listening on " << config.host << ':' << config.listen_port << std::endl;
  if (!server.listen(config.host, config.listen_port)) {
    throw InputError("cannot listen on " + config.host + ":" + std::to_string(config.listen_port));
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  Options o;
  CLI::App app{"CCTV-aware mapping and routing"};
  app.require_subcommand(1);
  app.add_option_function<std::string>(
      "--config", [&o](const std::string& v) { o.config_path = v; }, "JSON config file");
  add_override(app, o, "--registry", "registry_path", "camera registry GeoJSON");
  add_override(app, o, "--graph", "graph_path", "road graph (native JSON)");
  add_override(app, o, "--sample-interval", "sample_interval_m", "exposure sample spacing in metres");

  auto* import_cameras = app.add_subcommand("import-cameras", "store a GeoJSON camera registry");
  import_cameras->add_option("path", o.input_path)->required();

  auto* import_graph = app.add_subcommand("import-graph", "store a road graph");
  import_graph->add_option("path", o.input_path)->required();
  import_graph->add_option("--format", o.graph_format, "auto|json|osm");

  auto* route_cmd = app.add_subcommand("route", "plan a route");
  route_cmd->add_option("--from", o.from, "lat,lon")->required();
  route_cmd->add_option("--to", o.to, "lat,lon")->required();
  route_cmd->add_option("--mode", o.mode, "default|privacy|safety");
  add_override(*route_cmd, o, "--lambda", "lambda", "privacy weight");
  add_override(*route_cmd, o, "--beta", "beta", "safety discount");
  add_override(*route_cmd, o, "--penalty", "camera_penalty_m", "per-camera penalty in metres");
  route_cmd->add_option("--geojson", o.geojson_out, "write the route LineString here");
  route_cmd->add_flag("--json", o.json, "print the full JSON response");

  auto* eval_cmd = app.add_subcommand("eval", "score detections against COCO ground truth");
  eval_cmd->add_option("--gt", o.gt_path)->required();
  eval_cmd->add_option("--dets", o.dets_path)->required();
  auto* dets2 = eval_cmd->add_option("--dets2", o.dets2_path);
  eval_cmd->add_flag("--fuse", o.fuse, "fuse --dets and --dets2 before scoring")->needs(dets2);
  eval_cmd->add_option("--out", o.out_path, "write the report as JSON");

  auto* localize_cmd = app.add_subcommand("localize", "add cameras found in an observation log");
  localize_cmd->add_option("--obs", o.obs_path)->required();
  add_override(*localize_cmd, o, "--eps", "cluster_eps_m", "clustering distance in metres");

  auto* validate_cmd = app.add_subcommand("validate", "check the registry against an observation log");
  validate_cmd->add_option("--obs", o.obs_path)->required();
  add_override(*validate_cmd, o, "--radius", "validate_radius_m", "confirmation radius in metres");
  validate_cmd->add_option("--out", o.out_path, "write the report as JSON");

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP API");
  add_override(*serve_cmd, o, "--port", "listen_port", "TCP port");
  add_override(*serve_cmd, o, "--host", "host", "bind address");

  auto* export_cmd = app.add_subcommand("export-exposure", "per-edge exposure table as CSV");
  export_cmd->add_option("--out", o.out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const AppConfig config = resolve_config(o.flags, o.config_path, env);
    validate_config(config);
    if (*import_cameras) return cmd_import_cameras(o, config, out);
    if (*import_graph) return cmd_import_graph(o, config, out);
    if (*route_cmd) return cmd_route(o, config, out);
    if (*eval_cmd) return cmd_eval(o, out);
    if (*localize_cmd) return cmd_localize(o, config, out);
    if (*validate_cmd) return cmd_validate(o, config, out);
    if (*serve_cmd) return cmd_serve(config, out);
    if (*export_cmd) return cmd_export_exposure(o, config, out);
  } catch (const NoPath& e) {
    err << "no path: " << e.what() << '\n';
    return kExitNoPath;
  } catch (const SnapFailure& e) {
    err << "no path: " << e.what() << '\n';
    return kExitNoPath;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidRequest& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidCamera& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const InvalidObservation& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const geo::GeoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const json_util::Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace cctv::service
