#include "cctv/service/state.hpp"

#include <filesystem>

#include "cctv/graph_io.hpp"
#include "cctv/json_util.hpp"
#include "cctv/registry_io.hpp"

namespace cctv::service {

std::shared_ptr<const Snapshot> make_snapshot(std::vector<Camera> cameras, std::shared_ptr<const RoadGraph> graph,
                                              const ExposureParams& params) {
  auto snap = std::make_shared<Snapshot>();
  snap->exposure = annotate_graph(*graph, cameras, params);
  snap->cameras = std::move(cameras);
  snap->graph = std::move(graph);
  return snap;
}

std::vector<Camera> load_registry_file(const std::string& path) {
  if (!std::filesystem::exists(path)) return {};
  return parse_registry(json_util::read_file(path));
}

RoadGraph load_graph_file(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw InputError("graph file " + path + " not found (run import-graph first)");
  }
  return parse_graph_json(json_util::read_file(path));
}

StateStore::StateStore(AppConfig config) : config_(std::move(config)) {
  publish(make_snapshot({}, std::make_shared<const RoadGraph>(), {config_.sample_interval_m}));
}

void StateStore::load() {
  std::lock_guard writer(writer_mutex_);
  auto graph = std::make_shared<const RoadGraph>(load_graph_file(config_.graph_path));
  publish(make_snapshot(load_registry_file(config_.registry_path), std::move(graph), {config_.sample_interval_m}));
}

std::shared_ptr<const Snapshot> StateStore::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

void StateStore::publish(std::shared_ptr<const Snapshot> next) {
  std::lock_guard lock(snapshot_mutex_);
  current_ = std::move(next);
}

Camera StateStore::add_camera(Camera camera) {
  validate_camera(camera);
  std::lock_guard writer(writer_mutex_);
  const auto base = snapshot();
  for (const Camera& c : base->cameras) {
    if (c.id == camera.id) throw InvalidCamera("id", "camera \"" + camera.id + "\" already exists");
  }
  std::vector<Camera> cameras = base->cameras;
  cameras.push_back(camera);
  json_util::write_file_atomic(config_.registry_path, serialize_registry(cameras));
  publish(make_snapshot(std::move(cameras), base->graph, {config_.sample_interval_m}));
  return camera;
}

}  // namespace cctv::service
