#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "cctv/camera.hpp"
#include "cctv/exposure.hpp"
#include "cctv/graph.hpp"
#include "cctv/service/config.hpp"

namespace cctv::service {

/// Immutable view served to readers. Rebuilt and swapped after every write.
struct Snapshot {
  std::vector<Camera> cameras;
  std::shared_ptr<const RoadGraph> graph;
  ExposureMap exposure;
};

std::shared_ptr<const Snapshot> make_snapshot(std::vector<Camera> cameras, std::shared_ptr<const RoadGraph> graph,
                                              const ExposureParams& params);

/// Registry file; a missing file is an empty registry.
std::vector<Camera> load_registry_file(const std::string& path);
/// Native graph file; a missing file is an InputError.
RoadGraph load_graph_file(const std::string& path);

/// File-backed state with one serialized writer and lock-free-in-practice
/// readers: snapshot() hands out a shared pointer that stays valid across
/// concurrent writes.
class StateStore {
 public:
  explicit StateStore(AppConfig config);

  /// Loads registry and graph from the configured paths.
  void load();

  std::shared_ptr<const Snapshot> snapshot() const;
  const AppConfig& config() const { return config_; }

  /// Validates, rejects duplicate ids (InvalidCamera on "id"), persists the
  /// registry and publishes a new snapshot.
  Camera add_camera(Camera camera);

 private:
  void publish(std::shared_ptr<const Snapshot> next);

  AppConfig config_;
  mutable std::mutex snapshot_mutex_;
  std::mutex writer_mutex_;
  std::shared_ptr<const Snapshot> current_;
};

}  // namespace cctv::service
