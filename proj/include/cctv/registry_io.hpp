#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cctv/camera.hpp"
#include "cctv/json_util.hpp"

namespace cctv {

/// Parses a GeoJSON FeatureCollection of Point features into cameras.
/// Missing fov/range take the per-kind defaults; every camera is validated.
std::vector<Camera> parse_registry(std::string_view text);
std::string serialize_registry(const std::vector<Camera>& cameras);

Camera camera_from_feature(const json_util::Json& feature, const std::string& where);
json_util::Json camera_to_feature(const Camera& camera);

struct KindCounts {
  std::size_t directed = 0;
  std::size_t round = 0;
};
KindCounts count_kinds(const std::vector<Camera>& cameras);

/// "3 cameras (2 directed, 1 round)"
std::string registry_summary(const std::vector<Camera>& cameras);

}  // namespace cctv
