#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cctv/localizer.hpp"

namespace cctv {

inline constexpr std::string_view kObservationLogSchema = "cctv-obs/1";

/// Observation log: a "cctv-obs/1" header line, then one comma-separated
/// record per line:
///   timestamp,lat,lon,gps_sigma_m,heading_deg,range_m,range_sigma_m,kind,score,image_ref
/// Blank lines and lines starting with '#' are skipped. Records without an
/// image_ref get the id "obs-<line>". Errors carry the line number.
std::vector<Observation> parse_observation_log(std::string_view text);
std::string serialize_observation_log(std::span<const Observation> observations);

}  // namespace cctv
