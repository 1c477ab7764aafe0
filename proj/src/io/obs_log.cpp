#include "cctv/obs_log.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>

#include "cctv/errors.hpp"

namespace cctv {

namespace {

constexpr std::size_t kFieldCount = 10;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_number(std::string_view field, const char* name, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw InputError(std::string(name) + ": expected a number, got \"" + std::string(field) + "\"", line);
  }
  return v;
}

}  // namespace

std::vector<Observation> parse_observation_log(std::string_view text) {
  std::vector<Observation> out;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (!header_seen) {
      if (line != kObservationLogSchema) {
        throw InputError("expected schema header \"" + std::string(kObservationLogSchema) + "\"", line_no);
      }
      header_seen = true;
      continue;
    }

    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (fields.size() != kFieldCount) {
      throw InputError("expected " + std::to_string(kFieldCount) + " fields, got " + std::to_string(fields.size()),
                       line_no);
    }

    Observation o;
    o.timestamp = to_number(fields[0], "timestamp", line_no);
    o.observer = {to_number(fields[1], "lat", line_no), to_number(fields[2], "lon", line_no)};
    o.gps_sigma_m = to_number(fields[3], "gps_sigma_m", line_no);
    o.heading_deg = to_number(fields[4], "heading_deg", line_no);
    o.range_m = to_number(fields[5], "range_m", line_no);
    o.range_sigma_m = to_number(fields[6], "range_sigma_m", line_no);
    const auto kind = parse_camera_kind(fields[7]);
    if (!kind) throw InputError("kind: expected directed or round", line_no);
    o.kind = *kind;
    o.score = to_number(fields[8], "score", line_no);
    o.image_ref = std::string(fields[9]);
    o.id = o.image_ref.empty() ? "obs-" + std::to_string(line_no) : o.image_ref;
    try {
      validate_observation(o);
    } catch (const InvalidObservation& e) {
      throw InputError(e.what(), line_no);
    }
    out.push_back(std::move(o));
  }
  if (!header_seen) throw InputError("empty observation log (missing \"cctv-obs/1\" header)", 1);
  return out;
}

std::string serialize_observation_log(std::span<const Observation> observations) {
  std::ostringstream os;
  os << kObservationLogSchema << '\n' << std::setprecision(17);
  for (const Observation& o : observations) {
    os << o.timestamp << ',' << o.observer.lat << ',' << o.observer.lon << ',' << o.gps_sigma_m << ','
       << o.heading_deg << ',' << o.range_m << ',' << o.range_sigma_m << ',' << to_string(o.kind) << ',' << o.score
       << ',' << o.image_ref << '\n';
  }
  return os.str();
}

}  // namespace cctv
