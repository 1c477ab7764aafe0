#pragma once

#include <httplib.h>

#include "cctv/service/state.hpp"

namespace cctv::service {

/// Registers the JSON API on `server`:
///   GET  /health   -> 200 "ok"
///   GET  /cameras  -> registry GeoJSON with zone rings
///   GET  /route?from=lat,lon&to=lat,lon&mode=&lambda=&beta=&penalty=
///   POST /cameras  -> 201 with the stored Feature
/// Errors are {"error": message, "field": name?} with 400 (bad input),
/// 404 (unknown path) or 422 (no path). Every response carries CORS headers
/// for the configured origin.
void install_routes(httplib::Server& server, StateStore& store);

}  // namespace cctv::service
