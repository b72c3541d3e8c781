#pragma once

#include <string>

// single-header nlohmann/json from vendor/
#include "json.hpp"

#include "wsabi/run.hpp"

namespace wsabi {

/// Shortest round-trippable decimal form of a double ("%.17g"), shared by every
/// writer so reruns are byte-identical.
std::string format_double(double v);

std::uint64_t fnv1a(const std::string& data);

/// Trace CSV schema: n_samples,wall_clock_s,z_mean,z_variance,log_z_mean
void write_trace_csv(const std::string& path, const RunTrace& trace);

/// Strict reader: header and every row are validated; malformed rows raise with
/// their line number, and n_samples / wall_clock monotonicity is enforced.
RunTrace read_trace_csv(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

inline std::string sidecar_path(const std::string& trace_csv_path) {
    return trace_csv_path.substr(0, trace_csv_path.size() - 4) + ".json";
}

}  // namespace wsabi
