#pragma once

#include <map>
#include <string>
#include <vector>

#include "cpsparse/cut_pursuit.hpp"
#include "cpsparse/graph_build.hpp"

namespace cpsparse {

enum class CloudFormat { kAuto, kPlyAscii, kXyz };

/* kAuto picks the format from the extension (.ply, otherwise xyz). */
CloudFormat resolve_format(const std::string& path, CloudFormat format);

/* ASCII PLY (x, y and optional z of the vertex element; other elements and
 * properties are skipped) or whitespace-separated XYZ. Malformed input
 * raises ParseError with the offending line, binary PLY raises IoError. */
PointCloud read_cloud(const std::string& path, CloudFormat format = CloudFormat::kAuto);

/* Writes coordinates with 17 significant digits. PLY supports d <= 3. */
void write_cloud(const PointCloud& cloud, const std::string& path, CloudFormat format = CloudFormat::kAuto);

struct MetricsReport {
  Index input_points = 0;
  Index output_points = 0;
  int iterations = 0;
  std::vector<double> energy_trace;
  std::map<std::string, double> phase_timings_ms;
  std::map<std::string, std::string> config;

  double compression_percent() const {
    return input_points > 0 ? 100.0 * static_cast<double>(output_points) / static_cast<double>(input_points) : 0.0;
  }

  /* JSON with keys in sorted order */
  std::string to_json() const;
  static MetricsReport from_json(const std::string& text);
};

void write_metrics(const MetricsReport& report, const std::string& path);

}  // namespace cpsparse
