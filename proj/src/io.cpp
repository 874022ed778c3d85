#include "cpsparse/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cpsparse/errors.hpp"

namespace cpsparse {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, std::size_t line) {
  double value = 0.0;
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  if (!tok.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) throw ParseError(line, "not a number: '" + tok + "'");
  if (!std::isfinite(value)) throw ParseError(line, "non-finite coordinate: '" + tok + "'");
  return value;
}

long long parse_count(const std::string& tok, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 0)
    throw ParseError(line, "invalid count: '" + tok + "'");
  return value;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

struct PlyProperty {
  std::string name;
  bool is_list = false;
};

struct PlyElement {
  std::string name;
  long long count = 0;
  std::vector<PlyProperty> props;
};

PointCloud read_ply(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&](bool required) {
    if (!std::getline(in, line)) {
      if (required) throw ParseError(lineno + 1, "unexpected end of file");
      return false;
    }
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  next_line(true);
  if (line != "ply") throw ParseError(lineno, "missing 'ply' magic");
  std::vector<PlyElement> elements;
  bool have_format = false;
  while (true) {
    next_line(true);
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "format") {
      if (tok.size() < 3) throw ParseError(lineno, "malformed format line");
      if (tok[1] != "ascii") throw IoError("unsupported PLY format '" + tok[1] + "' in '" + path + "' (ascii only)");
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw ParseError(lineno, "malformed element line");
      elements.push_back({tok[1], parse_count(tok[2], lineno), {}});
    } else if (tok[0] == "property") {
      if (elements.empty()) throw ParseError(lineno, "property before any element");
      if (tok.size() >= 2 && tok[1] == "list") {
        if (tok.size() != 5) throw ParseError(lineno, "malformed list property");
        elements.back().props.push_back({tok[4], true});
      } else {
        if (tok.size() != 3) throw ParseError(lineno, "malformed property line");
        elements.back().props.push_back({tok[2], false});
      }
    } else {
      throw ParseError(lineno, "unknown header keyword '" + tok[0] + "'");
    }
  }
  if (!have_format) throw ParseError(lineno, "missing format line");

  PointCloud cloud;
  bool found = false;
  for (const auto& el : elements) {
    if (el.name != "vertex") {
      for (long long i = 0; i < el.count; ++i) next_line(true);
      continue;
    }
    found = true;
    int column[3] = {-1, -1, -1};
    for (std::size_t k = 0; k < el.props.size(); ++k) {
      const auto& name = el.props[k].name;
      const int axis = name == "x" ? 0 : name == "y" ? 1 : name == "z" ? 2 : -1;
      if (axis >= 0) {
        if (el.props[k].is_list) throw ParseError(lineno, "coordinate property '" + name + "' is a list");
        column[axis] = static_cast<int>(k);
      }
    }
    if (column[0] < 0 || column[1] < 0) throw ParseError(lineno, "vertex element lacks x/y properties");
    const int d = column[2] >= 0 ? 3 : 2;
    cloud.points.resize(static_cast<Index>(el.count), d);
    for (long long i = 0; i < el.count; ++i) {
      if (!next_line(false)) throw ParseError(lineno + 1, "expected " + std::to_string(el.count) + " vertices, got " + std::to_string(i));
      const auto tok = split_ws(line);
      std::size_t pos = 0;
      for (std::size_t k = 0; k < el.props.size(); ++k) {
        if (pos >= tok.size()) throw ParseError(lineno, "too few values on vertex line");
        if (el.props[k].is_list) {
          pos += 1 + static_cast<std::size_t>(parse_count(tok[pos], lineno));
          continue;
        }
        for (int axis = 0; axis < d; ++axis)
          if (column[axis] == static_cast<int>(k)) cloud.points(static_cast<Index>(i), axis) = parse_double(tok[pos], lineno);
        if (column[0] != static_cast<int>(k) && column[1] != static_cast<int>(k) && column[2] != static_cast<int>(k))
          parse_double(tok[pos], lineno);
        ++pos;
      }
      if (pos != tok.size()) throw ParseError(lineno, "unexpected extra values on vertex line");
    }
  }
  if (!found) throw ParseError(lineno, "no vertex element");
  return cloud;
}

PointCloud read_xyz(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  Index d = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (d == 0) d = static_cast<Index>(tok.size());
    if (static_cast<Index>(tok.size()) != d)
      throw ParseError(lineno, "expected " + std::to_string(d) + " values, got " + std::to_string(tok.size()));
    for (const auto& t : tok) values.push_back(parse_double(t, lineno));
  }
  PointCloud cloud;
  if (d == 0) throw ParseError(lineno, "no points in '" + path + "'");
  const Index n = static_cast<Index>(values.size()) / d;
  cloud.points = Eigen::Map<const Field>(values.data(), n, d);
  return cloud;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CloudFormat resolve_format(const std::string& path, CloudFormat format) {
  if (format != CloudFormat::kAuto) return format;
  std::string ext;
  if (const auto dot = path.rfind('.'); dot != std::string::npos) ext = path.substr(dot + 1);
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext == "ply" ? CloudFormat::kPlyAscii : CloudFormat::kXyz;
}

PointCloud read_cloud(const std::string& path, CloudFormat format) {
  return resolve_format(path, format) == CloudFormat::kPlyAscii ? read_ply(path) : read_xyz(path);
}

void write_cloud(const PointCloud& cloud, const std::string& path, CloudFormat format) {
  const bool ply = resolve_format(path, format) == CloudFormat::kPlyAscii;
  const Index n = cloud.points.rows(), d = cloud.points.cols();
  if (ply && (d < 2 || d > 3)) throw IoError("PLY output needs 2 or 3 coordinates, got " + std::to_string(d));
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  if (ply) {
    out << "ply\nformat ascii 1.0\nelement vertex " << n << "\n";
    const char* names[3] = {"x", "y", "z"};
    for (Index j = 0; j < d; ++j) out << "property double " << names[j] << "\n";
    out << "end_header\n";
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) out << (j ? " " : "") << format_double(cloud.points(i, j));
    out << "\n";
  }
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string MetricsReport::to_json() const {
  nlohmann::json j;
  j["input_points"] = input_points;
  j["output_points"] = output_points;
  j["compression_percent"] = compression_percent();
  j["iterations"] = iterations;
  j["energy_trace"] = energy_trace;
  j["phase_timings_ms"] = phase_timings_ms;
  j["config"] = config;
  return j.dump(2);
}

MetricsReport MetricsReport::from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MetricsReport r;
    r.input_points = j.at("input_points").get<Index>();
    r.output_points = j.at("output_points").get<Index>();
    r.iterations = j.at("iterations").get<int>();
    r.energy_trace = j.at("energy_trace").get<std::vector<double>>();
    r.phase_timings_ms = j.at("phase_timings_ms").get<std::map<std::string, double>>();
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("metrics JSON: ") + e.what());
  }
}

void write_metrics(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << report.to_json() << "\n";
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace cpsparse
