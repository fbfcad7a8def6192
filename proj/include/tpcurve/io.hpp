#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tpcurve/types.hpp"

namespace tpc {

// Fixed 17-significant-digit float formatting: round-trips doubles and keeps
// report bytes identical across runs.
inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal JSON writer for reports. Values are emitted in insertion order
// with fixed float formatting; nlohmann/json is used for parsing only.
class JsonWriter {
 public:
  JsonWriter& field(const std::string& key, double v) { return raw(key, format_g17(v)); }
  JsonWriter& field(const std::string& key, Eigen::Index v) {
    return raw(key, std::to_string(v));
  }
  JsonWriter& field(const std::string& key, int v) { return raw(key, std::to_string(v)); }
  JsonWriter& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
  JsonWriter& field(const std::string& key, const std::string& v) {
    return raw(key, "\"" + v + "\"");
  }
  JsonWriter& field(const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += format_g17(v[i]);
    }
    return raw(key, s + "]");
  }
  JsonWriter& field(const std::string& key, const std::vector<std::string>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += "\"" + v[i] + "\"";
    }
    return raw(key, s + "]");
  }
  JsonWriter& raw(const std::string& key, const std::string& value) {
    if (!body_.empty()) body_ += ",";
    body_ += "\n  \"" + key + "\": " + value;
    return *this;
  }

  std::string str() const { return "{" + body_ + "\n}\n"; }

 private:
  std::string body_;
};

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

template <typename Scalar>
void write_curve_json(const std::string& path, const PolylineT<Scalar>& p) {
  std::string s = "{\n  \"dim\": " + std::to_string(p.dim()) +
                  ",\n  \"closed\": " + (p.closed ? "true" : "false") + ",\n  \"points\": [";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += "\n    [";
    for (Eigen::Index r = 0; r < p.dim(); ++r) {
      if (r) s += ", ";
      s += format_g17(static_cast<double>(p.points(r, i)));
    }
    s += "]";
  }
  s += "\n  ]\n}\n";
  write_text_file(path, s);
}

template <typename Scalar = double>
PolylineT<Scalar> read_curve_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open curve file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("curve file " + path + ": JSON parse error: " + e.what());
  }
  if (!j.contains("dim") || !j["dim"].is_number_integer())
    throw std::invalid_argument("curve file " + path + ": missing integer field 'dim'");
  if (!j.contains("closed") || !j["closed"].is_boolean())
    throw std::invalid_argument("curve file " + path + ": missing boolean field 'closed'");
  if (!j.contains("points") || !j["points"].is_array())
    throw std::invalid_argument("curve file " + path + ": missing array field 'points'");

  const Eigen::Index dim = j["dim"].get<Eigen::Index>();
  const auto& pts = j["points"];
  PolylineT<Scalar> p;
  p.closed = j["closed"].get<bool>();
  p.points.resize(dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_array() || static_cast<Eigen::Index>(pts[i].size()) != dim)
      throw std::invalid_argument("curve file " + path + ": point " + std::to_string(i) +
                                  " does not have 'dim' coordinates");
    for (Eigen::Index r = 0; r < dim; ++r)
      p.points(r, static_cast<Eigen::Index>(i)) = pts[i][static_cast<std::size_t>(r)].get<Scalar>();
  }
  p.validate();
  return p;
}

template <typename Scalar>
void write_curve_csv(const std::string& path, const PolylineT<Scalar>& p) {
  std::string s = p.dim() == 3 ? "x,y,z\n" : "x,y\n";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    for (Eigen::Index r = 0; r < p.dim(); ++r) {
      if (r) s += ",";
      s += format_g17(static_cast<double>(p.points(r, i)));
    }
    s += "\n";
  }
  write_text_file(path, s);
}

template <typename Scalar = double>
PolylineT<Scalar> read_curve_csv(const std::string& path, bool closed) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open curve file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("curve file " + path + ": empty");
  const Eigen::Index dim = line.find('z') != std::string::npos ? 3 : 2;
  std::vector<std::vector<Scalar>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<Scalar> row;
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(static_cast<Scalar>(std::stod(cell)));
    if (static_cast<Eigen::Index>(row.size()) != dim)
      throw std::invalid_argument("curve file " + path + ": row with wrong coordinate count");
    rows.push_back(row);
  }
  PolylineT<Scalar> p;
  p.closed = closed;
  p.points.resize(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index r = 0; r < dim; ++r)
      p.points(r, static_cast<Eigen::Index>(i)) = rows[i][static_cast<std::size_t>(r)];
  p.validate();
  return p;
}

// Reads .json or .csv by extension.
template <typename Scalar = double>
PolylineT<Scalar> read_curve(const std::string& path, bool csv_closed = true) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return read_curve_csv<Scalar>(path, csv_closed);
  return read_curve_json<Scalar>(path);
}

}  // namespace tpc
