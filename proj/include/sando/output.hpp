#pragma once

// Deterministic CSV and JSON-manifest emission. Numbers use the shortest
// decimal representation that round-trips; lines end in LF.

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sando/analysis.hpp"
#include "sando/errors.hpp"

namespace sando {

inline constexpr const char* k_version = "1.0.0";

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_)
      throw invalid_parameter_error("cannot open output file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& fields) {
    if (fields.size() != columns_)
      throw invalid_parameter_error("CSV row width mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

/// Writes a 1-D spectrum grid with the documented column schema.
inline void write_spectrum_csv(const std::string& path, const SweepGrid& g) {
  CsvWriter csv(path, {"f_ghz", "gain_db", "k_s", "k_i", "delta_k", "flag"});
  for (std::size_t i = 0; i < g.axis1.size(); ++i) {
    const GridCell& c = g.cells[i];
    const bool ok = c.flag == CellFlag::None;
    csv.row({format_number(g.axis1[i] / 1e9),
             ok ? format_number(c.gain_db) : "",
             ok ? format_number(c.k_s) : "",
             ok ? format_number(c.k_i) : "",
             ok ? format_number(c.delta_k) : "", to_string(c.flag)});
  }
}

/// Writes a 2-D grid in long form: one row per (axis2, axis1) cell.
inline void write_sweep_csv(const std::string& path, const SweepGrid& g) {
  CsvWriter csv(path, {g.axis2_name, g.axis1_name, "gain_db", "k_s", "k_i",
                       "delta_k", "flag"});
  const bool axis1_is_freq = g.axis1_name == "f_ghz";
  const bool axis2_is_freq = g.axis2_name == "f_p_ghz";
  for (std::size_t i2 = 0; i2 < g.axis2.size(); ++i2) {
    for (std::size_t i1 = 0; i1 < g.axis1.size(); ++i1) {
      const GridCell& c = g.at(i1, i2);
      const bool ok = c.flag == CellFlag::None;
      csv.row({format_number(axis2_is_freq ? g.axis2[i2] / 1e9 : g.axis2[i2]),
               format_number(axis1_is_freq ? g.axis1[i1] / 1e9 : g.axis1[i1]),
               ok ? format_number(c.gain_db) : "",
               ok ? format_number(c.k_s) : "",
               ok ? format_number(c.k_i) : "",
               ok ? format_number(c.delta_k) : "", to_string(c.flag)});
    }
  }
}

inline void write_manifest(const std::string& path,
                           const nlohmann::json& config_echo,
                           const std::string& subcommand,
                           const std::vector<std::string>& artifacts,
                           const nlohmann::json& grid_shapes,
                           double wall_time_s,
                           const nlohmann::json& extra = nlohmann::json::object()) {
  nlohmann::json m;
  m["version"] = k_version;
  m["subcommand"] = subcommand;
  m["config"] = config_echo;
  m["artifacts"] = artifacts;
  m["grid_shapes"] = grid_shapes;
  m["wall_time_s"] = wall_time_s;
  if (!extra.empty()) m["results"] = extra;
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw invalid_parameter_error("cannot open output file: " + path);
  out << m.dump(2) << '\n';
}

} // namespace sando
