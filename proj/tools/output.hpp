#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace cfcli {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

enum class Format { Csv, Json };

/// Raised for anything the user can fix in the configuration; exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

struct CheckRow {
  std::string name;
  std::string expected;
  std::string actual;
  double residual = 0.0;
  bool pass = false;
  bool informational = false;
  std::string note;
};

/// Minimal line plot; log axes take log10 of the data.
struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string name;  // file stem
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_x = false;
  bool log_y = false;
};

struct ReportEnvelope {
  std::string command;
  json config;  // fully resolved
  std::vector<CheckRow> checks;
  std::vector<Table> tables;
  std::vector<Plot> plots;
  double wall_time = 0.0;

  bool pass() const;
  void check(std::string name, std::string expected, std::string actual, double residual, bool pass,
             std::string note = {});
  void note(std::string name, std::string expected, std::string actual, double residual, bool pass,
            std::string note);
  /// Without wall_time, so written reports are byte-identical across runs.
  json to_json(bool with_wall_time) const;
};

/// Shortest round-trip text for a double.
std::string fmt(double v);
std::string fmt_complex(double re, double im);

/// FNV-1a over the compact dump of the resolved config.
std::uint64_t config_hash(const json& config);
std::string hex64(std::uint64_t v);

struct OutputOptions {
  std::optional<std::filesystem::path> dir;
  Format format = Format::Csv;
  bool svg = false;
};

/// Writes every table plus the report (report.csv or report.json) into the
/// output directory. CSV files start with a comment line carrying the
/// version, seed and config hash. Plots are written only with `svg`.
void write_outputs(const ReportEnvelope& report, const OutputOptions& options);

void write_svg(const std::filesystem::path& path, const Plot& plot);

}  // namespace cfcli
