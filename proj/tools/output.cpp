#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace cfcli {

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? json(*d) : json(fmt(*d));
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string header_comment(const ReportEnvelope& r) {
  const auto seed = r.config.contains("seed") ? r.config["seed"].dump() : std::string("none");
  return "# cfaraday " + std::string(kVersion) + " command=" + r.command + " seed=" + seed +
         " config=" + hex64(config_hash(r.config));
}

void write_csv(const std::filesystem::path& path, const std::string& comment, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << comment << '\n';
  for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << cell_text(row[c]);
    out << '\n';
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Table checks_table(const ReportEnvelope& r) {
  Table t{"report", {"name", "expected", "actual", "residual", "pass", "informational", "note"}, {}};
  for (const auto& c : r.checks) {
    t.add({c.name, c.expected, c.actual, c.residual, std::string(c.pass ? "true" : "false"),
           std::string(c.informational ? "true" : "false"), c.note});
  }
  return t;
}

}  // namespace

bool ReportEnvelope::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

void ReportEnvelope::check(std::string name, std::string expected, std::string actual, double residual, bool ok,
                           std::string note_text) {
  checks.push_back({std::move(name), std::move(expected), std::move(actual), residual, ok, false,
                    std::move(note_text)});
}

void ReportEnvelope::note(std::string name, std::string expected, std::string actual, double residual, bool ok,
                          std::string note_text) {
  checks.push_back({std::move(name), std::move(expected), std::move(actual), residual, ok, true,
                    std::move(note_text)});
}

json ReportEnvelope::to_json(bool with_wall_time) const {
  json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["config"] = config;
  j["config_hash"] = hex64(config_hash(config));
  json rows = json::array();
  for (const auto& c : checks) {
    json row{{"name", c.name},         {"expected", c.expected}, {"actual", c.actual},
             {"pass", c.pass},         {"informational", c.informational}};
    row["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(fmt(c.residual));
    if (!c.note.empty()) row["note"] = c.note;
    rows.push_back(row);
  }
  j["checks"] = rows;
  j["pass"] = pass();
  if (with_wall_time) j["wall_time"] = wall_time;
  return j;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt_complex(double re, double im) {
  return fmt(re) + (std::signbit(im) ? "-" : "+") + fmt(std::abs(im)) + "i";
}

std::uint64_t config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

void write_outputs(const ReportEnvelope& report, const OutputOptions& options) {
  if (!options.dir) return;
  std::filesystem::create_directories(*options.dir);
  const std::string comment = header_comment(report);
  if (options.format == Format::Csv) {
    write_csv(*options.dir / "report.csv", comment, checks_table(report));
    for (const auto& t : report.tables) write_csv(*options.dir / (t.name + ".csv"), comment, t);
  } else {
    write_json(*options.dir / "report.json", report.to_json(false));
    for (const auto& t : report.tables) {
      json rows = json::array();
      for (const auto& row : t.rows) {
        json obj = json::object();
        for (std::size_t c = 0; c < row.size() && c < t.columns.size(); ++c) obj[t.columns[c]] = cell_json(row[c]);
        rows.push_back(obj);
      }
      write_json(*options.dir / (t.name + ".json"), json{{"version", kVersion},
                                                          {"config_hash", hex64(config_hash(report.config))},
                                                          {"columns", t.columns},
                                                          {"rows", rows}});
    }
  }
  if (options.svg) {
    for (const auto& p : report.plots) write_svg(*options.dir / (p.name + ".svg"), p);
  }
}

void write_svg(const std::filesystem::path& path, const Plot& plot) {
  const auto& title = plot.title;
  const auto& x_label = plot.x_label;
  const auto& y_label = plot.y_label;
  const auto& series = plot.series;
  const bool log_x = plot.log_x;
  const bool log_y = plot.log_y;
  const double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = tx(s.x[i]), y = ty(s.y[i]);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  if (!std::isfinite(x0)) x0 = 0.0, x1 = 1.0;
  if (!std::isfinite(y0)) y0 = 0.0, y1 = 1.0;
  auto px = [&](double x) { return left + (tx(x) - x0) / (x1 - x0) * (width - left - right); };
  auto py = [&](double y) { return height - bottom - (ty(y) - y0) / (y1 - y0) * (height - top - bottom); };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
      << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << x_label << (log_x ? " (log10)" : "") << "</text>\n";
  svg << "<text x=\"16\" y=\"" << height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 " << height / 2
      << ")\" text-anchor=\"middle\">" << y_label << (log_y ? " (log10)" : "") << "</text>\n";
  svg << "<text x=\"" << left << "\" y=\"" << height - bottom + 16 << "\" font-size=\"10\">" << fmt(x0) << "</text>\n";
  svg << "<text x=\"" << width - right << "\" y=\"" << height - bottom + 16
      << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(x1) << "</text>\n";
  svg << "<text x=\"" << left - 4 << "\" y=\"" << height - bottom << "\" font-size=\"10\" text-anchor=\"end\">"
      << fmt(y0) << "</text>\n";
  svg << "<text x=\"" << left - 4 << "\" y=\"" << top + 10 << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(y1)
      << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    svg << "<polyline fill=\"none\" stroke=\"" << colors[k % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(tx(s.x[i])) || !std::isfinite(ty(s.y[i]))) continue;
      svg << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << width - right - 8 << "\" y=\"" << top + 16 + 14 * k << "\" font-size=\"11\" fill=\""
        << colors[k % 4] << "\" text-anchor=\"end\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  std::ofstream out(path, std::ios::binary);
  out << svg.str();
}

}  // namespace cfcli
