#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "fracspec/commands.hpp"
#include "fracspec/errors.hpp"

namespace fracspec {

namespace {

using ordered = nlohmann::ordered_json;

ordered number(double value) {
  if (std::isfinite(value)) return value;
  return nullptr;
}

ordered pairs_json(const std::vector<std::pair<std::string, double>>& items) {
  ordered out = ordered::object();
  for (const auto& [key, value] : items) out[key] = number(value);
  return out;
}

void write_atomically(const std::filesystem::path& path, const std::string& body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << body;
    out.flush();
    if (!out) throw IoError("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace

bool Report::ok() const {
  if (!errors.empty()) return false;
  for (const auto& v : verdicts) {
    if (!v.ok()) return false;
  }
  return true;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string render_json(const Report& report, const std::string& timestamp) {
  ordered doc;
  doc["tool"] = "fracspec";
  doc["version"] = kToolVersion;
  doc["command"] = report.command;
  doc["fingerprint"] = report.fingerprint;
  doc["status"] = report.ok() ? "pass" : "fail";
  doc["config"] = ordered::parse(report.config.dump());
  ordered verdicts = ordered::array();
  for (const auto& v : report.verdicts) {
    ordered item;
    item["name"] = v.name;
    item["status"] = to_string(v.status);
    item["measured"] = pairs_json(v.measured);
    item["tolerances"] = pairs_json(v.tolerances);
    if (!v.note.empty()) item["note"] = v.note;
    verdicts.push_back(std::move(item));
  }
  doc["verdicts"] = std::move(verdicts);
  doc["results"] = ordered::parse(report.results.dump());
  ordered errors = ordered::array();
  for (const auto& e : report.errors) {
    errors.push_back({{"stage", e.stage}, {"type", e.type}, {"message", e.message}});
  }
  doc["errors"] = std::move(errors);
  ordered curves = ordered::array();
  for (const auto& c : report.curves) {
    curves.push_back({{"name", c.name}, {"columns", c.columns}, {"rows", c.rows.size()}});
  }
  doc["curves"] = std::move(curves);
  doc["timestamp"] = timestamp;
  return doc.dump(2) + "\n";
}

std::string render_csv(const CurveTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string current_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::filesystem::path> write_report(const Report& report,
                                                const std::filesystem::path& directory,
                                                const std::vector<std::string>& formats,
                                                const std::string& timestamp) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory.string() + ": " + ec.message());
  const std::string stem = report.command + "-" + report.fingerprint;
  std::vector<std::filesystem::path> written;
  for (const auto& format : formats) {
    if (format == "json") {
      const auto path = directory / (stem + ".json");
      write_atomically(path, render_json(report, timestamp));
      written.push_back(path);
    } else if (format == "csv") {
      for (const auto& curve : report.curves) {
        const auto path = directory / (stem + "-" + curve.name + ".csv");
        write_atomically(path, render_csv(curve));
        written.push_back(path);
      }
    } else {
      throw IoError("unknown report format '" + format + "'");
    }
  }
  return written;
}

}  // namespace fracspec
