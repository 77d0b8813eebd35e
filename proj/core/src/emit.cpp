#include "lamcoal/emit.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>

#include "json.hpp"

#include "lamcoal/error.hpp"

#ifndef LAMCOAL_VERSION
#define LAMCOAL_VERSION "0.0.0"
#endif

namespace lamcoal {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw InvalidInput("table row has " + std::to_string(row.size()) + " cells, expected " +
                       std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw InvalidInput("unknown output format '" + name + "' (expected csv or json)");
}

std::string tool_version() { return LAMCOAL_VERSION; }

std::string current_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return csv_escape(*s);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::to_string(std::get<std::int64_t>(c));
}

}  // namespace

void emit_csv(const Table& table, const OutputMeta& meta, std::ostream& out) {
  out << "# lamcoal " << tool_version() << " seed=" << meta.seed;
  if (!meta.timestamp.empty()) out << " timestamp=" << meta.timestamp;
  out << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_escape(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i]);
    out << '\n';
  }
}

void emit_json(const Table& table, const OutputMeta& meta, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["tool"] = "lamcoal";
  doc["version"] = tool_version();
  doc["seed"] = meta.seed;
  if (!meta.timestamp.empty()) doc["timestamp"] = meta.timestamp;
  doc["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const auto& key = table.columns[i];
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v)) {
                obj[key] = v;
              } else {
                obj[key] = nullptr;
              }
            } else {
              obj[key] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

void emit(const Table& table, const OutputMeta& meta, Format format, std::ostream& out) {
  if (format == Format::csv) {
    emit_csv(table, meta, out);
  } else {
    emit_json(table, meta, out);
  }
}

void emit_to(const Table& table, const OutputMeta& meta, Format format, const std::string& path) {
  if (path.empty() || path == "-") {
    emit(table, meta, format, std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open output file '" + path + "'");
  emit(table, meta, format, out);
}

Table read_json_table(std::istream& in, OutputMeta* meta) {
  nlohmann::ordered_json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed JSON table: ") + e.what());
  }
  Table t;
  t.columns = doc.at("columns").get<std::vector<std::string>>();
  if (meta != nullptr) {
    meta->seed = doc.at("seed").get<std::uint64_t>();
    meta->timestamp = doc.contains("timestamp") ? doc["timestamp"].get<std::string>() : "";
  }
  for (const auto& obj : doc.at("rows")) {
    std::vector<Cell> row;
    for (const auto& key : t.columns) {
      const auto& v = obj.at(key);
      if (v.is_null()) {
        row.emplace_back(std::nan(""));
      } else if (v.is_string()) {
        row.emplace_back(v.get<std::string>());
      } else if (v.is_number_integer()) {
        row.emplace_back(v.get<std::int64_t>());
      } else {
        row.emplace_back(v.get<double>());
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace lamcoal
