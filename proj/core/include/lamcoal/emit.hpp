#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lamcoal {

using Cell = std::variant<std::string, double, std::int64_t>;

/// A rectangular result table with a fixed column order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Provenance written into every output header.
struct OutputMeta {
  std::uint64_t seed = 0;
  /// Omitted from the output when empty (reproducible mode).
  std::string timestamp;
};

enum class Format { csv, json };
Format parse_format(const std::string& name);

std::string tool_version();
/// ISO 8601 UTC time of the call.
std::string current_timestamp();

/// CSV: a '#' provenance line, the header row, then rows; doubles as %.17g.
void emit_csv(const Table& table, const OutputMeta& meta, std::ostream& out);
/// JSON object {"tool", "version", "seed", ["timestamp"], "columns", "rows"}.
void emit_json(const Table& table, const OutputMeta& meta, std::ostream& out);
void emit(const Table& table, const OutputMeta& meta, Format format, std::ostream& out);
/// Writes to `path`, or to stdout when path is empty or "-".
void emit_to(const Table& table, const OutputMeta& meta, Format format, const std::string& path);

/// Reads a table written by emit_json (doubles round-trip exactly; null reads as NaN).
Table read_json_table(std::istream& in, OutputMeta* meta = nullptr);

}  // namespace lamcoal
