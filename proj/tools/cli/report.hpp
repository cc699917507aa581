#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace ergotor::cli {

using Cell =
    std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

/// Rows of one experiment; rendered both as CSV and as an array of JSON
/// objects keyed by column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Header row, LF line endings, shortest round-trip doubles; fields holding a
/// comma, quote or newline are quoted.
std::string to_csv(const Table& table);
nlohmann::ordered_json to_json(const Table& table);

struct Report {
  nlohmann::ordered_json config;
  nlohmann::ordered_json summary;
  Table table;
};

/// {"tool", "version", "experiment", "config", "summary", "columns", "rows"}
/// with two-space indentation and a trailing newline.
std::string report_json(const Report& report);

}  // namespace ergotor::cli
