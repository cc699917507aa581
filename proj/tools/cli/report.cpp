#include "report.hpp"

#include "ergotor/format.hpp"
#include "ergotor/version.hpp"

namespace ergotor::cli {

using nlohmann::ordered_json;

namespace {

std::string csv_field(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n\r") == std::string::npos) return v;
      std::string out = "\"";
      for (char c : v) {
        if (c == '"') out += '"';
        out += c;
      }
      return out + '"';
    }
  };
  return std::visit(Visitor{}, cell);
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  out += '\n';
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  std::vector<std::string> fields;
  for (const auto& c : table.columns) fields.push_back(csv_field(c));
  append_row(out, fields);
  for (const auto& row : table.rows) {
    fields.clear();
    for (const auto& cell : row) fields.push_back(csv_field(cell));
    append_row(out, fields);
  }
  return out;
}

ordered_json to_json(const Table& table) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    ordered_json item = ordered_json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::monostate>) {
              item[table.columns[i]] = nullptr;
            } else {
              item[table.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(item));
  }
  return rows;
}

std::string report_json(const Report& report) {
  ordered_json doc;
  doc["tool"] = "ergotor";
  doc["version"] = std::string(kVersion);
  doc["experiment"] = report.config.at("experiment");
  doc["config"] = report.config;
  doc["summary"] = report.summary;
  doc["columns"] = report.table.columns;
  doc["rows"] = to_json(report.table);
  return doc.dump(2) + "\n";
}

}  // namespace ergotor::cli
