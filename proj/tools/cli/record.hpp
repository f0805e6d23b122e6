#pragma once

#include "confstab/conformal.hpp"

#include "json.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace confstab::cli {

using Json = nlohmann::ordered_json;

using Cell = std::variant<std::int64_t, double, std::string>;

/// Flat view of a command's main result used by the csv and plot formats.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  int plot_x = 0;
  int plot_y = 1;
};

struct RunRecord {
  std::string command;
  Json params = Json::object();
  Json results = Json::object();
  std::vector<ResidualReport> residuals;
  std::vector<std::string> warnings;
  std::uint64_t seed = 0;
  Table table;

  bool residuals_pass() const;
};

enum class Format { kJson, kCsv, kPlot };

Json to_json(const ResidualReport& report);
Json to_json(const RunRecord& record);

/// Non-finite doubles become JSON null.
Json number(double v);

/// %.17g, so values round-trip exactly.
std::string format_double(double v);

void write_json(std::ostream& os, const RunRecord& record);
void write_csv(std::ostream& os, const Table& table);
void write_plot(std::ostream& os, const Table& table);
void write(std::ostream& os, const RunRecord& record, Format format);

}  // namespace confstab::cli
