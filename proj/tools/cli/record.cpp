#include "record.hpp"

#include "confstab/version.hpp"

#include <cmath>
#include <cstdio>

namespace confstab::cli {

bool RunRecord::residuals_pass() const {
  for (const auto& r : residuals)
    if (!r.pass) return false;
  return true;
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const ResidualReport& report) {
  return Json{{"identity", report.identity_name},
              {"max_abs_residual", number(report.max_abs_residual)},
              {"points", report.points},
              {"step", report.step},
              {"tolerance", report.tolerance},
              {"pass", report.pass}};
}

Json to_json(const RunRecord& record) {
  Json residuals = Json::array();
  for (const auto& r : record.residuals) residuals.push_back(to_json(r));
  return Json{{"command", record.command},
              {"params", record.params},
              {"results", record.results},
              {"residuals", residuals},
              {"warnings", record.warnings},
              {"seed", record.seed},
              {"version", kVersion}};
}

void write_json(std::ostream& os, const RunRecord& record) {
  os << to_json(record).dump(2) << '\n';
}

namespace {

std::string cell_text(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  return std::get<std::string>(cell);
}

}  // namespace

void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t c = 0; c < table.header.size(); ++c) os << (c ? "," : "") << table.header[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
    os << '\n';
  }
}

void write_plot(std::ostream& os, const Table& table) {
  os << "# " << table.header.at(table.plot_x) << ' ' << table.header.at(table.plot_y) << '\n';
  for (const auto& row : table.rows) {
    os << cell_text(row.at(table.plot_x)) << ' ' << cell_text(row.at(table.plot_y)) << '\n';
  }
}

void write(std::ostream& os, const RunRecord& record, Format format) {
  switch (format) {
    case Format::kJson: write_json(os, record); break;
    case Format::kCsv: write_csv(os, record.table); break;
    case Format::kPlot: write_plot(os, record.table); break;
  }
}

}  // namespace confstab::cli
