#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pim {

/// Sampled time series: one row per sample time, one value per column.
struct TraceTable {
  std::vector<std::string> columns;
  std::vector<double> times;
  std::vector<std::vector<double>> rows;  // rows.size() == times.size()

  std::size_t column_index(const std::string& name) const;
};

/// `time,<columns...>` header, then one line per row.
void write_csv(std::ostream& out, const TraceTable& table);
std::string to_csv(const TraceTable& table);

}  // namespace pim
