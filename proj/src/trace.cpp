#include "pim/trace.hpp"

#include <ostream>
#include <sstream>

#include "pim/format.hpp"

namespace pim {

std::size_t TraceTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return columns.size();
}

void write_csv(std::ostream& out, const TraceTable& table) {
  out << "time";
  for (const std::string& column : table.columns) out << "," << column;
  out << "\n";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << format_double(table.times[r]);
    for (double value : table.rows[r]) out << "," << format_double(value);
    out << "\n";
  }
}

std::string to_csv(const TraceTable& table) {
  std::ostringstream out;
  write_csv(out, table);
  return std::move(out).str();
}

}  // namespace pim
