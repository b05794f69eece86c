#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sparsevar/panel.hpp"

namespace sparsevar::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
};

/// Reads a comma-separated file with a header row. Double-quoted fields may
/// contain commas; blank lines are skipped; a UTF-8 BOM is tolerated.
Table read(const std::filesystem::path& path);
Table parse(std::istream& in, const std::string& source_name);

double parse_double(std::string_view text, std::string_view context);

/// Fixed 17-significant-digit rendering so outputs are byte-reproducible.
std::string format_double(double value);

std::string escape(std::string_view field);

/// Panel CSV: `date,<series...>`, dates ISO-8601 and daily-contiguous.
TimePanel read_panel(const std::filesystem::path& path);
void write_panel(const std::filesystem::path& path, const TimePanel& panel);
void write_panel(std::ostream& out, const TimePanel& panel);

}  // namespace sparsevar::csv
