#include "sparsevar/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>

#include "sparsevar/error.hpp"

namespace sparsevar::csv {
namespace {

std::vector<std::string> split_line(const std::string& line, const std::string& source, std::size_t line_no) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) throw Error(source + ":" + std::to_string(line_no) + ": unterminated quoted field");
  out.push_back(std::move(field));
  for (auto& f : out) {
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
    std::size_t lead = 0;
    while (lead < f.size() && (f[lead] == ' ' || f[lead] == '\t')) ++lead;
    f.erase(0, lead);
  }
  return out;
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error("missing column '" + std::string(name) + "'");
}

Table parse(std::istream& in, const std::string& source_name) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
        static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
      line.erase(0, 3);
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto fields = split_line(line, source_name, line_no);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(source_name + ":" + std::to_string(line_no) + ": expected " + std::to_string(table.header.size()) +
                  " fields, found " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw Error(source_name + ": empty file");
  return table;
}

Table read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse(in, path.string());
}

double parse_double(std::string_view text, std::string_view context) {
  const std::string s(text);
  if (s.empty()) throw Error("empty numeric field in " + std::string(context));
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  const bool overflow = errno == ERANGE && std::isinf(v);  // underflow to subnormal is fine
  if (end != s.c_str() + s.size() || overflow) {
    throw Error("malformed number '" + s + "' in " + std::string(context));
  }
  return v;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

TimePanel read_panel(const std::filesystem::path& path) {
  const Table table = read(path);
  if (table.header.empty() || table.header.front() != "date") {
    throw Error(path.string() + ": first column must be 'date'");
  }
  TimePanel panel;
  panel.names.assign(table.header.begin() + 1, table.header.end());
  if (panel.names.empty()) throw Error(path.string() + ": no series columns");
  panel.values.resize(static_cast<Index>(table.rows.size()), static_cast<Index>(panel.names.size()));
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    panel.dates.push_back(parse_date(row[0]));
    for (std::size_t j = 1; j < row.size(); ++j) {
      const double v = parse_double(row[j], path.string() + " series '" + table.header[j] + "' at " + row[0]);
      if (!std::isfinite(v)) {
        throw Error(path.string() + ": non-finite value in series '" + table.header[j] + "' at " + row[0]);
      }
      panel.values(static_cast<Index>(r), static_cast<Index>(j - 1)) = v;
    }
  }
  panel.validate_daily();
  return panel;
}

void write_panel(std::ostream& out, const TimePanel& panel) {
  out << "date";
  for (const auto& n : panel.names) out << ',' << escape(n);
  out << '\n';
  for (Index t = 0; t < panel.rows(); ++t) {
    out << format_date(panel.dates[static_cast<std::size_t>(t)]);
    for (Index j = 0; j < panel.cols(); ++j) out << ',' << format_double(panel.values(t, j));
    out << '\n';
  }
}

void write_panel(const std::filesystem::path& path, const TimePanel& panel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_panel(out, panel);
}

}  // namespace sparsevar::csv
