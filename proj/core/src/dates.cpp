#include "sparsevar/dates.hpp"

#include <charconv>
#include <cstdio>

#include "sparsevar/error.hpp"

namespace sparsevar {
namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error("malformed date '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw Error("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
  }
  const int y = parse_int(text.substr(0, 4), text);
  const int m = parse_int(text.substr(5, 2), text);
  const int d = parse_int(text.substr(8, 2), text);
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    throw Error("invalid calendar date '" + std::string(text) + "'");
  }
  return Date{ymd};
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

Date parse_timestamp_utc_day(std::string_view text) {
  if (text.size() < 16 || (text[10] != 'T' && text[10] != ' ')) {
    throw Error("malformed timestamp '" + std::string(text) + "'");
  }
  const Date day = parse_date(text.substr(0, 10));
  const int hour = parse_int(text.substr(11, 2), text);
  if (text[13] != ':') throw Error("malformed timestamp '" + std::string(text) + "'");
  const int minute = parse_int(text.substr(14, 2), text);
  if (hour > 23 || minute > 59) throw Error("malformed timestamp '" + std::string(text) + "'");

  // Everything after HH:MM is optional seconds, fraction and zone designator.
  std::string_view rest = text.substr(16);
  if (!rest.empty() && rest.front() == ':') {
    if (rest.size() < 3) throw Error("malformed timestamp '" + std::string(text) + "'");
    parse_int(rest.substr(1, 2), text);
    rest.remove_prefix(3);
    if (!rest.empty() && rest.front() == '.') {
      rest.remove_prefix(1);
      while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') rest.remove_prefix(1);
    }
  }
  int offset_minutes = 0;
  if (rest.empty() || rest == "Z" || rest == "z") {
    offset_minutes = 0;
  } else if ((rest.front() == '+' || rest.front() == '-') && (rest.size() == 6 || rest.size() == 5 || rest.size() == 3)) {
    const int sign = rest.front() == '+' ? 1 : -1;
    const int oh = parse_int(rest.substr(1, 2), text);
    int om = 0;
    if (rest.size() == 6) {
      if (rest[3] != ':') throw Error("malformed timestamp '" + std::string(text) + "'");
      om = parse_int(rest.substr(4, 2), text);
    } else if (rest.size() == 5) {
      om = parse_int(rest.substr(3, 2), text);
    }
    offset_minutes = sign * (oh * 60 + om);
  } else {
    throw Error("malformed timestamp '" + std::string(text) + "'");
  }

  // Local time minus offset gives UTC.
  const int local_minutes = hour * 60 + minute;
  const int utc_minutes = local_minutes - offset_minutes;
  int shift = 0;
  if (utc_minutes < 0) shift = -1;
  if (utc_minutes >= 24 * 60) shift = 1;
  return day + std::chrono::days{shift};
}

unsigned days_in_month(int year, unsigned month) {
  using namespace std::chrono;
  return static_cast<unsigned>((std::chrono::year{year} / std::chrono::month{month} / last).day());
}

}  // namespace sparsevar
