#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace sparsevar {

using Date = std::chrono::sys_days;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws Error on malformed input.
Date parse_date(std::string_view text);

std::string format_date(Date d);

/// Parses an ISO-8601 timestamp with a time component and returns the UTC
/// calendar day it falls on. Accepts a 'T' or ' ' separator, optional
/// fractional seconds and a trailing 'Z' or +HH:MM / -HH:MM offset
/// (no offset means UTC).
Date parse_timestamp_utc_day(std::string_view text);

inline Date next_day(Date d) { return d + std::chrono::days{1}; }

unsigned days_in_month(int year, unsigned month);

}  // namespace sparsevar
