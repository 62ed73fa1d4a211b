#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace recaudit::cal {

// All calendar arithmetic is UTC. A Month is a (year, month) pair.
using Month = std::chrono::year_month;

// Epoch seconds of the first instant of the month.
int64_t month_start(Month m);

// Calendar month containing the given epoch timestamp.
Month month_of(int64_t epoch_seconds);

Month add_months(Month m, int n);

// Signed month count `to - from`.
int months_between(Month from, Month to);

// "YYYY-MM-DD" -> epoch seconds at midnight UTC. Throws ConfigError on
// malformed input.
int64_t parse_date(std::string_view yyyy_mm_dd);

// "YYYY-MM" -> Month. Throws ConfigError on malformed input.
Month parse_month(std::string_view yyyy_mm);

// "YYYY-MM"
std::string label(Month m);

}  // namespace recaudit::cal
