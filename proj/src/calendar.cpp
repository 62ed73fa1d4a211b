#include "recaudit/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "recaudit/errors.hpp"

namespace recaudit::cal {

namespace chr = std::chrono;

int64_t month_start(Month m) {
  chr::sys_days d = chr::sys_days{m.year() / m.month() / 1};
  return static_cast<int64_t>(d.time_since_epoch().count()) * 86400;
}

Month month_of(int64_t epoch_seconds) {
  chr::sys_seconds s{chr::seconds{epoch_seconds}};
  chr::year_month_day ymd{chr::floor<chr::days>(s)};
  return ymd.year() / ymd.month();
}

Month add_months(Month m, int n) {
  return m + chr::months{n};
}

int months_between(Month from, Month to) {
  return static_cast<int>((to.year() - from.year()).count()) * 12 +
         static_cast<int>(static_cast<unsigned>(to.month())) -
         static_cast<int>(static_cast<unsigned>(from.month()));
}

namespace {

int parse_component(std::string_view s, size_t pos, size_t len, std::string_view whole) {
  int value = 0;
  if (pos + len > s.size()) throw ConfigError("malformed date '" + std::string(whole) + "'");
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, value);
  if (ec != std::errc{} || ptr != s.data() + pos + len)
    throw ConfigError("malformed date '" + std::string(whole) + "'");
  return value;
}

}  // namespace

int64_t parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-')
    throw ConfigError("malformed date '" + std::string(s) + "', expected YYYY-MM-DD");
  int y = parse_component(s, 0, 4, s);
  int m = parse_component(s, 5, 2, s);
  int d = parse_component(s, 8, 2, s);
  chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                          chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ConfigError("invalid calendar date '" + std::string(s) + "'");
  chr::sys_days days{ymd};
  return static_cast<int64_t>(days.time_since_epoch().count()) * 86400;
}

Month parse_month(std::string_view s) {
  if (s.size() != 7 || s[4] != '-')
    throw ConfigError("malformed month '" + std::string(s) + "', expected YYYY-MM");
  int y = parse_component(s, 0, 4, s);
  int m = parse_component(s, 5, 2, s);
  Month ym = chr::year{y} / chr::month{static_cast<unsigned>(m)};
  if (!ym.ok()) throw ConfigError("invalid calendar month '" + std::string(s) + "'");
  return ym;
}

std::string label(Month m) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(m.year()),
                static_cast<unsigned>(m.month()));
  return buf;
}

}  // namespace recaudit::cal
