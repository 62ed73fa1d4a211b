#include "recaudit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "recaudit/errors.hpp"

namespace recaudit {

const char* to_string(Gender g) {
  switch (g) {
    case Gender::female: return "female";
    case Gender::male: return "male";
    default: return "unknown";
  }
}

namespace {

void split_line(const std::string& line, char delim, std::vector<std::string>& out) {
  out.clear();
  size_t start = 0;
  for (;;) {
    size_t pos = line.find(delim, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Reads logical rows, skipping blank lines and stripping trailing '\r'.
// Reports 1-based physical line numbers.
class RowReader {
 public:
  RowReader(std::istream& in, char delim) : in_(in), delim_(delim) {}

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      split_line(line, delim_, fields);
      return true;
    }
    return false;
  }

  int line() const { return line_no_; }

 private:
  std::istream& in_;
  char delim_;
  int line_no_ = 0;
};

void expect_header(RowReader& rd, std::vector<std::string>& fields, const char* expected) {
  if (!rd.next(fields)) throw ParseError("empty input, expected header", 0, 0);
  std::ostringstream joined;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) joined << ',';
    joined << fields[i];
  }
  if (joined.str() != expected)
    throw ParseError("line 1: bad header '" + joined.str() + "', expected '" + expected + "'",
                     rd.line(), 1);
}

void require_fields(const RowReader& rd, const std::vector<std::string>& fields, size_t n) {
  if (fields.size() != n)
    throw ParseError("line " + std::to_string(rd.line()) + ": expected " + std::to_string(n) +
                         " fields, got " + std::to_string(fields.size()),
                     rd.line(), static_cast<int>(fields.size()));
}

int64_t parse_int(const RowReader& rd, const std::string& field, int column, const char* what) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError("line " + std::to_string(rd.line()) + ", field " + std::to_string(column) +
                         ": malformed " + what + " '" + field + "'",
                     rd.line(), column);
  return value;
}

[[noreturn]] void fail(const RowReader& rd, int column, const std::string& msg) {
  throw ParseError("line " + std::to_string(rd.line()) + ", field " + std::to_string(column) +
                       ": " + msg,
                   rd.line(), column);
}

struct PairKey {
  std::string user, item;
  bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
  size_t operator()(const PairKey& k) const {
    size_t a = std::hash<std::string>{}(k.user);
    size_t b = std::hash<std::string>{}(k.item);
    return a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  }
};

}  // namespace

std::vector<RawEvent> parse_interactions(std::istream& in, const TableFormat& fmt) {
  RowReader rd(in, fmt.delimiter);
  std::vector<std::string> f;
  expect_header(rd, f, "user_id,item_id,timestamp,rating");

  std::vector<RawEvent> events;
  while (rd.next(f)) {
    require_fields(rd, f, 4);
    if (f[0].empty()) fail(rd, 1, "empty user_id");
    if (f[1].empty()) fail(rd, 2, "empty item_id");
    RawEvent ev;
    ev.user_id = f[0];
    ev.item_id = f[1];
    ev.timestamp = parse_int(rd, f[2], 3, "timestamp");
    if (ev.timestamp <= 0) fail(rd, 3, "timestamp must be positive, got '" + f[2] + "'");
    if (!f[3].empty()) {
      int64_t r = parse_int(rd, f[3], 4, "rating");
      if (r < 1 || r > 5) fail(rd, 4, "rating out of range 1..5: '" + f[3] + "'");
      ev.rating = static_cast<int>(r);
    }
    events.push_back(std::move(ev));
  }
  return events;
}

Records deduplicate(const std::vector<RawEvent>& events) {
  struct Agg {
    int64_t first_ts;
    int64_t last_ts;
    std::optional<int> rating;
    int64_t rated_ts;
  };
  std::unordered_map<PairKey, Agg, PairKeyHash> pairs;
  pairs.reserve(events.size());

  for (const RawEvent& ev : events) {
    auto [it, fresh] = pairs.try_emplace(PairKey{ev.user_id, ev.item_id},
                                         Agg{ev.timestamp, ev.timestamp, ev.rating, ev.timestamp});
    if (fresh) continue;
    Agg& agg = it->second;
    agg.first_ts = std::min(agg.first_ts, ev.timestamp);
    agg.last_ts = std::max(agg.last_ts, ev.timestamp);
    // Latest rated event wins; at equal timestamps the later file position
    // wins, which is the event being processed now.
    if (ev.rating && (!agg.rating || ev.timestamp >= agg.rated_ts)) {
      agg.rating = ev.rating;
      agg.rated_ts = ev.timestamp;
    }
  }

  Records records;
  records.reserve(pairs.size());
  for (auto& [key, agg] : pairs)
    records.push_back({key.user, key.item, agg.first_ts, agg.last_ts, agg.rating});
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user_id, a.item_id) < std::tie(b.user_id, b.item_id);
  });
  return records;
}

GenreTable load_genres(std::istream& in, const TableFormat& fmt) {
  RowReader rd(in, fmt.delimiter);
  std::vector<std::string> f;
  expect_header(rd, f, "item_id,genre,count");

  // Raw counts per item in first-seen order; the vocabulary is fixed and
  // indices assigned only after the whole file is read.
  std::vector<std::string> item_order;
  std::unordered_map<std::string, std::vector<std::pair<std::string, int64_t>>> counts;
  std::map<std::string, uint32_t> vocab;

  while (rd.next(f)) {
    require_fields(rd, f, 3);
    if (f[0].empty()) fail(rd, 1, "empty item_id");
    if (f[1].empty()) fail(rd, 2, "empty genre");
    int64_t count = parse_int(rd, f[2], 3, "count");
    if (count < 0) fail(rd, 3, "negative count '" + f[2] + "'");
    if (count == 0) continue;
    auto [it, fresh] = counts.try_emplace(f[0]);
    if (fresh) item_order.push_back(f[0]);
    it->second.emplace_back(f[1], count);
    vocab.try_emplace(f[1], 0);
  }

  std::vector<std::string> vocabulary;
  vocabulary.reserve(vocab.size());
  for (auto& [name, idx] : vocab) {
    idx = static_cast<uint32_t>(vocabulary.size());
    vocabulary.push_back(name);
  }

  std::unordered_map<std::string, GenreTable::Row> rows;
  rows.reserve(counts.size());
  std::vector<int64_t> acc(vocabulary.size(), 0);
  for (const std::string& item : item_order) {
    double total = 0;
    std::vector<uint32_t> touched;
    for (const auto& [genre, count] : counts[item]) {
      uint32_t g = vocab[genre];
      if (acc[g] == 0) touched.push_back(g);
      acc[g] += count;
      total += static_cast<double>(count);
    }
    GenreTable::Row row;
    row.reserve(touched.size());
    std::sort(touched.begin(), touched.end());
    for (uint32_t g : touched) {
      row.emplace_back(g, static_cast<double>(acc[g]) / total);
      acc[g] = 0;
    }
    rows.emplace(item, std::move(row));
  }
  return GenreTable(std::move(vocabulary), std::move(rows));
}

AuthorTable load_authors(std::istream& in, const TableFormat& fmt) {
  RowReader rd(in, fmt.delimiter);
  std::vector<std::string> f;
  expect_header(rd, f, "item_id,author_id,position,gender");

  struct Primary {
    std::string author;
    int64_t position;
    int dup_line;  // line of a row tying the current minimal position, 0 if none
  };
  std::unordered_map<std::string, Primary> primaries;
  std::unordered_map<std::string, Gender> by_author;

  while (rd.next(f)) {
    require_fields(rd, f, 4);
    if (f[0].empty()) fail(rd, 1, "empty item_id");
    if (f[1].empty()) fail(rd, 2, "empty author_id");
    int64_t position = parse_int(rd, f[2], 3, "position");

    Gender g;
    if (f[3] == "female") g = Gender::female;
    else if (f[3] == "male") g = Gender::male;
    else if (f[3] == "unknown" || f[3] == "ambiguous" || f[3].empty()) g = Gender::unknown;
    else fail(rd, 4, "unrecognized gender '" + f[3] + "'");

    // First known label wins for an author; unknown never overrides.
    auto [ait, fresh] = by_author.try_emplace(f[1], g);
    if (!fresh && ait->second == Gender::unknown) ait->second = g;

    auto [it, first_row] = primaries.try_emplace(f[0], Primary{f[1], position, 0});
    if (!first_row) {
      Primary& p = it->second;
      if (position < p.position) {
        p = Primary{f[1], position, 0};
      } else if (position == p.position && p.dup_line == 0) {
        p.dup_line = rd.line();
      }
    }
  }

  // A tie is only an error when it survives as the minimal position.
  int first_dup_line = 0;
  std::string dup_item;
  for (const auto& [item, primary] : primaries) {
    if (primary.dup_line && (first_dup_line == 0 || primary.dup_line < first_dup_line)) {
      first_dup_line = primary.dup_line;
      dup_item = item;
    }
  }
  if (first_dup_line)
    throw ParseError("line " + std::to_string(first_dup_line) +
                         ": duplicate primary author position for item '" + dup_item + "'",
                     first_dup_line, 3);

  std::unordered_map<std::string, AuthorTable::PrimaryAuthor> by_item;
  by_item.reserve(primaries.size());
  for (const auto& [item, primary] : primaries)
    by_item.emplace(item, AuthorTable::PrimaryAuthor{primary.author, by_author[primary.author]});
  return AuthorTable(std::move(by_item), std::move(by_author));
}

namespace {

template <typename Fn>
auto load_file(const std::filesystem::path& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  try {
    return fn(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line, e.column);
  }
}

}  // namespace

std::vector<RawEvent> parse_interactions_file(const std::filesystem::path& path,
                                              const TableFormat& fmt) {
  return load_file(path, [&](std::istream& in) { return parse_interactions(in, fmt); });
}

Records load_interactions_file(const std::filesystem::path& path, const TableFormat& fmt) {
  return deduplicate(parse_interactions_file(path, fmt));
}

GenreTable load_genres_file(const std::filesystem::path& path, const TableFormat& fmt) {
  return load_file(path, [&](std::istream& in) { return load_genres(in, fmt); });
}

AuthorTable load_authors_file(const std::filesystem::path& path, const TableFormat& fmt) {
  return load_file(path, [&](std::istream& in) { return load_authors(in, fmt); });
}

}  // namespace recaudit
