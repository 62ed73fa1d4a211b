#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "recaudit/types.hpp"

namespace recaudit {

// Input tables are delimiter-separated text with a mandatory header row that
// must match the documented schema exactly.
struct TableFormat {
  char delimiter = ',';
};

// `user_id,item_id,timestamp,rating` with an empty rating meaning "none".
// Throws ParseError naming the 1-based line and field of the first problem.
std::vector<RawEvent> parse_interactions(std::istream& in, const TableFormat& fmt = {});

// Collapses events into one record per (user, item): first_ts is the
// earliest event, last_ts the latest, last_rating the rating of the latest
// rated event (timestamp ties resolved by file order, later wins). Output is
// sorted by (user_id, item_id).
Records deduplicate(const std::vector<RawEvent>& events);

// `item_id,genre,count` with raw nonnegative tag counts, normalized per item.
// Items whose counts sum to zero are absent from the table.
GenreTable load_genres(std::istream& in, const TableFormat& fmt = {});

// `item_id,author_id,position,gender`; the smallest position per item is the
// primary author. gender is one of female/male/unknown/ambiguous or empty,
// with the latter two collapsing to unknown.
AuthorTable load_authors(std::istream& in, const TableFormat& fmt = {});

// Path conveniences; ParseError messages gain a "file:" prefix.
std::vector<RawEvent> parse_interactions_file(const std::filesystem::path&,
                                              const TableFormat& fmt = {});
Records load_interactions_file(const std::filesystem::path&, const TableFormat& fmt = {});
GenreTable load_genres_file(const std::filesystem::path&, const TableFormat& fmt = {});
AuthorTable load_authors_file(const std::filesystem::path&, const TableFormat& fmt = {});

}  // namespace recaudit
