#include "emsi/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "emsi/csv.hpp"
#include "emsi/error.hpp"
#include "emsi/text.hpp"
#include "emsi/util.hpp"

namespace emsi {

namespace {

constexpr std::string_view kSeparator = "==== ITEM ====";
constexpr int kMaxRecordsPerFile = 500;

struct Line {
  std::string_view text;
  size_t offset;
};

std::vector<Line> split_lines(const std::string& content) {
  std::vector<Line> lines;
  size_t start = 0;
  for (size_t i = 0; i <= content.size(); ++i) {
    if (i == content.size() || content[i] == '\n') {
      std::string_view text(content.data() + start, i - start);
      if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
      lines.push_back({text, start});
      start = i + 1;
    }
  }
  // A trailing newline yields one empty phantom line; drop it.
  if (!lines.empty() && lines.back().text.empty() && lines.back().offset == content.size()) {
    lines.pop_back();
  }
  return lines;
}

bool header_value(std::string_view line, std::string_view key, std::string& out) {
  if (!starts_with(line, key)) return false;
  out = trim(line.substr(key.size()));
  return true;
}

}  // namespace

std::string channel_str(Channel c) { return c == Channel::Print ? "print" : "online"; }

std::optional<Channel> channel_parse(const std::string& s) {
  if (s == "print") return Channel::Print;
  if (s == "online") return Channel::Online;
  return std::nullopt;
}

std::string MediaItem::text() const {
  if (headline.empty()) return body;
  return headline + "\n" + body;
}

ParseResult parse_batch(const std::string& content, const std::string& source) {
  ParseResult result;
  const auto lines = split_lines(content);

  // Locate record separators; any other "====..." line is a framing error.
  std::vector<size_t> starts;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].text == kSeparator) {
      starts.push_back(i);
    } else if (starts_with(lines[i].text, "====")) {
      throw DataError(source + ": malformed record separator at byte " +
                      std::to_string(lines[i].offset));
    } else if (starts.empty() && !trim(lines[i].text).empty()) {
      throw DataError(source + ": content before first record separator at byte " +
                      std::to_string(lines[i].offset));
    }
  }
  if (static_cast<int>(starts.size()) > kMaxRecordsPerFile) {
    throw DataError(source + ": " + std::to_string(starts.size()) +
                    " records exceed the 500-per-file limit");
  }

  for (size_t r = 0; r < starts.size(); ++r) {
    const size_t begin = starts[r] + 1;
    const size_t end = (r + 1 < starts.size()) ? starts[r + 1] : lines.size();
    const int ordinal = static_cast<int>(r) + 1;

    auto fail = [&](const std::string& msg) {
      result.errors.push_back({ordinal, lines[starts[r]].offset, msg});
    };

    std::string outlet, datum, place, rubrik;
    bool have_outlet = false, have_datum = false, have_place = false, have_rubrik = false;
    size_t body_start = end;
    for (size_t i = begin; i < end; ++i) {
      const auto line = lines[i].text;
      if (line == "----") {
        body_start = i + 1;
        break;
      }
      std::string value;
      if (header_value(line, "Media:", value)) {
        outlet = value;
        have_outlet = true;
      } else if (header_value(line, "Datum:", value)) {
        datum = value;
        have_datum = true;
      } else if (header_value(line, "Publiceringsställe:", value)) {
        place = value;
        have_place = true;
      } else if (header_value(line, "Rubrik:", value)) {
        rubrik = value;
        have_rubrik = true;
      } else if (!trim(line).empty()) {
        fail("unrecognized header line: " + std::string(line));
        body_start = end + 1;  // poison: skip record
        break;
      }
    }
    if (body_start == end + 1) continue;  // poisoned above

    if (!have_outlet) {
      fail("missing Media header");
      continue;
    }
    if (!have_datum) {
      fail("missing Datum header");
      continue;
    }
    if (!have_place) {
      fail("missing Publiceringsställe header");
      continue;
    }

    // Datum: YYYY-MM-DD optionally followed by ", HH:MM:SS".
    std::string date_part = datum;
    std::optional<TimeOfDay> time;
    if (auto comma = datum.find(','); comma != std::string::npos) {
      date_part = trim(datum.substr(0, comma));
      const std::string time_part = trim(datum.substr(comma + 1));
      time = TimeOfDay::parse(time_part);
      if (!time) {
        fail("invalid time '" + time_part + "'");
        continue;
      }
    }
    const auto date = Date::parse(date_part);
    if (!date) {
      fail("invalid date '" + date_part + "'");
      continue;
    }

    std::optional<Channel> channel;
    if (place == "webb") channel = Channel::Online;
    else if (place == "print") channel = Channel::Print;
    if (!channel) {
      fail("invalid Publiceringsställe '" + place + "' (expected webb|print)");
      continue;
    }

    std::string body;
    for (size_t i = body_start; i < end; ++i) {
      body.append(lines[i].text);
      body += '\n';
    }
    while (!body.empty() && body.back() == '\n') body.pop_back();
    if (body_start >= end || trim(body).empty()) {
      fail("missing body");
      continue;
    }

    MediaItem item;
    char idbuf[16];
    std::snprintf(idbuf, sizeof(idbuf), "-%03d", ordinal);
    item.id = source + idbuf;
    item.outlet = outlet;
    item.published_at = *date;
    item.published_time = time;
    item.channel = *channel;
    if (have_rubrik) item.headline = rubrik;
    item.body = body;
    item.word_count = static_cast<int>(tokenize(item.text()).size());
    result.items.push_back(std::move(item));
  }
  return result;
}

std::string serialize_batch(const std::vector<MediaItem>& items) {
  if (static_cast<int>(items.size()) > kMaxRecordsPerFile) {
    throw DataError("cannot serialize " + std::to_string(items.size()) +
                    " records: 500-per-file limit");
  }
  std::string out;
  for (const auto& item : items) {
    if (item.headline.find('\n') != std::string::npos) {
      throw DataError("item " + item.id + ": multi-line headline is not representable");
    }
    for (const auto& line : split(item.body, '\n')) {
      if (starts_with(line, "====")) {
        throw DataError("item " + item.id + ": body contains a separator-like line");
      }
    }
    out += std::string(kSeparator) + "\n";
    out += "Media: " + item.outlet + "\n";
    out += "Datum: " + item.published_at.str();
    if (item.published_time) out += ", " + item.published_time->str();
    out += "\n";
    out += "Publiceringsställe: ";
    out += (item.channel == Channel::Online) ? "webb" : "print";
    out += "\n";
    if (!item.headline.empty()) out += "Rubrik: " + item.headline + "\n";
    out += "----\n";
    out += item.body;
    out += "\n";
  }
  return out;
}

Corpus Corpus::from_items(std::vector<MediaItem> items) {
  std::stable_sort(items.begin(), items.end(), [](const MediaItem& a, const MediaItem& b) {
    if (a.published_at != b.published_at) return a.published_at < b.published_at;
    return a.id < b.id;
  });
  std::unordered_set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) {
      throw DataError("duplicate item id '" + item.id + "'");
    }
  }
  Corpus corpus;
  corpus.items_ = std::move(items);
  return corpus;
}

std::string Corpus::to_csv() const {
  CsvWriter w;
  w.row({"id", "outlet", "date", "time", "channel", "word_count", "headline", "body"});
  for (const auto& item : items_) {
    w.row({item.id, item.outlet, item.published_at.str(),
           item.published_time ? item.published_time->str() : "", channel_str(item.channel),
           std::to_string(item.word_count), item.headline, item.body});
  }
  return w.str();
}

Corpus Corpus::from_csv(const std::string& content, const std::string& origin) {
  const CsvTable table = parse_csv(content, origin);
  const int c_id = table.require_column("id");
  const int c_outlet = table.require_column("outlet");
  const int c_date = table.require_column("date");
  const int c_time = table.require_column("time");
  const int c_channel = table.require_column("channel");
  const int c_wc = table.require_column("word_count");
  const int c_headline = table.require_column("headline");
  const int c_body = table.require_column("body");

  std::vector<MediaItem> items;
  items.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    MediaItem item;
    item.id = row[c_id];
    item.outlet = row[c_outlet];
    const auto date = Date::parse(row[c_date]);
    if (!date) throw DataError(origin + ": bad date '" + row[c_date] + "' in row " + std::to_string(r + 1));
    item.published_at = *date;
    if (!row[c_time].empty()) {
      item.published_time = TimeOfDay::parse(row[c_time]);
      if (!item.published_time) {
        throw DataError(origin + ": bad time '" + row[c_time] + "' in row " + std::to_string(r + 1));
      }
    }
    const auto channel = channel_parse(row[c_channel]);
    if (!channel) throw DataError(origin + ": bad channel '" + row[c_channel] + "'");
    item.channel = *channel;
    item.word_count = std::atoi(row[c_wc].c_str());
    item.headline = row[c_headline];
    item.body = row[c_body];
    items.push_back(std::move(item));
  }
  return from_items(std::move(items));
}

}  // namespace emsi
