#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emsi/calendar.hpp"

namespace emsi {

enum class Channel { Print, Online };

std::string channel_str(Channel c);
std::optional<Channel> channel_parse(const std::string& s);

/// One parsed media record.
struct MediaItem {
  std::string id;
  std::string outlet;
  Date published_at;
  std::optional<TimeOfDay> published_time;
  Channel channel = Channel::Print;
  std::string headline;
  std::string body;
  int word_count = 0;  // tokenizer count over headline + body

  std::string text() const;  // headline + body, the classified content

  bool operator==(const MediaItem&) const = default;
};

/// One skipped record with the reason; parsing never aborts on dirty records.
struct RecordError {
  int record = 0;       // 1-based record ordinal within the file
  size_t offset = 0;    // byte offset of the record separator
  std::string message;
};

struct ParseResult {
  std::vector<MediaItem> items;
  std::vector<RecordError> errors;
};

/// Parses a batch file: records separated by "==== ITEM ====" lines with
/// "Media:", "Datum:", "Publiceringsställe:", optional "Rubrik:" headers,
/// a "----" line, then the body. Records missing required fields are
/// collected into errors and skipped. Structural problems (stray content,
/// malformed separators, more than 500 records) throw DataError.
ParseResult parse_batch(const std::string& content, const std::string& source = "batch");

/// Inverse of parse_batch for valid items (no separator lines inside the
/// body, single-line headline). Item ids are not stored; parse_batch
/// regenerates them positionally.
std::string serialize_batch(const std::vector<MediaItem>& items);

/// Items sorted by (published_at, id) with unique ids.
class Corpus {
 public:
  Corpus() = default;
  static Corpus from_items(std::vector<MediaItem> items);  // sorts, checks ids

  const std::vector<MediaItem>& items() const { return items_; }
  size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  /// Keeps items satisfying `pred`, preserving order.
  template <typename Pred>
  Corpus filtered(Pred&& pred) const {
    Corpus out;
    for (const auto& item : items_) {
      if (pred(item)) out.items_.push_back(item);
    }
    return out;
  }

  std::string to_csv() const;  // no metadata header; callers prepend one
  static Corpus from_csv(const std::string& content, const std::string& origin = "corpus.csv");

 private:
  std::vector<MediaItem> items_;
};

}  // namespace emsi
