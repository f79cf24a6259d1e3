#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cocomment {

using Timestamp = std::chrono::sys_seconds;

// One comment event.
struct InteractionRecord {
  std::string commenter_id;
  std::string influencer_id;
  std::string post_id;
  Timestamp timestamp{};
  std::optional<std::string> text;
  std::optional<bool> is_reply;
  std::optional<int> sentiment;  // -4..+4

  bool operator==(const InteractionRecord&) const = default;
};

enum class RecordFormat { kJsonl, kCsv };

RecordFormat parse_record_format(std::string_view name);

struct MalformedLine {
  std::size_t line = 0;  // 1-based line where the record starts
  std::string reason;
};

struct ParseResult {
  std::vector<InteractionRecord> records;
  std::size_t malformed_count = 0;
  std::vector<MalformedLine> malformed;  // first kMaxReported entries
  static constexpr std::size_t kMaxReported = 100;
};

// Parses a JSONL or CSV interaction trace. Records keep input order.
// Malformed lines are counted; with `strict` any malformed line raises an
// InputError naming the first offending line. Blank lines are ignored.
ParseResult parse_records(std::istream& in, RecordFormat format, bool strict = false);
ParseResult parse_records_file(const std::filesystem::path& path, RecordFormat format,
                               bool strict = false);

// ISO-8601 "YYYY-MM-DD[T ]hh:mm:ss[.frac][Z|+hh:mm|-hh:mm]"; no zone means UTC.
std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

// Record validity: non-empty ids without tab/newline, sentiment in range.
std::optional<std::string> validate_record(const InteractionRecord& record);

std::string record_to_jsonl(const InteractionRecord& record);

struct WindowSpec {
  std::chrono::seconds length = std::chrono::days{7};
  std::chrono::weekday anchor = std::chrono::Monday;
  std::chrono::minutes utc_offset{0};
};

struct PostDescriptor {
  std::string post_id;
  std::string influencer_id;

  auto operator<=>(const PostDescriptor&) const = default;
};

// All posts and unique-commenter sets of one time window.
struct Snapshot {
  int window_index = 0;
  std::vector<PostDescriptor> posts;                                  // sorted by post id
  std::map<std::string, std::vector<std::string>> commenters_per_post;  // sorted, unique
  std::map<std::string, std::vector<std::string>> posts_by_influencer;  // sorted, unique
  std::vector<InteractionRecord> comments;

  bool operator==(const Snapshot&) const = default;

  // Sorted unique commenters over all posts.
  std::vector<std::string> commenters() const;
  const std::string& influencer_of(const std::string& post_id) const;
};

// Builds the post/commenter index of a window from its records. Throws
// InputError if one post id is attributed to two influencers.
Snapshot make_snapshot(int window_index, std::vector<InteractionRecord> records);

// Absolute window number of an instant (windows start at local midnight on
// the anchor weekday).
std::int64_t window_number(Timestamp ts, const WindowSpec& spec);

// Partitions records into windows. Indices count calendar windows from the
// first non-empty one (index 1); empty windows are omitted, so indices can
// skip across gaps.
std::vector<Snapshot> window_partition(std::span<const InteractionRecord> records,
                                       const WindowSpec& spec);

// Single pass: drops commenters that appear in only one post's set, their
// comments, and posts left without commenters.
Snapshot filter_single_post_commenters(const Snapshot& snapshot);

// Throws InputError if a snapshot violates its structural invariants.
void validate_snapshot(const Snapshot& snapshot);

// JSON export with sorted keys; snapshot_from_json(snapshot_to_json(s)) == s.
std::string snapshot_to_json(const Snapshot& snapshot);
Snapshot snapshot_from_json(std::string_view json);

}  // namespace cocomment
