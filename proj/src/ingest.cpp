#include "cocomment/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "cocomment/error.hpp"
#include "cocomment/utf8.hpp"

namespace cocomment {

using json = nlohmann::json;

RecordFormat parse_record_format(std::string_view name) {
  if (name == "jsonl" || name == "json") return RecordFormat::kJsonl;
  if (name == "csv") return RecordFormat::kCsv;
  throw ConfigError("unknown record format '" + std::string(name) + "' (expected jsonl or csv)");
}

namespace {

bool parse_int(std::string_view s, int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return parse_int(s.substr(pos, len), out);
}

bool is_bad_id(const std::string& id) {
  return id.empty() || id.find_first_of("\t\n\r") != std::string::npos;
}

class Collector {
 public:
  Collector(ParseResult& result, bool strict) : result_(result), strict_(strict) {}

  void malformed(std::size_t line, std::string reason) {
    if (strict_)
      throw InputError("malformed record at line " + std::to_string(line) + ": " + reason);
    ++result_.malformed_count;
    if (result_.malformed.size() < ParseResult::kMaxReported)
      result_.malformed.push_back({line, std::move(reason)});
  }

  void accept(std::size_t line, InteractionRecord record) {
    if (auto why = validate_record(record)) {
      malformed(line, *why);
      return;
    }
    result_.records.push_back(std::move(record));
  }

 private:
  ParseResult& result_;
  bool strict_;
};

std::optional<InteractionRecord> record_from_json(const json& obj, std::string& why) {
  if (!obj.is_object()) {
    why = "not a JSON object";
    return std::nullopt;
  }
  InteractionRecord r;
  auto get_id = [&](const char* key, std::string& out) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
      why = std::string("missing or non-string '") + key + "'";
      return false;
    }
    out = it->get<std::string>();
    return true;
  };
  if (!get_id("commenter", r.commenter_id) || !get_id("influencer", r.influencer_id) ||
      !get_id("post", r.post_id))
    return std::nullopt;

  auto ts = obj.find("ts");
  if (ts == obj.end()) {
    why = "missing 'ts'";
    return std::nullopt;
  }
  if (ts->is_string()) {
    auto parsed = parse_timestamp(ts->get<std::string>());
    if (!parsed) {
      why = "unparseable timestamp '" + ts->get<std::string>() + "'";
      return std::nullopt;
    }
    r.timestamp = *parsed;
  } else if (ts->is_number_integer()) {
    r.timestamp = Timestamp{std::chrono::seconds{ts->get<std::int64_t>()}};
  } else {
    why = "'ts' must be an ISO-8601 string or epoch seconds";
    return std::nullopt;
  }

  if (auto it = obj.find("text"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) {
      why = "'text' must be a string";
      return std::nullopt;
    }
    r.text = it->get<std::string>();
  }
  if (auto it = obj.find("is_reply"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) {
      why = "'is_reply' must be a boolean";
      return std::nullopt;
    }
    r.is_reply = it->get<bool>();
  }
  if (auto it = obj.find("sentiment"); it != obj.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      why = "'sentiment' must be an integer";
      return std::nullopt;
    }
    const auto v = it->get<std::int64_t>();
    if (v < -4 || v > 4) {
      why = "sentiment " + std::to_string(v) + " outside [-4, 4]";
      return std::nullopt;
    }
    r.sentiment = static_cast<int>(v);
  }
  return r;
}

void parse_jsonl(std::istream& in, Collector& out) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!utf8::is_valid(line)) {
      out.malformed(line_no, "invalid UTF-8");
      continue;
    }
    json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) {
      out.malformed(line_no, "invalid JSON");
      continue;
    }
    std::string why;
    auto rec = record_from_json(obj, why);
    if (!rec) {
      out.malformed(line_no, why);
      continue;
    }
    out.accept(line_no, std::move(*rec));
  }
  if (in.bad()) throw InputError("I/O error while reading records");
}

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
  std::string error;
};

// RFC-4180 reader over the whole buffer. Quoted fields may span lines.
std::vector<CsvRow> split_csv(const std::string& data) {
  std::vector<CsvRow> rows;
  std::size_t i = 0, line = 1;
  const std::size_t n = data.size();
  while (i < n) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool row_done = false;
    bool blank = true;
    while (!row_done) {
      if (i < n && data[i] == '"') {
        blank = false;
        ++i;
        bool closed = false;
        while (i < n) {
          if (data[i] == '"') {
            if (i + 1 < n && data[i + 1] == '"') {
              field.push_back('"');
              i += 2;
            } else {
              ++i;
              closed = true;
              break;
            }
          } else {
            if (data[i] == '\n') ++line;
            field.push_back(data[i++]);
          }
        }
        if (!closed) {
          row.error = "unterminated quoted field";
          i = n;
          row_done = true;
          break;
        }
        if (i < n && data[i] != ',' && data[i] != '\n' && data[i] != '\r') {
          row.error = "unexpected character after closing quote";
          while (i < n && data[i] != '\n') ++i;
        }
      } else {
        while (i < n && data[i] != ',' && data[i] != '\n' && data[i] != '\r') {
          if (data[i] == '"' && row.error.empty()) row.error = "stray quote in unquoted field";
          if (data[i] != ' ' && data[i] != '\t') blank = false;
          field.push_back(data[i++]);
        }
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (i >= n) {
        row_done = true;
      } else if (data[i] == ',') {
        blank = false;
        ++i;
      } else {
        if (data[i] == '\r') ++i;
        if (i < n && data[i] == '\n') ++i;
        ++line;
        row_done = true;
      }
    }
    if (blank && row.fields.size() == 1 && row.error.empty()) continue;
    rows.push_back(std::move(row));
  }
  return rows;
}

void parse_csv(std::istream& in, Collector& out) {
  std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw InputError("I/O error while reading records");
  if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) data.erase(0, 3);
  auto rows = split_csv(data);
  if (rows.empty()) return;

  const CsvRow& header = rows.front();
  if (!header.error.empty()) throw InputError("CSV header: " + header.error);
  std::unordered_map<std::string, std::size_t> column;
  for (std::size_t c = 0; c < header.fields.size(); ++c) column[header.fields[c]] = c;
  for (const char* required : {"commenter", "influencer", "post", "ts"})
    if (!column.contains(required))
      throw InputError(std::string("CSV header lacks required column '") + required + "'");

  auto col = [&](const char* name) -> std::optional<std::size_t> {
    auto it = column.find(name);
    if (it == column.end()) return std::nullopt;
    return it->second;
  };
  const auto c_commenter = *col("commenter"), c_influencer = *col("influencer"),
             c_post = *col("post"), c_ts = *col("ts");
  const auto c_text = col("text"), c_reply = col("is_reply"), c_sent = col("sentiment");

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (!row.error.empty()) {
      out.malformed(row.line, row.error);
      continue;
    }
    if (row.fields.size() != header.fields.size()) {
      out.malformed(row.line, "expected " + std::to_string(header.fields.size()) + " fields, got " +
                                  std::to_string(row.fields.size()));
      continue;
    }
    bool utf8_ok = true;
    for (const auto& f : row.fields) utf8_ok = utf8_ok && utf8::is_valid(f);
    if (!utf8_ok) {
      out.malformed(row.line, "invalid UTF-8");
      continue;
    }
    InteractionRecord rec;
    rec.commenter_id = row.fields[c_commenter];
    rec.influencer_id = row.fields[c_influencer];
    rec.post_id = row.fields[c_post];
    auto ts = parse_timestamp(row.fields[c_ts]);
    if (!ts) {
      out.malformed(row.line, "unparseable timestamp '" + row.fields[c_ts] + "'");
      continue;
    }
    rec.timestamp = *ts;
    if (c_text && !row.fields[*c_text].empty()) rec.text = row.fields[*c_text];
    if (c_reply && !row.fields[*c_reply].empty()) {
      const auto& v = row.fields[*c_reply];
      if (v == "true" || v == "1") {
        rec.is_reply = true;
      } else if (v == "false" || v == "0") {
        rec.is_reply = false;
      } else {
        out.malformed(row.line, "is_reply must be true/false/1/0");
        continue;
      }
    }
    if (c_sent && !row.fields[*c_sent].empty()) {
      int v = 0;
      if (!parse_int(row.fields[*c_sent], v)) {
        out.malformed(row.line, "sentiment must be an integer");
        continue;
      }
      rec.sentiment = v;
    }
    out.accept(row.line, std::move(rec));
  }
}

}  // namespace

std::optional<std::string> validate_record(const InteractionRecord& r) {
  if (is_bad_id(r.commenter_id)) return "empty or invalid commenter id";
  if (is_bad_id(r.influencer_id)) return "empty or invalid influencer id";
  if (is_bad_id(r.post_id)) return "empty or invalid post id";
  if (r.sentiment && (*r.sentiment < -4 || *r.sentiment > 4))
    return "sentiment " + std::to_string(*r.sentiment) + " outside [-4, 4]";
  return std::nullopt;
}

ParseResult parse_records(std::istream& in, RecordFormat format, bool strict) {
  ParseResult result;
  Collector collector(result, strict);
  if (format == RecordFormat::kJsonl)
    parse_jsonl(in, collector);
  else
    parse_csv(in, collector);
  return result;
}

ParseResult parse_records_file(const std::filesystem::path& path, RecordFormat format,
                               bool strict) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input " + path.string());
  return parse_records(in, format, strict);
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
  using namespace std::chrono;
  int y, mo, d, h, mi, se;
  if (!parse_fixed(s, 0, 4, y) || s.size() < 19 || s[4] != '-' || !parse_fixed(s, 5, 2, mo) ||
      s[7] != '-' || !parse_fixed(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') ||
      !parse_fixed(s, 11, 2, h) || s[13] != ':' || !parse_fixed(s, 14, 2, mi) || s[16] != ':' ||
      !parse_fixed(s, 17, 2, se))
    return std::nullopt;
  std::size_t pos = 19;
  if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
    ++pos;
    const std::size_t start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == start) return std::nullopt;
  }
  minutes offset{0};
  if (pos < s.size()) {
    if (s[pos] == 'Z' || s[pos] == 'z') {
      ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
      const int sign = s[pos] == '-' ? -1 : 1;
      int oh, om;
      if (!parse_fixed(s, pos + 1, 2, oh)) return std::nullopt;
      std::size_t mpos = pos + 3;
      if (mpos < s.size() && s[mpos] == ':') ++mpos;
      if (!parse_fixed(s, mpos, 2, om)) return std::nullopt;
      if (oh > 23 || om > 59) return std::nullopt;
      offset = minutes{sign * (oh * 60 + om)};
      pos = mpos + 2;
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;
  if (h > 23 || mi > 59 || se > 60) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{se} - offset;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(ts);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{ts - day_point};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

namespace {

json record_to_json(const InteractionRecord& r) {
  json j;
  j["commenter"] = r.commenter_id;
  j["influencer"] = r.influencer_id;
  j["post"] = r.post_id;
  j["ts"] = format_timestamp(r.timestamp);
  if (r.text) j["text"] = *r.text;
  if (r.is_reply) j["is_reply"] = *r.is_reply;
  if (r.sentiment) j["sentiment"] = *r.sentiment;
  return j;
}

}  // namespace

std::string record_to_jsonl(const InteractionRecord& record) { return record_to_json(record).dump(); }

std::vector<std::string> Snapshot::commenters() const {
  std::set<std::string> all;
  for (const auto& [post, members] : commenters_per_post) all.insert(members.begin(), members.end());
  return {all.begin(), all.end()};
}

const std::string& Snapshot::influencer_of(const std::string& post_id) const {
  auto it = std::lower_bound(posts.begin(), posts.end(), post_id,
                             [](const PostDescriptor& p, const std::string& id) { return p.post_id < id; });
  if (it == posts.end() || it->post_id != post_id)
    throw InputError("post '" + post_id + "' is not part of window " + std::to_string(window_index));
  return it->influencer_id;
}

Snapshot make_snapshot(int window_index, std::vector<InteractionRecord> records) {
  Snapshot s;
  s.window_index = window_index;
  std::map<std::string, std::string> owner;
  std::map<std::string, std::set<std::string>> members;
  for (const auto& r : records) {
    auto [it, inserted] = owner.emplace(r.post_id, r.influencer_id);
    if (!inserted && it->second != r.influencer_id)
      throw InputError("post '" + r.post_id + "' attributed to both '" + it->second + "' and '" +
                       r.influencer_id + "'");
    members[r.post_id].insert(r.commenter_id);
  }
  for (const auto& [post, influencer] : owner) {
    s.posts.push_back({post, influencer});
    s.posts_by_influencer[influencer].push_back(post);
  }
  for (auto& [post, set] : members) s.commenters_per_post[post] = {set.begin(), set.end()};
  s.comments = std::move(records);
  return s;
}

std::int64_t window_number(Timestamp ts, const WindowSpec& spec) {
  using namespace std::chrono;
  if (spec.length <= seconds::zero()) throw ConfigError("window length must be positive");
  // 1970-01-05 was a Monday.
  const sys_days monday{year{1970} / January / 5};
  const sys_seconds reference = monday + days{(spec.anchor - Monday).count()};
  const auto local = ts + spec.utc_offset;
  const auto delta = (local - reference).count();
  const auto len = spec.length.count();
  auto q = delta / len;
  if (delta % len != 0 && delta < 0) --q;
  return q;
}

std::vector<Snapshot> window_partition(std::span<const InteractionRecord> records,
                                       const WindowSpec& spec) {
  std::map<std::int64_t, std::vector<InteractionRecord>> by_window;
  for (const auto& r : records) by_window[window_number(r.timestamp, spec)].push_back(r);
  std::vector<Snapshot> out;
  if (by_window.empty()) return out;
  const auto first = by_window.begin()->first;
  for (auto& [number, recs] : by_window)
    out.push_back(make_snapshot(static_cast<int>(number - first + 1), std::move(recs)));
  return out;
}

Snapshot filter_single_post_commenters(const Snapshot& snapshot) {
  std::unordered_map<std::string, std::size_t> post_count;
  for (const auto& [post, members] : snapshot.commenters_per_post)
    for (const auto& c : members) ++post_count[c];
  auto keep = [&](const std::string& c) {
    auto it = post_count.find(c);
    return it != post_count.end() && it->second >= 2;
  };

  Snapshot out;
  out.window_index = snapshot.window_index;
  for (const auto& [post, members] : snapshot.commenters_per_post) {
    std::vector<std::string> kept;
    std::copy_if(members.begin(), members.end(), std::back_inserter(kept), keep);
    if (!kept.empty()) out.commenters_per_post.emplace(post, std::move(kept));
  }
  for (const auto& p : snapshot.posts)
    if (out.commenters_per_post.contains(p.post_id)) {
      out.posts.push_back(p);
      out.posts_by_influencer[p.influencer_id].push_back(p.post_id);
    }
  for (const auto& r : snapshot.comments)
    if (keep(r.commenter_id) && out.commenters_per_post.contains(r.post_id)) out.comments.push_back(r);
  return out;
}

void validate_snapshot(const Snapshot& s) {
  if (!std::is_sorted(s.posts.begin(), s.posts.end()))
    throw InputError("snapshot posts are not sorted by id");
  std::map<std::string, int> cell_count;
  for (const auto& [influencer, posts] : s.posts_by_influencer)
    for (const auto& p : posts) {
      ++cell_count[p];
      if (s.influencer_of(p) != influencer)
        throw InputError("post '" + p + "' listed under the wrong influencer");
    }
  for (const auto& [post, members] : s.commenters_per_post) {
    if (cell_count[post] != 1)
      throw InputError("post '" + post + "' must appear in exactly one influencer partition");
    if (members.empty()) throw InputError("post '" + post + "' has no commenters");
    if (std::adjacent_find(members.begin(), members.end(),
                           [](const auto& a, const auto& b) { return !(a < b); }) != members.end())
      throw InputError("commenters of post '" + post + "' are not a sorted set");
  }
  for (const auto& r : s.comments)
    if (auto why = validate_record(r)) throw InputError("snapshot comment: " + *why);
}

std::string snapshot_to_json(const Snapshot& s) {
  json j;
  j["window_index"] = s.window_index;
  j["posts"] = json::array();
  for (const auto& p : s.posts) j["posts"].push_back({{"post_id", p.post_id}, {"influencer_id", p.influencer_id}});
  j["commenters_per_post"] = s.commenters_per_post;
  j["posts_by_influencer"] = s.posts_by_influencer;
  j["comments"] = json::array();
  for (const auto& r : s.comments) j["comments"].push_back(record_to_json(r));
  return j.dump(1) + "\n";
}

Snapshot snapshot_from_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("snapshot is not a JSON object");
  try {
    Snapshot s;
    s.window_index = j.at("window_index").get<int>();
    for (const auto& p : j.at("posts"))
      s.posts.push_back({p.at("post_id").get<std::string>(), p.at("influencer_id").get<std::string>()});
    s.commenters_per_post = j.at("commenters_per_post").get<std::map<std::string, std::vector<std::string>>>();
    s.posts_by_influencer = j.at("posts_by_influencer").get<std::map<std::string, std::vector<std::string>>>();
    for (const auto& rj : j.at("comments")) {
      std::string why;
      auto rec = record_from_json(rj, why);
      if (!rec) throw InputError("snapshot comment: " + why);
      s.comments.push_back(std::move(*rec));
    }
    validate_snapshot(s);
    return s;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed snapshot JSON: ") + e.what());
  }
}

}  // namespace cocomment
