#include <charconv>
#include <cmath>
#include <sstream>

#include "cocomment/cli.hpp"
#include "cocomment/error.hpp"
#include "cocomment/io.hpp"
#include "cocomment/parallel.hpp"

namespace cocomment::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const Settings& s, const std::string& key, T min_value) {
  const std::string& v = s.at(key);
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || out < min_value)
    throw ConfigError(key + ": expected an integer >= " + std::to_string(min_value) + ", got '" + v + "'");
  return out;
}

double parse_real(const Settings& s, const std::string& key) {
  const std::string& v = s.at(key);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  return out;
}

bool parse_bool(const Settings& s, const std::string& key) {
  const std::string& v = s.at(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::chrono::weekday parse_weekday(const std::string& v) {
  static const char* names[] = {"sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};
  for (unsigned i = 0; i < 7; ++i)
    if (v == names[i]) return std::chrono::weekday{i};
  throw ConfigError("anchor: expected a weekday name such as monday, got '" + v + "'");
}

std::vector<PlantedGroup> parse_planted(const std::string& v) {
  std::vector<PlantedGroup> groups;
  std::stringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto x = item.find('x');
    Settings tmp{{"size", item.substr(0, x)}, {"posts", x == std::string::npos ? "" : item.substr(x + 1)}};
    try {
      groups.push_back({parse_integer<std::uint32_t>(tmp, "size", 2), parse_integer<std::uint32_t>(tmp, "posts", 1)});
    } catch (const ConfigError&) {
      throw ConfigError("planted: expected SIZExPOSTS items such as 20x15, got '" + item + "'");
    }
  }
  return groups;
}

}  // namespace

const Settings& default_settings() {
  static const Settings defaults = {
      {"input", ""},
      {"format", "jsonl"},
      {"strict_parse", "false"},
      {"window_days", "7"},
      {"anchor", "monday"},
      {"utc_offset_minutes", "0"},
      {"alpha", "0.05"},
      {"strict", "true"},
      {"exact_max_posts", "64"},
      {"seed", "1"},
      {"threads", "0"},
      {"clique_cap", "0"},
      {"max_pair_incidences", "500000000"},
      {"stopwords", ""},
      {"min_occurrences", "10"},
      {"popular_fraction", "0.01"},
      {"top_terms", "100"},
      {"lexicon", ""},
      {"min_comments", "100"},
      {"kruskal_p", "0.01"},
      {"gini_top", "5"},
      {"dir", "."},
      {"n_commenters", "500"},
      {"n_influencers", "20"},
      {"n_posts", "200"},
      {"engagement_skew", "1.0"},
      {"post_size", "zipf"},
      {"post_size_constant", "10"},
      {"post_size_exponent", "1.0"},
      {"post_size_max", "50"},
      {"planted", ""},
  };
  return defaults;
}

// Paths are location, not content: inputs are identified by digest instead.
bool affects_output(const std::string& key) { return key != "threads" && key != "dir" && key != "input"; }

Settings parse_config_text(std::string_view text, const std::string& origin) {
  Settings out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    const std::string where = origin + ":" + std::to_string(number);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (!default_settings().contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

Settings read_config_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const InputError&) {
    throw ConfigError("cannot read config file " + path.string());
  }
  return parse_config_text(text, path.string());
}

PipelineConfig resolve_config(const Settings& given) {
  Settings s = default_settings();
  for (const auto& [k, v] : given) {
    if (!s.contains(k)) throw ConfigError("unknown setting '" + k + "'");
    s[k] = v;
  }
  PipelineConfig c;
  c.input = s["input"];
  const std::string& format = s["format"];
  if (format == "jsonl") c.format = RecordFormat::kJsonl;
  else if (format == "csv") c.format = RecordFormat::kCsv;
  else throw ConfigError("format: expected jsonl or csv, got '" + format + "'");
  c.strict_parse = parse_bool(s, "strict_parse");
  c.window.length = std::chrono::days{parse_integer<int>(s, "window_days", 1)};
  c.window.anchor = parse_weekday(s["anchor"]);
  const int offset = parse_integer<int>(s, "utc_offset_minutes", -24 * 60);
  if (offset >= 24 * 60) throw ConfigError("utc_offset_minutes: must lie strictly between -1440 and 1440");
  c.window.utc_offset = std::chrono::minutes{offset};

  c.alpha = parse_real(s, "alpha");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha: must lie in (0, 1), got " + s["alpha"]);
  c.strict = parse_bool(s, "strict");
  c.exact_max_posts = parse_integer<std::size_t>(s, "exact_max_posts", 0);
  c.seed = parse_integer<std::uint64_t>(s, "seed", 0);
  c.threads = parse_integer<unsigned>(s, "threads", 0);
  if (c.threads == 0) c.threads = default_thread_count();
  if (const auto cap = parse_integer<std::size_t>(s, "clique_cap", 0); cap > 0) c.clique_cap = cap;
  c.max_pair_incidences = parse_integer<std::size_t>(s, "max_pair_incidences", 1);

  c.stopwords_path = s["stopwords"];
  if (!c.stopwords_path.empty()) {
    try {
      c.text.stopwords = text::read_stopwords(c.stopwords_path);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
  }
  c.text.min_occurrences = parse_integer<std::size_t>(s, "min_occurrences", 0);
  c.text.popular_fraction = parse_real(s, "popular_fraction");
  if (!(c.text.popular_fraction >= 0.0 && c.text.popular_fraction < 1.0))
    throw ConfigError("popular_fraction: must lie in [0, 1)");
  c.text.top_terms = parse_integer<std::size_t>(s, "top_terms", 1);
  c.lexicon_path = s["lexicon"];
  c.min_comments = parse_integer<std::size_t>(s, "min_comments", 1);
  c.kruskal_p = parse_real(s, "kruskal_p");
  if (!(c.kruskal_p > 0.0 && c.kruskal_p < 1.0)) throw ConfigError("kruskal_p: must lie in (0, 1)");
  c.gini_top = parse_integer<std::size_t>(s, "gini_top", 1);

  c.dir = s["dir"];
  if (c.dir.empty()) throw ConfigError("dir: must not be empty");

  auto& y = c.synth;
  y.n_commenters = parse_integer<std::uint32_t>(s, "n_commenters", 1);
  y.n_influencers = parse_integer<std::uint32_t>(s, "n_influencers", 1);
  y.n_posts = parse_integer<std::uint32_t>(s, "n_posts", 1);
  y.engagement_skew = parse_real(s, "engagement_skew");
  if (s["post_size"] == "zipf") y.post_sizes.kind = PostSizeDistribution::Kind::kZipf;
  else if (s["post_size"] == "constant") y.post_sizes.kind = PostSizeDistribution::Kind::kConstant;
  else throw ConfigError("post_size: expected zipf or constant, got '" + s["post_size"] + "'");
  y.post_sizes.constant = parse_integer<std::uint32_t>(s, "post_size_constant", 1);
  y.post_sizes.exponent = parse_real(s, "post_size_exponent");
  y.post_sizes.max = parse_integer<std::uint32_t>(s, "post_size_max", 1);
  y.planted_groups = parse_planted(s["planted"]);
  y.seed = c.seed;
  y.window_length = c.window.length;
  validate_spec(y);

  c.settings = std::move(s);
  return c;
}

}  // namespace cocomment::cli
