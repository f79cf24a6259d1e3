#include "cocomment/text/tokenize.hpp"

#include <fstream>

#include <unicode/uchar.h>

#include "cocomment/error.hpp"
#include "cocomment/utf8.hpp"

namespace cocomment::text {

namespace {

bool is_space(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_marked(std::string_view raw) { return !raw.empty() && (raw.front() == '@' || raw.front() == '#'); }

}  // namespace

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char32_t cp : utf8::decode(text)) {
    if (is_space(cp)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      utf8::append(current, cp);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& raw : split_whitespace(text)) {
    if (is_marked(raw)) continue;
    std::string word;
    for (char32_t cp : utf8::decode(raw)) {
      if (utf8::is_word_char(cp) && !utf8::is_emoji(cp)) {
        utf8::append(word, utf8::to_lower(cp));
      } else if (!word.empty()) {
        out.push_back(std::move(word));
        word.clear();
      }
    }
    if (!word.empty()) out.push_back(std::move(word));
  }
  return out;
}

std::vector<std::string> preprocess(std::string_view text, const TextConfig& config) {
  std::vector<std::string> out;
  for (auto& w : word_tokens(text)) {
    if (config.stopwords.contains(w)) continue;
    if (config.stemmer) {
      auto stemmed = config.stemmer(w);
      if (!stemmed.empty()) out.push_back(std::move(stemmed));
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

CommentSurface analyze_comment(std::string_view text) {
  CommentSurface s;
  const auto cps = utf8::decode(text);
  s.length = cps.size();
  for (char32_t cp : cps)
    if (utf8::is_emoji(cp)) ++s.emojis;
  for (const auto& raw : split_whitespace(text)) {
    if (raw.size() > 1 && raw.front() == '@') {
      ++s.mentions;
      continue;
    }
    if (raw.size() > 1 && raw.front() == '#') {
      ++s.hashtags;
      continue;
    }
    std::size_t run = 0;
    bool all_upper = true;
    auto close_run = [&] {
      if (run >= 2 && all_upper) s.has_uppercase_word = true;
      run = 0;
      all_upper = true;
    };
    for (char32_t cp : utf8::decode(raw)) {
      if (utf8::is_letter(cp)) {
        ++run;
        all_upper = all_upper && utf8::is_uppercase(cp);
      } else {
        close_run();
      }
    }
    close_run();
  }
  return s;
}

std::set<std::string> read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open stopword file " + path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    words.insert(utf8::to_lower(line.substr(start)));
  }
  return words;
}

}  // namespace cocomment::text
