#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cocomment::text {

using Stemmer = std::function<std::string(std::string_view)>;

struct TextConfig {
  std::set<std::string> stopwords;      // lowercase
  std::size_t min_occurrences = 10;     // rarer terms are dropped from the corpus
  double popular_fraction = 0.01;       // share of the vocabulary dropped as most popular
  std::size_t top_terms = 100;          // non-zero TF-IDF entries kept per document
  Stemmer stemmer;                      // identity when empty
};

// Whitespace-separated raw tokens.
std::vector<std::string> split_whitespace(std::string_view text);

// Lowercased word runs of every raw token that is not a mention or hashtag.
// Punctuation and emoji code points separate words and are discarded.
std::vector<std::string> word_tokens(std::string_view text);

// word_tokens minus stopwords, then the configured stemmer.
std::vector<std::string> preprocess(std::string_view text, const TextConfig& config);

// Per-comment surface counts used by the community feature vectors.
struct CommentSurface {
  std::size_t length = 0;     // code points
  std::size_t mentions = 0;   // raw tokens starting with '@'
  std::size_t hashtags = 0;   // raw tokens starting with '#'
  std::size_t emojis = 0;     // code points with the Emoji property (non-ASCII)
  bool has_uppercase_word = false;  // alphabetic run of >= 2 letters, all uppercase
};

CommentSurface analyze_comment(std::string_view text);

// One token per line; blank lines and lines starting with '#' are skipped.
std::set<std::string> read_stopwords(const std::filesystem::path& path);

}  // namespace cocomment::text
