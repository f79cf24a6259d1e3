#include "cocomment/text/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "cocomment/error.hpp"
#include "cocomment/text/tokenize.hpp"
#include "cocomment/utf8.hpp"

namespace cocomment::text {

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      throw InputError("lexicon line " + std::to_string(number) + ": expected attribute<TAB>pattern");
    std::string pattern = utf8::to_lower(line.substr(tab + 1));
    if (pattern == "*") throw InputError("lexicon line " + std::to_string(number) + ": empty pattern");
    lex.attributes[line.substr(0, tab)].insert(std::move(pattern));
  }
  if (lex.attributes.empty()) throw InputError("lexicon is empty");
  return lex;
}

Lexicon read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str());
}

bool pattern_matches(std::string_view pattern, std::string_view token) {
  if (!pattern.empty() && pattern.back() == '*') return token.starts_with(pattern.substr(0, pattern.size() - 1));
  return token == pattern;
}

std::map<std::string, std::vector<double>> attribute_samples(const std::vector<std::string>& comments,
                                                            const Lexicon& lexicon) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& [attr, _] : lexicon.attributes) out[attr];
  for (const auto& comment : comments) {
    const auto tokens = word_tokens(comment);
    if (tokens.empty()) continue;
    for (const auto& [attr, patterns] : lexicon.attributes) {
      std::size_t hits = 0;
      for (const auto& t : tokens)
        hits += std::any_of(patterns.begin(), patterns.end(), [&](const std::string& p) { return pattern_matches(p, t); });
      out[attr].push_back(static_cast<double>(hits) / static_cast<double>(tokens.size()));
    }
  }
  return out;
}

std::map<std::string, double> lexicon_frequencies(const std::vector<std::string>& comments, const Lexicon& lexicon) {
  std::map<std::string, double> out;
  for (const auto& [attr, samples] : attribute_samples(comments, lexicon))
    out[attr] = samples.empty() ? 0.0 : std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  return out;
}

std::map<std::uint32_t, std::vector<std::string>> community_comments(const CommunityAssignment& assignment,
                                                                   const Snapshot& snapshot) {
  std::map<std::uint32_t, std::vector<std::string>> out;
  for (const auto& r : snapshot.comments) {
    auto it = assignment.labels.find(r.commenter_id);
    if (it != assignment.labels.end()) out[it->second].push_back(r.text.value_or(""));
  }
  return out;
}

std::optional<KruskalResult> kruskal_wallis(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw InputError("the Kruskal-Wallis test needs at least two groups");
  struct Obs {
    double value;
    std::size_t group;
  };
  std::vector<Obs> all;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2) throw InputError("every Kruskal-Wallis group needs at least two samples");
    for (double v : groups[g]) all.push_back({v, g});
  }
  std::sort(all.begin(), all.end(), [](const Obs& a, const Obs& b) { return a.value < b.value; });
  const double n = static_cast<double>(all.size());
  std::vector<double> rank_sum(groups.size(), 0.0);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].value == all[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) rank_sum[all[k].group] += avg_rank;
    tie_term += t * t * t - t;
    i = j;
  }
  const double correction = 1.0 - tie_term / (n * n * n - n);
  if (correction <= 0.0) return std::nullopt;
  double h = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) h += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
  h = (12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0)) / correction;
  h = std::max(0.0, h);
  KruskalResult r;
  r.h = h;
  r.df = groups.size() - 1;
  r.p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(r.df)), h));
  return r;
}

std::set<std::string> kruskal_filter(const std::map<std::string, std::vector<std::vector<double>>>& samples,
                                     double p_threshold) {
  std::set<std::string> kept;
  for (const auto& [attr, groups] : samples) {
    const auto r = kruskal_wallis(groups);
    if (r && r->p < p_threshold) kept.insert(attr);
  }
  return kept;
}

double gini(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (mean == 0.0) return 0.0;
  double sum = 0.0;
  for (double a : values)
    for (double b : values) sum += std::abs(a - b);
  return sum / (2.0 * n * n * mean);
}

std::vector<std::pair<std::string, double>> gini_rank(const std::map<std::string, std::vector<double>>& means,
                                                      std::size_t k) {
  std::vector<std::pair<std::string, double>> all;
  for (const auto& [attr, values] : means) all.emplace_back(attr, gini(values));
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (all.size() > k) all.resize(k);
  return all;
}

LabeledMatrix zscore_matrix(const LabeledMatrix& matrix) {
  LabeledMatrix out = matrix;
  const std::size_t n = matrix.rows();
  if (n == 0) return out;
  for (std::size_t c = 0; c < matrix.columns(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += matrix.values[r][c];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) var += (matrix.values[r][c] - mean) * (matrix.values[r][c] - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    if (!(sd > 0.0)) throw UndefinedError("attribute '" + matrix.column_labels[c] + "' has zero variance across rows");
    for (std::size_t r = 0; r < n; ++r) out.values[r][c] = (matrix.values[r][c] - mean) / sd;
  }
  return out;
}

}  // namespace cocomment::text
