#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cocomment/community.hpp"
#include "cocomment/ingest.hpp"
#include "cocomment/text/activity.hpp"

namespace cocomment::text {

struct Lexicon {
  // attribute -> lowercase patterns; a trailing '*' matches any token with
  // that prefix.
  std::map<std::string, std::set<std::string>> attributes;
};

// "attribute<TAB>pattern" per line; blank lines and '#' comments skipped.
Lexicon read_lexicon(const std::filesystem::path& path);
Lexicon parse_lexicon(std::string_view text);

bool pattern_matches(std::string_view pattern, std::string_view token);

// Per comment, the fraction of its word tokens matching each attribute.
// Comments without word tokens contribute no sample.
std::map<std::string, std::vector<double>> attribute_samples(const std::vector<std::string>& comments,
                                                            const Lexicon& lexicon);

// Mean of attribute_samples per attribute (0 when no comment has tokens).
std::map<std::string, double> lexicon_frequencies(const std::vector<std::string>& comments, const Lexicon& lexicon);

// Texts of the comments written by each community's members.
std::map<std::uint32_t, std::vector<std::string>> community_comments(const CommunityAssignment& assignment,
                                                                   const Snapshot& snapshot);

struct KruskalResult {
  double h = 0.0;
  double p = 1.0;
  std::size_t df = 0;
};

// Kruskal-Wallis H with tied-rank correction and chi-squared p value.
// Empty when every sample is identical.
std::optional<KruskalResult> kruskal_wallis(const std::vector<std::vector<double>>& groups);

// Attributes whose per-community samples differ with p < threshold.
// samples: attribute -> one sample list per community.
std::set<std::string> kruskal_filter(const std::map<std::string, std::vector<std::vector<double>>>& samples,
                                     double p_threshold = 0.01);

// sum_i sum_j |x_i - x_j| / (2 n^2 mean); 0 when the mean is 0.
double gini(const std::vector<double>& values);

// The k attributes with the largest Gini index, ties by name.
std::vector<std::pair<std::string, double>> gini_rank(const std::map<std::string, std::vector<double>>& means,
                                                      std::size_t k = 5);

// Column-wise z-scores with the population standard deviation.
LabeledMatrix zscore_matrix(const LabeledMatrix& matrix);

}  // namespace cocomment::text
