#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cocomment/community.hpp"
#include "cocomment/ingest.hpp"

namespace cocomment::text {

inline constexpr std::size_t kFeatureCount = 7;

struct FeatureVector {
  double avg_comment_length = 0.0;  // code points
  double frac_with_mention = 0.0;
  double avg_hashtags_per_comment = 0.0;
  double frac_with_uppercase_word = 0.0;
  double avg_comments_per_commenter = 0.0;
  double avg_emojis_per_comment = 0.0;
  double frac_replies = 0.0;

  std::array<double, kFeatureCount> values() const;
};

const std::array<std::string, kFeatureCount>& feature_names();

// Metrics over the comments written by the community's members. Comments
// without text count as empty strings; a missing reply flag counts as false.
FeatureVector feature_vector(const CommunityAssignment& assignment, const Snapshot& snapshot,
                             std::uint32_t community);

struct PcaResult {
  std::vector<double> eigenvalues;                 // all of them, descending
  std::array<std::vector<double>, 2> loadings;     // unit vectors over the columns
  std::vector<std::array<double, 2>> coordinates;  // one per input row
  std::array<double, 2> explained{};               // share of total variance
};

// Two-component PCA of z-scored columns (population standard deviation).
// Each loading vector is signed so its largest-magnitude entry is positive.
PcaResult pca_2d(const std::vector<std::vector<double>>& rows, const std::vector<std::string>& column_names);

}  // namespace cocomment::text
