#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cocomment/community.hpp"
#include "cocomment/ingest.hpp"

namespace cocomment::text {

struct LabeledMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> column_labels;
  std::vector<std::vector<double>> values;  // row-major

  std::size_t rows() const { return values.size(); }
  std::size_t columns() const { return column_labels.size(); }
};

std::string matrix_to_json(const LabeledMatrix& matrix);

// Per post: the two largest interest values over communities.
struct PostInterest {
  std::string post_id;
  std::uint32_t top_community = 0;
  double top1 = 0.0;
  double top2 = 0.0;
  std::optional<double> ratio;  // top1 / top2, empty when top2 == 0
};

struct InterestIndex {
  LabeledMatrix matrix;  // community x post, each row sums to 1
  std::vector<PostInterest> posts;
};

// Fraction of each community's comments that fall on each post. Rows of
// communities without comments are omitted.
InterestIndex interest_index(const CommunityAssignment& assignment, const Snapshot& snapshot);

// Same with influencer columns.
LabeledMatrix community_influencer_matrix(const CommunityAssignment& assignment, const Snapshot& snapshot);

struct DendrogramMerge {
  std::uint32_t left = 0;   // cluster ids: leaves 0..n-1, merges n, n+1, ...
  std::uint32_t right = 0;
  double height = 0.0;
  std::uint32_t size = 0;
};

struct Dendrogram {
  std::vector<std::string> leaves;
  std::vector<DendrogramMerge> merges;
};

// Average-linkage clustering of the matrix columns under the distance
// 1 - Pearson(col_a, col_b). Equal distances are resolved by the smallest
// leaf (column) index contained in each cluster.
Dendrogram influencer_dendrogram(const LabeledMatrix& matrix);
std::string dendrogram_to_json(const Dendrogram& dendrogram);

enum class Sentiment { kNegative, kNeutral, kPositive };
Sentiment sentiment_classify(int score);

struct SentimentBreakdown {
  std::size_t negative = 0;
  std::size_t neutral = 0;
  std::size_t positive = 0;
  std::size_t total() const { return negative + neutral + positive; }
};

// Scored comments of the community's members on the influencer's posts.
SentimentBreakdown sentiment_breakdown(const CommunityAssignment& assignment, const Snapshot& snapshot,
                                       std::uint32_t community, const std::string& influencer);

// frac_positive - frac_negative; empty ("insufficient") below min_comments.
std::optional<double> contrastive_score(const CommunityAssignment& assignment, const Snapshot& snapshot,
                                        std::uint32_t community, const std::string& influencer,
                                        std::size_t min_comments = 100);

}  // namespace cocomment::text
