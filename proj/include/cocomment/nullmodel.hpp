#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cocomment/ingest.hpp"
#include "cocomment/poisson_binomial.hpp"
#include "cocomment/projection.hpp"

namespace cocomment {

// Per-influencer engagement of each commenter in one window.
//   raw[i][c]      = x_i(c), number of i's posts on which c commented
//   relative[i][c] = f_i(c) = x_i(c) / sum over i's posts of |C_p|
// Commenters with x_i(c) = 0 are absent from i's maps.
struct EngagementTable {
  std::map<std::string, std::map<std::string, std::uint32_t>> raw;
  std::map<std::string, std::map<std::string, double>> relative;
  std::map<std::string, std::uint32_t> post_sizes;
  std::vector<std::string> excluded_influencers;  // no commenter slots at all

  double relative_engagement(const std::string& influencer, const std::string& commenter) const;
};

EngagementTable engagement_table(const Snapshot& snapshot);

// Probability that a commenter with relative engagement f is among the
// unique commenters of a post with n commenter slots: 1 - (1 - f)^n.
double post_inclusion_prob(double f, std::uint32_t n);

// r_p(c, d) ~= r_p(c) * r_p(d) for every post of each influencer both
// commenters engage with, in post-id order. Posts of other influencers have
// r = 0 and are omitted.
std::vector<double> edge_null_params(const Snapshot& snapshot, const EngagementTable& engagement,
                                     const std::string& c, const std::string& d);

struct EdgeNullSummary {
  double mu = 0.0;
  double var = 0.0;
  double m3 = 0.0;
  std::uint32_t percentile = 0;
  std::uint32_t posts = 0;  // contributing posts
  bool exact = false;       // percentile from the exact pmf
};

struct BackboneOptions {
  double alpha = 0.05;
  bool strict = true;
  // Edges with at most this many contributing posts use the exact pmf
  // instead of the RNA; 0 disables the fallback.
  std::size_t exact_max_posts = 64;
  unsigned threads = 1;
};

struct WeightRetention {
  std::size_t total = 0;
  std::size_t kept = 0;
  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(kept) / static_cast<double>(total); }
};

struct RetentionReport {
  int window_index = 0;
  std::size_t total_edges = 0;
  std::size_t kept_edges = 0;
  std::size_t total_vertices = 0;
  std::size_t kept_vertices = 0;
  std::map<std::uint32_t, WeightRetention> per_weight;

  double kept_fraction() const {
    return total_edges == 0 ? 0.0 : static_cast<double>(kept_edges) / static_cast<double>(total_edges);
  }
};

struct Backbone {
  CoCommentGraph graph;
  double alpha = 0.05;
  bool strict = true;
  std::vector<EdgeNullSummary> summaries;  // one per edge of the input graph
  std::vector<bool> kept;                  // one per edge of the input graph
  RetentionReport retention;
};

// Null summary of every edge of `graph`, in edge order. Deterministic for
// any thread count.
std::vector<EdgeNullSummary> edge_null_summaries(const CoCommentGraph& graph, const Snapshot& snapshot,
                                                 const EngagementTable& engagement,
                                                 const BackboneOptions& options);

// Keeps edges whose weight exceeds the (1 - alpha) null percentile
// (strict) or reaches it (lenient), then drops isolated vertices.
Backbone extract_backbone(const CoCommentGraph& graph, const Snapshot& snapshot,
                          const EngagementTable& engagement, const BackboneOptions& options = {});

std::string backbone_header(int window_index, double alpha, bool strict);
std::string retention_to_json(const RetentionReport& report, double alpha, bool strict);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace cocomment
