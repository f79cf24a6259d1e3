#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cocomment/projection.hpp"

namespace cocomment {

struct CommunityAssignment {
  int window_index = 0;
  std::uint64_t seed = 0;
  double modularity = 0.0;
  std::uint32_t community_count = 0;
  // Community ids are 0..count-1 ordered by descending size, ties by the
  // smallest member id.
  std::map<std::string, std::uint32_t> labels;
  // Modularity after each Louvain level (non-decreasing).
  std::vector<double> level_modularity;

  std::vector<std::vector<std::string>> communities() const;
  std::vector<std::uint32_t> labels_for(const CoCommentGraph& graph) const;
};

// Q = (1/2M) sum_{c,d} [w(c,d) - k(c)k(d)/2M] delta(l(c), l(d)). `labels`
// is indexed by vertex id. Throws UndefinedError when M = 0.
double modularity(const CoCommentGraph& graph, std::span<const std::uint32_t> labels);

// Relabels to the canonical order described on CommunityAssignment.
std::vector<std::uint32_t> canonical_labels(std::span<const std::uint32_t> labels);

// Louvain with a seeded visiting order. Ties between candidate moves go to
// the highest gain, then the lowest community id; a vertex only leaves its
// community for a strictly positive gain.
CommunityAssignment louvain(const CoCommentGraph& graph, std::uint64_t seed);

std::string assignment_to_json(const CommunityAssignment& assignment);
CommunityAssignment assignment_from_json(std::string_view json);

}  // namespace cocomment
