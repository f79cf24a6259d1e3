#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cocomment/community.hpp"
#include "cocomment/ingest.hpp"
#include "cocomment/projection.hpp"
#include "cocomment/text/corpus.hpp"

namespace cocomment {

// |V_w ∩ V_{w+1}| / |V_w|. Throws UndefinedError when V_w is empty.
double persistence(const CoCommentGraph& backbone_w, const CoCommentGraph& backbone_w1);
double persistence(const std::vector<std::string>& members_w, const CoCommentGraph& backbone_w1);

// Normalised mutual information (natural log, sqrt(H(X)H(Y)) normalisation)
// of two labelings restricted to `persisted`. If both labelings put every
// persisted vertex in one community the result is 1; if exactly one does,
// it is 0.
double membership_nmi(const std::map<std::string, std::uint32_t>& labels_w,
                      const std::map<std::string, std::uint32_t>& labels_w1,
                      const std::vector<std::string>& persisted);

// The ceil(fraction * |V^b|) backbone members with the most comments in the
// window, ties by id. Result sorted by id.
std::vector<std::string> top_k_commenters(const Snapshot& snapshot, const CoCommentGraph& backbone, double fraction);

struct CommunityMatch {
  std::uint32_t community_w = 0;
  std::optional<std::uint32_t> community_w1;  // empty: no match
  double similarity = 0.0;                    // to the best candidate
  double baseline = 0.0;                      // to the window-(w+1) average community
};

// Each community of w goes to its most similar community of w+1 (lowest id
// on ties) when that similarity strictly exceeds the similarity to the
// baseline document of w+1.
std::vector<CommunityMatch> match_communities(const std::vector<text::TermVector>& docs_w,
                                              const std::vector<text::TermVector>& docs_w1,
                                              const text::TermVector& baseline_w1);

enum class Cohort { kAll, kTop1Percent, kTop5Percent };
std::string_view cohort_name(Cohort cohort);

struct WindowArtifacts {
  const Snapshot* snapshot = nullptr;
  const CoCommentGraph* backbone = nullptr;
  const CommunityAssignment* communities = nullptr;
  std::vector<text::TermVector> documents;  // TF-IDF per community
  text::TermVector baseline;
};

struct TransitionEntry {
  int window_from = 0;
  int window_to = 0;
  Cohort cohort = Cohort::kAll;
  std::size_t cohort_size = 0;
  std::size_t persisted = 0;
  std::optional<double> persistence;
  std::optional<double> nmi;
  std::vector<CommunityMatch> matches;  // cohort kAll only
};

// One entry per cohort for every pair of windows with consecutive indices.
std::vector<TransitionEntry> temporal_report(const std::vector<WindowArtifacts>& windows);
std::string temporal_report_to_json(const std::vector<TransitionEntry>& report);

}  // namespace cocomment
