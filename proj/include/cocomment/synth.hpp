#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cocomment/ingest.hpp"

namespace cocomment {

struct PostSizeDistribution {
  enum class Kind { kConstant, kZipf };
  Kind kind = Kind::kZipf;
  std::uint32_t constant = 10;  // kConstant
  double exponent = 1.0;        // kZipf: P(k) ~ k^-exponent on 1..max
  std::uint32_t max = 50;
};

struct PlantedGroup {
  std::uint32_t size = 0;
  std::uint32_t shared_posts = 0;
};

struct SynthSpec {
  std::uint32_t n_commenters = 500;
  std::uint32_t n_influencers = 20;
  std::uint32_t n_posts = 200;
  double engagement_skew = 1.0;  // Zipf exponent of each influencer's audience
  PostSizeDistribution post_sizes;
  std::vector<PlantedGroup> planted_groups;
  std::uint64_t seed = 1;
  Timestamp window_start = std::chrono::sys_days{std::chrono::September / 3 / 2018};
  std::chrono::seconds window_length = std::chrono::days{7};
};

// Throws ConfigError on an invalid spec.
void validate_spec(const SynthSpec& spec);

// Identifiers are zero-padded to the width of the largest index.
std::string commenter_name(std::uint32_t index, const SynthSpec& spec);
std::string influencer_name(std::uint32_t index, const SynthSpec& spec);

// Trace drawn from the reference model itself. Stream discipline, all from
// one Rng(seed): for each influencer in order, one shuffle of the commenters
// fixing who gets which Zipf rank; then for each post in order, its slot
// count, its slots (categorical draws with replacement, deduplicated) and
// one timestamp per unique commenter in id order. Post k belongs to
// influencer k mod n_influencers.
std::vector<InteractionRecord> sample_null_trace(const SynthSpec& spec);

struct PlantedTrace {
  std::vector<InteractionRecord> records;
  std::map<std::string, std::string> ground_truth;  // commenter -> "group01".. or "background"
};

// Appends, for group g, shared_posts posts of a dedicated influencer on which
// exactly the group's members comment. Groups take consecutive commenter
// indices from 0. Timestamps come from Rng(seed ^ kPlantStream).
PlantedTrace plant_groups(std::vector<InteractionRecord> trace, const SynthSpec& spec);

inline constexpr std::uint64_t kPlantStream = 0x9E3779B97F4A7C15ULL;

std::string ground_truth_to_json(const std::map<std::string, std::string>& truth);
std::map<std::string, std::string> ground_truth_from_json(std::string_view json);

}  // namespace cocomment
