#include "cocomment/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "cocomment/error.hpp"
#include "cocomment/random.hpp"

namespace cocomment {

namespace {

std::string padded(char prefix, std::uint64_t index, std::uint64_t count) {
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::string digits = std::to_string(index);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

std::uint64_t total_planted(const SynthSpec& spec) {
  std::uint64_t n = 0;
  for (const auto& g : spec.planted_groups) n += g.size;
  return n;
}

}  // namespace

void validate_spec(const SynthSpec& spec) {
  if (spec.n_commenters == 0 || spec.n_influencers == 0 || spec.n_posts == 0)
    throw ConfigError("synth: commenter, influencer and post counts must be positive");
  if (!(spec.engagement_skew >= 0.0)) throw ConfigError("synth: engagement skew must be >= 0");
  const auto& s = spec.post_sizes;
  if (s.kind == PostSizeDistribution::Kind::kConstant && s.constant == 0)
    throw ConfigError("synth: constant post size must be positive");
  if (s.kind == PostSizeDistribution::Kind::kZipf && (s.max == 0 || !(s.exponent >= 0.0)))
    throw ConfigError("synth: Zipf post sizes need max >= 1 and exponent >= 0");
  for (const auto& g : spec.planted_groups) {
    if (g.size < 2) throw ConfigError("synth: planted groups need at least two members");
    if (g.shared_posts == 0) throw ConfigError("synth: planted groups need at least one shared post");
  }
  if (total_planted(spec) > spec.n_commenters)
    throw ConfigError("synth: planted groups need more commenters than n_commenters");
  if (spec.window_length <= std::chrono::seconds{0}) throw ConfigError("synth: window length must be positive");
}

std::string commenter_name(std::uint32_t index, const SynthSpec& spec) {
  return padded('c', index, spec.n_commenters);
}

std::string influencer_name(std::uint32_t index, const SynthSpec& spec) {
  return padded('i', index, spec.n_influencers);
}

std::vector<InteractionRecord> sample_null_trace(const SynthSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed);
  const std::uint32_t n = spec.n_commenters;

  const auto ranks = zipf_weights(n, spec.engagement_skew);
  std::vector<CategoricalSampler> audiences;
  audiences.reserve(spec.n_influencers);
  for (std::uint32_t i = 0; i < spec.n_influencers; ++i) {
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);
    std::vector<double> weights(n);
    for (std::uint32_t r = 0; r < n; ++r) weights[order[r]] = ranks[r];
    audiences.emplace_back(weights);
  }

  std::vector<double> size_weights;
  if (spec.post_sizes.kind == PostSizeDistribution::Kind::kZipf)
    size_weights = zipf_weights(spec.post_sizes.max, spec.post_sizes.exponent);
  else
    size_weights = {1.0};
  const CategoricalSampler size_sampler(size_weights);

  const auto window = static_cast<std::uint64_t>(spec.window_length.count());
  std::vector<InteractionRecord> out;
  std::vector<std::uint32_t> slots;
  for (std::uint32_t k = 0; k < spec.n_posts; ++k) {
    const std::uint32_t influencer = k % spec.n_influencers;
    const std::size_t size_draw = size_sampler(rng);
    const std::uint32_t size = spec.post_sizes.kind == PostSizeDistribution::Kind::kZipf
                                   ? static_cast<std::uint32_t>(size_draw + 1)
                                   : spec.post_sizes.constant;
    slots.clear();
    for (std::uint32_t s = 0; s < size; ++s) slots.push_back(static_cast<std::uint32_t>(audiences[influencer](rng)));
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    const std::string post = padded('p', k, spec.n_posts);
    const std::string owner = influencer_name(influencer, spec);
    for (std::uint32_t c : slots) {
      InteractionRecord r;
      r.commenter_id = commenter_name(c, spec);
      r.influencer_id = owner;
      r.post_id = post;
      r.timestamp = spec.window_start + std::chrono::seconds{static_cast<std::int64_t>(rng.below(window))};
      out.push_back(std::move(r));
    }
  }
  return out;
}

PlantedTrace plant_groups(std::vector<InteractionRecord> trace, const SynthSpec& spec) {
  validate_spec(spec);
  if (spec.planted_groups.empty()) throw ConfigError("synth: no planted groups configured");
  PlantedTrace out;
  for (const auto& r : trace) out.ground_truth.emplace(r.commenter_id, "background");
  out.records = std::move(trace);

  Rng rng(spec.seed ^ kPlantStream);
  const auto window = static_cast<std::uint64_t>(spec.window_length.count());
  std::uint32_t next_member = 0;
  for (std::size_t g = 0; g < spec.planted_groups.size(); ++g) {
    const auto& group = spec.planted_groups[g];
    char suffix[24];
    std::snprintf(suffix, sizeof suffix, "%02zu", g + 1);
    const std::string label = std::string("group") + suffix;
    const std::string owner = std::string("planted") + suffix;
    const std::uint32_t first = next_member;
    next_member += group.size;
    for (std::uint32_t c = first; c < next_member; ++c) out.ground_truth[commenter_name(c, spec)] = label;
    for (std::uint32_t k = 0; k < group.shared_posts; ++k) {
      const std::string post = owner + "_" + padded('p', k, group.shared_posts);
      for (std::uint32_t c = first; c < next_member; ++c) {
        InteractionRecord r;
        r.commenter_id = commenter_name(c, spec);
        r.influencer_id = owner;
        r.post_id = post;
        r.timestamp = spec.window_start + std::chrono::seconds{static_cast<std::int64_t>(rng.below(window))};
        out.records.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::string ground_truth_to_json(const std::map<std::string, std::string>& truth) {
  return nlohmann::json(truth).dump(1) + "\n";
}

std::map<std::string, std::string> ground_truth_from_json(std::string_view json) {
  try {
    return nlohmann::json::parse(json).get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed ground truth: ") + e.what());
  }
}

}  // namespace cocomment
