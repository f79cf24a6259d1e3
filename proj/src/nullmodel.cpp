#include "cocomment/nullmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "cocomment/error.hpp"
#include "cocomment/parallel.hpp"

namespace cocomment {

double EngagementTable::relative_engagement(const std::string& influencer, const std::string& commenter) const {
  auto it = relative.find(influencer);
  if (it == relative.end()) return 0.0;
  auto jt = it->second.find(commenter);
  return jt == it->second.end() ? 0.0 : jt->second;
}

EngagementTable engagement_table(const Snapshot& snapshot) {
  EngagementTable t;
  for (const auto& [influencer, posts] : snapshot.posts_by_influencer) {
    std::uint64_t slots = 0;
    auto& raw = t.raw[influencer];
    for (const auto& post : posts) {
      auto it = snapshot.commenters_per_post.find(post);
      if (it == snapshot.commenters_per_post.end()) continue;
      const auto size = static_cast<std::uint32_t>(it->second.size());
      t.post_sizes[post] = size;
      slots += size;
      for (const auto& c : it->second) ++raw[c];
    }
    if (slots == 0) {
      t.raw.erase(influencer);
      t.excluded_influencers.push_back(influencer);
      continue;
    }
    auto& rel = t.relative[influencer];
    for (const auto& [c, x] : raw) rel[c] = static_cast<double>(x) / static_cast<double>(slots);
  }
  return t;
}

double post_inclusion_prob(double f, std::uint32_t n) {
  if (f <= 0.0) return 0.0;
  if (f >= 1.0) return 1.0;
  // 1 - (1 - f)^n without cancellation for small f.
  return -std::expm1(static_cast<double>(n) * std::log1p(-f));
}

std::vector<double> edge_null_params(const Snapshot& snapshot, const EngagementTable& engagement,
                                     const std::string& c, const std::string& d) {
  std::vector<double> params;
  if (c == d) return params;
  for (const auto& [influencer, rel] : engagement.relative) {
    auto fc = rel.find(c), fd = rel.find(d);
    if (fc == rel.end() || fd == rel.end()) continue;
    for (const auto& post : snapshot.posts_by_influencer.at(influencer)) {
      const auto n = engagement.post_sizes.at(post);
      params.push_back(post_inclusion_prob(fc->second, n) * post_inclusion_prob(fd->second, n));
    }
  }
  return params;
}

namespace {

// Dense view used by the per-edge loop. For each influencer the post sizes
// are grouped (size, multiplicity); for each vertex the engaged influencers
// are listed with a pointer into a table of r_p values per size group.
struct NullIndex {
  struct SizeGroup {
    std::uint32_t size;
    std::uint32_t count;
  };
  struct Support {
    std::uint32_t influencer;
    std::uint32_t r_offset;
  };
  std::vector<std::vector<SizeGroup>> groups;   // per influencer
  std::vector<std::uint32_t> support_begin;     // per vertex, CSR into support
  std::vector<Support> support;
  std::vector<double> r;                         // inclusion probabilities

  NullIndex(const CoCommentGraph& graph, const Snapshot& snapshot, const EngagementTable& engagement) {
    std::vector<std::vector<Support>> per_vertex(graph.vertices.size());
    std::uint32_t k = 0;
    for (const auto& [influencer, rel] : engagement.relative) {
      std::map<std::uint32_t, std::uint32_t> sizes;
      for (const auto& post : snapshot.posts_by_influencer.at(influencer)) ++sizes[engagement.post_sizes.at(post)];
      auto& g = groups.emplace_back();
      for (const auto& [size, count] : sizes) g.push_back({size, count});
      for (const auto& [commenter, f] : rel) {
        auto v = graph.find_vertex(commenter);
        if (!v) continue;
        per_vertex[*v].push_back({k, static_cast<std::uint32_t>(r.size())});
        for (const auto& sg : g) r.push_back(post_inclusion_prob(f, sg.size));
      }
      ++k;
    }
    support_begin.reserve(per_vertex.size() + 1);
    support_begin.push_back(0);
    for (auto& s : per_vertex) {
      support.insert(support.end(), s.begin(), s.end());
      support_begin.push_back(static_cast<std::uint32_t>(support.size()));
    }
  }
};

}  // namespace

std::vector<EdgeNullSummary> edge_null_summaries(const CoCommentGraph& graph, const Snapshot& snapshot,
                                                 const EngagementTable& engagement,
                                                 const BackboneOptions& options) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0))
    throw ConfigError("alpha must lie in (0, 1), got " + format_double(options.alpha));
  const NullIndex index(graph, snapshot, engagement);
  const PbPercentile percentile(1.0 - options.alpha);
  std::vector<EdgeNullSummary> out(graph.edges.size());

  parallel_for(graph.edges.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> params;
    for (std::size_t e = begin; e < end; ++e) {
      const auto& edge = graph.edges[e];
      auto a = index.support.begin() + index.support_begin[edge.source];
      const auto a_end = index.support.begin() + index.support_begin[edge.source + 1];
      auto b = index.support.begin() + index.support_begin[edge.target];
      const auto b_end = index.support.begin() + index.support_begin[edge.target + 1];
      PbMoments m;
      params.clear();
      const bool collect = options.exact_max_posts > 0;
      while (a != a_end && b != b_end) {
        if (a->influencer < b->influencer) {
          ++a;
        } else if (b->influencer < a->influencer) {
          ++b;
        } else {
          const auto& groups = index.groups[a->influencer];
          for (std::size_t g = 0; g < groups.size(); ++g) {
            const double p = index.r[a->r_offset + g] * index.r[b->r_offset + g];
            m.add(p, groups[g].count);
            if (collect && m.count <= options.exact_max_posts)
              params.insert(params.end(), groups[g].count, p);
          }
          ++a;
          ++b;
        }
      }
      EdgeNullSummary& s = out[e];
      s.mu = m.mu;
      s.var = m.var;
      s.m3 = m.m3;
      s.posts = static_cast<std::uint32_t>(m.count);
      if (collect && m.count <= options.exact_max_posts && m.count > 0) {
        s.percentile = percentile.exact(params);
        s.exact = true;
      } else {
        s.percentile = percentile.rna(m);
      }
    }
  });
  return out;
}

Backbone extract_backbone(const CoCommentGraph& graph, const Snapshot& snapshot,
                          const EngagementTable& engagement, const BackboneOptions& options) {
  Backbone bb;
  bb.alpha = options.alpha;
  bb.strict = options.strict;
  bb.summaries = edge_null_summaries(graph, snapshot, engagement, options);
  bb.kept.assign(graph.edges.size(), false);
  auto& rep = bb.retention;
  rep.window_index = graph.window_index;
  rep.total_edges = graph.edges.size();
  rep.total_vertices = graph.vertices.size();
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto w = graph.edges[e].weight;
    const auto threshold = bb.summaries[e].percentile;
    const bool keep = options.strict ? w > threshold : w >= threshold;
    bb.kept[e] = keep;
    auto& pw = rep.per_weight[w];
    ++pw.total;
    if (keep) {
      ++pw.kept;
      ++rep.kept_edges;
    }
  }
  bb.graph = edge_subgraph(graph, bb.kept);
  rep.kept_vertices = bb.graph.vertices.size();
  return bb;
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string backbone_header(int window_index, double alpha, bool strict) {
  return "#backbone v1 window=" + std::to_string(window_index) + " alpha=" + format_double(alpha) +
         " strict=" + (strict ? "true" : "false");
}

std::string retention_to_json(const RetentionReport& r, double alpha, bool strict) {
  nlohmann::json j;
  j["window"] = r.window_index;
  j["alpha"] = alpha;
  j["strict"] = strict;
  j["total_edges"] = r.total_edges;
  j["kept_edges"] = r.kept_edges;
  j["total_vertices"] = r.total_vertices;
  j["kept_vertices"] = r.kept_vertices;
  j["kept_fraction"] = r.kept_fraction();
  j["per_weight"] = nlohmann::json::object();
  j["per_weight_total"] = nlohmann::json::object();
  for (const auto& [w, pw] : r.per_weight) {
    j["per_weight"][std::to_string(w)] = pw.fraction();
    j["per_weight_total"][std::to_string(w)] = pw.total;
  }
  return j.dump(1) + "\n";
}

}  // namespace cocomment
