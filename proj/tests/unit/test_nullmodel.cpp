#include <gtest/gtest.h>

#include <cmath>

#include "cocomment/error.hpp"
#include "cocomment/nullmodel.hpp"
#include "cocomment/poisson_binomial.hpp"
#include "cocomment/synth.hpp"
#include "fixtures.hpp"

using namespace cocomment;

namespace {

// Two-decimal truncation, the way the hand-worked toy numbers are displayed.
double trunc2(double x) { return std::floor(x * 100.0 + 1e-9) / 100.0; }

Snapshot filtered_null(std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  return filter_single_post_commenters(make_snapshot(1, sample_null_trace(spec)));
}

}  // namespace

TEST(Engagement, ToyRelativeEngagement) {
  const auto s = make_snapshot(1, fixtures::toy_records());
  const auto e = engagement_table(s);
  EXPECT_EQ(e.raw.at("i").at("c"), 3u);
  EXPECT_DOUBLE_EQ(e.relative_engagement("i", "c"), 3.0 / 11.0);
  EXPECT_DOUBLE_EQ(e.relative_engagement("i", "d"), 2.0 / 11.0);
  EXPECT_DOUBLE_EQ(e.relative_engagement("i", "e"), 1.0 / 11.0);
  for (const char* who : {"c", "d", "e"}) EXPECT_DOUBLE_EQ(e.relative_engagement("j", who), 1.0 / 7.0);
  EXPECT_NEAR(e.relative_engagement("i", "c"), 0.27, 0.005);
  EXPECT_NEAR(e.relative_engagement("i", "d"), 0.18, 0.005);
  EXPECT_NEAR(e.relative_engagement("i", "e"), 0.09, 0.005);
  EXPECT_NEAR(e.relative_engagement("j", "c"), 0.14, 0.005);
  EXPECT_EQ(e.relative_engagement("j", "nobody"), 0.0);
  EXPECT_EQ(e.post_sizes.at("p1"), 3u);
}

TEST(Engagement, NormalisedPerInfluencer) {
  const auto s = filtered_null(3);
  const auto e = engagement_table(s);
  for (const auto& [inf, rel] : e.relative) {
    double sum = 0.0;
    for (const auto& [c, f] : rel) sum += f;
    EXPECT_NEAR(sum, 1.0, 1e-9) << inf;
    const auto posts = s.posts_by_influencer.at(inf).size();
    for (const auto& [c, x] : e.raw.at(inf)) EXPECT_LE(x, posts);
  }
}

TEST(Engagement, SingleCommenterHasFullEngagement) {
  const auto s = make_snapshot(1, {fixtures::rec("a", "i", "p")});
  EXPECT_DOUBLE_EQ(engagement_table(s).relative_engagement("i", "a"), 1.0);
}

TEST(InclusionProb, DisplayedToyValues) {
  EXPECT_EQ(trunc2(post_inclusion_prob(0.27, 3)), 0.61);
  EXPECT_EQ(trunc2(post_inclusion_prob(0.18, 3)), 0.44);
  EXPECT_EQ(trunc2(post_inclusion_prob(0.14, 3)), 0.36);
}

TEST(InclusionProb, ClosedFormAndBoundaries) {
  EXPECT_NEAR(post_inclusion_prob(3.0 / 11.0, 3), 1.0 - std::pow(8.0 / 11.0, 3), 1e-15);
  EXPECT_EQ(post_inclusion_prob(0.0, 5), 0.0);
  EXPECT_EQ(post_inclusion_prob(1.0, 5), 1.0);
  double last = 0.0;
  for (std::uint32_t n = 1; n < 20; ++n) {
    const double v = post_inclusion_prob(0.1, n);
    EXPECT_GT(v, last);
    EXPECT_GE(v, post_inclusion_prob(0.05, n));
    last = v;
  }
}

TEST(EdgeNullParams, ToyProductsPerPost) {
  const auto s = make_snapshot(1, fixtures::toy_records());
  const auto e = engagement_table(s);
  const auto params = edge_null_params(s, e, "c", "d");
  ASSERT_EQ(params.size(), 7u);  // p1..p4 of i, then p5..p7 of j
  EXPECT_DOUBLE_EQ(params[0], post_inclusion_prob(3.0 / 11.0, 3) * post_inclusion_prob(2.0 / 11.0, 3));
  const double r7 = post_inclusion_prob(1.0 / 7.0, 3);
  EXPECT_DOUBLE_EQ(params[6], r7 * r7);
  // The displayed chain: 0.61 x 0.44 and 0.36 x 0.36.
  EXPECT_EQ(trunc2(0.61 * 0.44), 0.26);
  EXPECT_EQ(trunc2(0.36 * 0.36), 0.12);
}

TEST(EdgeNullParams, DisjointSupportIsEmpty) {
  std::vector<InteractionRecord> r;
  fixtures::add_post(r, "i", "p", {"a", "x"});
  fixtures::add_post(r, "j", "q", {"b", "x"});
  const auto s = make_snapshot(1, r);
  EXPECT_TRUE(edge_null_params(s, engagement_table(s), "a", "b").empty());
}

TEST(EdgeNullSummaries, AgreeWithDirectParameters) {
  const auto s = filtered_null(4);
  const auto e = engagement_table(s);
  const auto g = build_graph(s);
  BackboneOptions opts;
  opts.exact_max_posts = 0;
  const auto sums = edge_null_summaries(g, s, e, opts);
  ASSERT_EQ(sums.size(), g.edges.size());
  for (std::size_t k = 0; k < g.edges.size(); k += 37) {
    const auto& edge = g.edges[k];
    const auto p = edge_null_params(s, e, g.vertices[edge.source], g.vertices[edge.target]);
    const auto m = pb_moments(p);
    EXPECT_NEAR(sums[k].mu, m.mu, 1e-9);
    EXPECT_NEAR(sums[k].var, m.var, 1e-9);
    EXPECT_NEAR(sums[k].m3, m.m3, 1e-9);
    EXPECT_EQ(sums[k].posts, p.size());
    EXPECT_EQ(sums[k].percentile, PbPercentile(0.95).rna(m));
    EXPECT_LE(sums[k].var, sums[k].mu + 1e-12);
    EXPECT_LE(sums[k].percentile, sums[k].posts);
  }
}

TEST(Backbone, SalientPairFixture) {
  const auto s = filter_single_post_commenters(make_snapshot(1, fixtures::salient_pair_records()));
  const auto g = build_graph(s);
  ASSERT_EQ(g.weight("c", "e"), 6u);
  ASSERT_EQ(g.weight("c", "d"), 3u);
  for (std::size_t exact_posts : {std::size_t{0}, std::size_t{64}}) {
    BackboneOptions opts;
    opts.exact_max_posts = exact_posts;
    const auto b = extract_backbone(g, s, engagement_table(s), opts);
    EXPECT_TRUE(b.graph.weight("c", "e").has_value());
    EXPECT_FALSE(b.graph.weight("c", "d").has_value());
    EXPECT_FALSE(b.graph.find_vertex("d").has_value());
  }
}

TEST(Backbone, EmptySupportKeepsEdges) {
  std::vector<std::tuple<std::string, std::string, std::uint32_t>> edges = {{"u", "v", 1}, {"v", "w", 2}};
  const auto g = graph_from_edges(1, edges);
  const auto s = make_snapshot(1, fixtures::toy_records());
  const auto b = extract_backbone(g, s, engagement_table(s));
  EXPECT_EQ(b.graph.edges.size(), 2u);
  for (const auto& sum : b.summaries) EXPECT_EQ(sum.percentile, 0u);
}

TEST(Backbone, RejectsAlphaOutsideUnitInterval) {
  const auto s = make_snapshot(1, fixtures::toy_records());
  const auto g = build_graph(s);
  for (double alpha : {0.0, 1.0, -0.1, 1.5}) {
    BackboneOptions opts;
    opts.alpha = alpha;
    EXPECT_THROW(extract_backbone(g, s, engagement_table(s), opts), ConfigError);
  }
}

TEST(Backbone, SubgraphStrictLenientAndThreads) {
  const auto s = filtered_null(6);
  const auto e = engagement_table(s);
  const auto g = build_graph(s);
  BackboneOptions strict_opts;
  const auto strict = extract_backbone(g, s, e, strict_opts);
  BackboneOptions lenient_opts;
  lenient_opts.strict = false;
  const auto lenient = extract_backbone(g, s, e, lenient_opts);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (strict.kept[k]) {
      EXPECT_TRUE(lenient.kept[k]);
      EXPECT_GT(g.edges[k].weight, strict.summaries[k].percentile);
    }
  }
  for (const auto& edge : strict.graph.edges)
    EXPECT_EQ(g.weight(strict.graph.vertices[edge.source], strict.graph.vertices[edge.target]), edge.weight);
  EXPECT_GE(lenient.retention.kept_edges, strict.retention.kept_edges);

  BackboneOptions threaded = strict_opts;
  threaded.threads = 4;
  const auto again = extract_backbone(g, s, e, threaded);
  EXPECT_EQ(again.kept, strict.kept);
  EXPECT_EQ(again.graph, strict.graph);
}

TEST(Backbone, RetentionReportTotals) {
  const auto s = filtered_null(7);
  const auto g = build_graph(s);
  const auto b = extract_backbone(g, s, engagement_table(s));
  std::size_t total = 0, kept = 0;
  for (const auto& [w, r] : b.retention.per_weight) {
    total += r.total;
    kept += r.kept;
  }
  EXPECT_EQ(total, g.edges.size());
  EXPECT_EQ(kept, b.graph.edges.size());
  EXPECT_EQ(b.retention.kept_vertices, b.graph.vertices.size());
  const auto json = retention_to_json(b.retention, 0.05, true);
  EXPECT_NE(json.find("\"per_weight\""), std::string::npos);
  EXPECT_EQ(backbone_header(3, 0.05, true), "#backbone v1 window=3 alpha=0.05 strict=true");
}
