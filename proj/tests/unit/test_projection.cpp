#include <gtest/gtest.h>

#include <map>
#include <set>

#include "cocomment/error.hpp"
#include "cocomment/projection.hpp"
#include "cocomment/synth.hpp"
#include "fixtures.hpp"

using namespace cocomment;
using fixtures::add_post;

TEST(BuildGraph, SingleCliqueIsATriangle) {
  std::vector<InteractionRecord> r;
  add_post(r, "i", "p", {"a", "b", "c"});
  const auto g = build_graph(make_snapshot(1, r));
  EXPECT_EQ(g.vertices.size(), 3u);
  ASSERT_EQ(g.edges.size(), 3u);
  for (const auto& e : g.edges) EXPECT_EQ(e.weight, 1u);
}

TEST(BuildGraph, CliquesSuperpose) {
  std::vector<InteractionRecord> r;
  add_post(r, "i", "p", {"a", "b", "c"});
  add_post(r, "i", "q", {"a", "b"});
  const auto g = build_graph(make_snapshot(1, r));
  EXPECT_EQ(g.weight("a", "b"), 2u);
  EXPECT_EQ(g.weight("b", "a"), 2u);
  EXPECT_EQ(g.weight("a", "c"), 1u);
  EXPECT_EQ(g.weight("b", "c"), 1u);
  EXPECT_FALSE(g.weight("a", "a").has_value());
}

TEST(BuildGraph, FiveInfluencerFixtureMatchesPairEnumeration) {
  // Posts of five influencers over commenters A..H; the oracle counts
  // shared posts for every pair directly.
  const std::vector<std::pair<std::string, std::vector<std::string>>> posts = {
      {"I1", {"A", "B", "C"}}, {"I1", {"A", "B"}},      {"I2", {"B", "C", "D", "E"}}, {"I2", {"D", "E"}},
      {"I3", {"A", "E", "F"}}, {"I4", {"F", "G", "H"}}, {"I4", {"G", "H"}},           {"I5", {"A", "H"}},
      {"I5", {"B", "C", "G"}}};
  std::vector<InteractionRecord> r;
  std::map<std::pair<std::string, std::string>, std::uint32_t> oracle;
  for (std::size_t k = 0; k < posts.size(); ++k) {
    const auto& [inf, members] = posts[k];
    add_post(r, inf, "P" + std::to_string(k + 1), members);
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y) ++oracle[std::minmax(members[x], members[y])];
  }
  const auto g = build_graph(make_snapshot(1, r));
  ASSERT_EQ(g.edges.size(), oracle.size());
  for (const auto& [pair, w] : oracle) EXPECT_EQ(g.weight(pair.first, pair.second), w) << pair.first << pair.second;
  EXPECT_EQ(g.weight("A", "B"), 2u);
  EXPECT_EQ(g.weight("D", "E"), 2u);
  EXPECT_EQ(g.weight("G", "H"), 2u);
  EXPECT_EQ(g.weight("B", "C"), 3u);
}

TEST(BuildGraph, WeightSumEqualsPairCount) {
  SynthSpec spec;
  spec.seed = 5;
  const auto s = make_snapshot(1, sample_null_trace(spec));
  std::uint64_t pairs = 0;
  for (const auto& [p, c] : s.commenters_per_post) pairs += c.size() * (c.size() - 1) / 2;
  const auto g = build_graph(s);
  EXPECT_EQ(g.total_weight(), pairs);
  for (const auto& e : g.edges) {
    EXPECT_LT(g.vertices[e.source], g.vertices[e.target]);
    EXPECT_GE(e.weight, 1u);
    EXPECT_LE(e.weight, s.posts.size());
  }
  BuildOptions threaded;
  threaded.threads = 4;
  EXPECT_EQ(build_graph(s, threaded), g);
}

TEST(BuildGraph, CliqueCapNamesThePost) {
  std::vector<InteractionRecord> r;
  add_post(r, "i", "big", {"a", "b", "c", "d"});
  BuildOptions opts;
  opts.clique_cap = 3;
  try {
    build_graph(make_snapshot(1, r), opts);
    FAIL() << "expected a ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("big"), std::string::npos);
  }
}

TEST(BuildGraph, PairBudgetIsEnforced) {
  std::vector<InteractionRecord> r;
  add_post(r, "i", "p", {"a", "b", "c", "d"});
  BuildOptions opts;
  opts.max_pair_incidences = 5;
  EXPECT_THROW(build_graph(make_snapshot(1, r), opts), ResourceError);
}

TEST(GraphStats, EmptyGraph) {
  const auto s = graph_stats(CoCommentGraph{});
  EXPECT_EQ(s.vertex_count, 0u);
  EXPECT_EQ(s.edge_count, 0u);
  EXPECT_TRUE(s.weight_histogram.empty());
}

TEST(GraphStats, TriangleHistogram) {
  const auto s = graph_stats(fixtures::two_triangles());
  EXPECT_EQ(s.weight_histogram.at(1), 6u);
  EXPECT_DOUBLE_EQ(s.weight_fractions.at(1), 1.0);
}

TEST(GraphStats, NullGraphConcentratesAtWeightOne) {
  SynthSpec spec;
  spec.seed = 2;
  const auto g = build_graph(filter_single_post_commenters(make_snapshot(1, sample_null_trace(spec))));
  const auto s = graph_stats(g);
  double sum = 0.0;
  for (const auto& [w, f] : s.weight_fractions) sum += f;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_GT(s.weight_fractions.at(1), 4 * s.weight_fractions.at(2));
}

TEST(EdgeList, RoundTripAndFormat) {
  const auto g = fixtures::two_triangles();
  const auto text = write_edge_list(g, graph_header(1));
  EXPECT_EQ(text.substr(0, text.find('\n')), "#cocomment-graph v1 window=1");
  EXPECT_NE(text.find("a\tb\t1\n"), std::string::npos);
  const auto back = read_edge_list(text);
  EXPECT_EQ(header_fields(back.header).at("window"), "1");
  EXPECT_EQ(back.graph.edges, g.edges);
  EXPECT_EQ(back.graph.vertices, g.vertices);
}

TEST(EdgeList, MalformedLineIsAnInputError) {
  EXPECT_THROW(read_edge_list("#cocomment-graph v1 window=1\na\tb\n"), InputError);
  EXPECT_THROW(read_edge_list("#cocomment-graph v1 window=1\na\ta\t1\n"), InputError);
}
