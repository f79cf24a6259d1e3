#include <gtest/gtest.h>

#include <cmath>

#include "cocomment/dynamics.hpp"
#include "cocomment/error.hpp"
#include "fixtures.hpp"

using namespace cocomment;
using Labels = std::map<std::string, std::uint32_t>;

namespace {

CoCommentGraph path(const std::vector<std::string>& v) {
  std::vector<std::tuple<std::string, std::string, std::uint32_t>> e;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) e.emplace_back(v[i], v[i + 1], 1);
  return graph_from_edges(1, e);
}

}  // namespace

TEST(Persistence, IdenticalDisjointAndPartial) {
  const auto a = path({"a", "b", "c"});
  EXPECT_DOUBLE_EQ(persistence(a, a), 1.0);
  EXPECT_DOUBLE_EQ(persistence(a, path({"x", "y"})), 0.0);
  std::vector<std::string> ten;
  for (int i = 0; i < 10; ++i) ten.push_back("m" + std::to_string(i));
  const auto later = path({"m0", "m1", "m2", "m3", "m4", "m5", "z"});
  EXPECT_DOUBLE_EQ(persistence(ten, later), 0.6);
  EXPECT_THROW(persistence(CoCommentGraph{}, a), UndefinedError);
}

TEST(Nmi, IdenticalPartitions) {
  const Labels x{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
  EXPECT_NEAR(membership_nmi(x, x, {"a", "b", "c", "d"}), 1.0, 1e-12);
}

TEST(Nmi, IndependentPartitions) {
  const Labels x{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
  const Labels y{{"a", 0}, {"b", 1}, {"c", 0}, {"d", 1}};
  EXPECT_NEAR(membership_nmi(x, y, {"a", "b", "c", "d"}), 0.0, 1e-12);
}

TEST(Nmi, RefinedPartitionHandValue) {
  const Labels x{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
  const Labels y{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 2}};
  const double v = membership_nmi(x, y, {"a", "b", "c", "d"});
  EXPECT_NEAR(v, 1.0 / std::sqrt(1.5), 1e-12);
  EXPECT_NEAR(v, 0.8165, 1e-4);
  EXPECT_NEAR(membership_nmi(y, x, {"a", "b", "c", "d"}), v, 1e-15);
}

TEST(Nmi, RelabelingInvariant) {
  const Labels x{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}, {"e", 2}};
  const Labels y{{"a", 1}, {"b", 0}, {"c", 0}, {"d", 2}, {"e", 2}};
  const Labels y2{{"a", 9}, {"b", 4}, {"c", 4}, {"d", 6}, {"e", 6}};
  const std::vector<std::string> all{"a", "b", "c", "d", "e"};
  EXPECT_NEAR(membership_nmi(x, y, all), membership_nmi(x, y2, all), 1e-15);
}

TEST(Nmi, DegenerateRules) {
  const Labels one{{"a", 0}, {"b", 0}};
  const Labels two{{"a", 0}, {"b", 1}};
  EXPECT_EQ(membership_nmi(one, one, {"a", "b"}), 1.0);
  EXPECT_EQ(membership_nmi(one, two, {"a", "b"}), 0.0);
  EXPECT_THROW(membership_nmi(one, one, {}), UndefinedError);
}

TEST(TopK, FractionsAndTies) {
  std::vector<InteractionRecord> r;
  std::vector<std::string> members;
  for (int i = 0; i < 100; ++i) {
    std::string id = "u" + std::string(i < 10 ? "0" : "") + std::to_string(i);
    members.push_back(id);
    for (int k = 0; k <= i % 50; ++k) r.push_back(fixtures::rec(id, "i", "p" + std::to_string(k)));
  }
  const auto s = make_snapshot(1, r);
  const auto b = path(members);
  EXPECT_EQ(top_k_commenters(s, b, 1.0).size(), 100u);
  // Counts peak at 50 for u49 and u99, then 49 for u48 and u98, ...; the
  // five largest are u49, u99, u48, u98 and, on the tie at 48, u47 < u97.
  EXPECT_EQ(top_k_commenters(s, b, 0.05), (std::vector<std::string>{"u47", "u48", "u49", "u98", "u99"}));
  EXPECT_EQ(top_k_commenters(s, b, 0.01), (std::vector<std::string>{"u49"}));
  EXPECT_THROW(top_k_commenters(s, b, 0.0), ConfigError);
}

TEST(Matching, IdenticalCopyMatches) {
  const text::TermVector a{{"x", 2.0}, {"y", 1.0}};
  const text::TermVector other{{"z", 1.0}};
  const text::TermVector baseline{{"x", 1.0}, {"z", 3.0}};
  const auto m = match_communities({a}, {other, a}, baseline);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].community_w1, 1u);
  EXPECT_NEAR(m[0].similarity, 1.0, 1e-12);
}

TEST(Matching, OrthogonalVocabulariesNeverMatch) {
  const auto m = match_communities({{{"a", 1.0}}, {{"b", 1.0}}}, {{{"c", 1.0}}}, {{"c", 1.0}});
  for (const auto& x : m) EXPECT_FALSE(x.community_w1.has_value());
}

TEST(Matching, ThreeCommunityHandFixture) {
  // A->K0: 1/sqrt2 = 0.7071 vs baseline 2/sqrt20 = 0.4472: match.
  // B->K1: 1/sqrt2 = 0.7071 vs baseline 2/sqrt10 = 0.6325: match.
  // C: similarity 0 everywhere, baseline 0: no match.
  const std::vector<text::TermVector> w{{{"x", 1}, {"y", 1}}, {{"z", 1}}, {{"w", 1}}};
  const std::vector<text::TermVector> w1{{{"x", 1}}, {{"y", 1}, {"z", 1}}, {{"v", 1}}};
  const text::TermVector baseline{{"x", 1}, {"y", 1}, {"z", 2}, {"v", 2}};
  const auto m = match_communities(w, w1, baseline);
  EXPECT_EQ(m[0].community_w1, 0u);
  EXPECT_NEAR(m[0].similarity, 0.7071, 1e-4);
  EXPECT_NEAR(m[0].baseline, 0.4472, 1e-4);
  EXPECT_EQ(m[1].community_w1, 1u);
  EXPECT_NEAR(m[1].baseline, 0.6325, 1e-4);
  EXPECT_FALSE(m[2].community_w1.has_value());
}

TEST(Matching, SelfMatchWhenBaselineBelowOne) {
  const std::vector<text::TermVector> docs{{{"a", 1}, {"b", 2}}, {{"c", 3}}, {{"a", 1}, {"d", 1}}};
  const text::TermVector baseline{{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}};
  const auto m = match_communities(docs, docs, baseline);
  for (std::uint32_t j = 0; j < docs.size(); ++j) EXPECT_EQ(m[j].community_w1, j);
}

TEST(TemporalReport, ConsecutiveWindowsOnly) {
  std::vector<Snapshot> snaps;
  for (int w : {1, 2, 4}) {
    std::vector<InteractionRecord> r;
    fixtures::add_post(r, "i", "p" + std::to_string(w), {"a", "b", "c"});
    snaps.push_back(make_snapshot(w, r));
  }
  const auto b1 = path({"a", "b", "c"});
  const auto b2 = path({"a", "b", "z"});
  const Labels l1{{"a", 0}, {"b", 0}, {"c", 1}};
  const Labels l2{{"a", 0}, {"b", 1}, {"z", 1}};
  CommunityAssignment a1, a2;
  a1.labels = l1;
  a2.labels = l2;
  std::vector<WindowArtifacts> windows(3);
  const CoCommentGraph* bb[] = {&b1, &b2, &b1};
  const CommunityAssignment* aa[] = {&a1, &a2, &a1};
  for (int i = 0; i < 3; ++i) {
    windows[i].snapshot = &snaps[i];
    windows[i].backbone = bb[i];
    windows[i].communities = aa[i];
  }
  const auto report = temporal_report(windows);
  ASSERT_EQ(report.size(), 3u);  // 1->2 for three cohorts; 2->4 skipped
  EXPECT_EQ(report[0].cohort, Cohort::kAll);
  EXPECT_EQ(report[0].window_to, 2);
  EXPECT_NEAR(*report[0].persistence, 2.0 / 3.0, 1e-12);
  EXPECT_EQ(*report[0].nmi, 0.0);  // {a,b} together before, apart after
  EXPECT_NE(temporal_report_to_json(report).find("\"top5pct\""), std::string::npos);
}
