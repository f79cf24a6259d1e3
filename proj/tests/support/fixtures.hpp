#pragma once

#include <set>
#include <string>
#include <vector>

#include "cocomment/ingest.hpp"
#include "cocomment/projection.hpp"

namespace fixtures {

inline cocomment::InteractionRecord rec(const std::string& commenter, const std::string& influencer,
                                        const std::string& post, const std::string& ts = "2018-09-04T12:00:00Z") {
  cocomment::InteractionRecord r;
  r.commenter_id = commenter;
  r.influencer_id = influencer;
  r.post_id = post;
  r.timestamp = *cocomment::parse_timestamp(ts);
  return r;
}

inline void add_post(std::vector<cocomment::InteractionRecord>& out, const std::string& influencer,
                     const std::string& post, const std::vector<std::string>& commenters) {
  for (const auto& c : commenters) out.push_back(rec(c, influencer, post));
}

// Three commenters of interest (c, d, e) and fillers o1..o3 spread over
// seven posts of influencers i (p1..p4) and j (p5..p7). Engagement:
// f_i(c) = 3/11, f_i(d) = 2/11, f_i(e) = 1/11, f_j(.) = 1/7.
inline std::vector<cocomment::InteractionRecord> toy_records() {
  std::vector<cocomment::InteractionRecord> r;
  add_post(r, "i", "p1", {"c", "d", "o1"});
  add_post(r, "i", "p2", {"c", "o1"});
  add_post(r, "i", "p3", {"c", "d", "e"});
  add_post(r, "i", "p4", {"o1", "o2", "o3"});
  add_post(r, "j", "p5", {"o2", "o3"});
  add_post(r, "j", "p6", {"o1", "o2"});
  add_post(r, "j", "p7", {"c", "d", "e"});
  return r;
}

// c and e co-comment on six of influencer i's ten busy posts; c and d share
// three small posts of influencer j. Backgrounds b10..b29 fill i's posts.
inline std::vector<cocomment::InteractionRecord> salient_pair_records() {
  std::vector<cocomment::InteractionRecord> r;
  for (int k = 0; k < 10; ++k) {
    std::set<std::string> members;
    if (k < 6) members = {"c", "e"};
    int off = (k * 7) % 20;
    while (members.size() < 10) members.insert("b" + std::to_string(10 + (off++ % 20)));
    add_post(r, "i", "i" + std::to_string(k), {members.begin(), members.end()});
  }
  for (int k = 0; k < 3; ++k) add_post(r, "j", "j" + std::to_string(k), {"c", "d"});
  return r;
}

// Two triangles with no edge between them, unit weights.
inline cocomment::CoCommentGraph two_triangles() {
  std::vector<std::tuple<std::string, std::string, std::uint32_t>> e = {
      {"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1}, {"x", "y", 1}, {"y", "z", 1}, {"x", "z", 1}};
  return cocomment::graph_from_edges(1, e);
}

}  // namespace fixtures
