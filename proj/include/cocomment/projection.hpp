#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cocomment/ingest.hpp"

namespace cocomment {

using VertexId = std::uint32_t;

struct WeightedEdge {
  VertexId source = 0;  // source < target
  VertexId target = 0;
  std::uint32_t weight = 0;

  bool operator==(const WeightedEdge&) const = default;
};

// Weighted undirected co-commenter graph. Vertex ids index the sorted
// commenter list, so id order is lexicographic id order; edges are sorted
// by (source, target) and carry the number of shared posts.
struct CoCommentGraph {
  int window_index = 0;
  std::vector<std::string> vertices;
  std::vector<WeightedEdge> edges;

  bool operator==(const CoCommentGraph&) const = default;

  std::optional<VertexId> find_vertex(std::string_view id) const;
  std::optional<std::uint32_t> weight(std::string_view a, std::string_view b) const;
  std::uint64_t total_weight() const;
  // Weighted degree per vertex.
  std::vector<double> strengths() const;
};

struct BuildOptions {
  std::optional<std::size_t> clique_cap;               // max |C_p|
  std::size_t max_pair_incidences = 500'000'000;        // total pairs generated
  unsigned threads = 1;
};

// Superposition of one clique per post. Throws ResourceError naming the
// post that exceeds the clique cap or pushes the pair budget over.
CoCommentGraph build_graph(const Snapshot& snapshot, const BuildOptions& options = {});

// Builds a graph from explicit (id, id, weight) triples; duplicate pairs sum.
CoCommentGraph graph_from_edges(int window_index,
                                std::span<const std::tuple<std::string, std::string, std::uint32_t>> edges);

// Keeps the flagged edges and the vertices they touch.
CoCommentGraph edge_subgraph(const CoCommentGraph& graph, const std::vector<bool>& keep);

struct GraphStats {
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  std::uint64_t total_weight = 0;
  std::map<std::uint32_t, std::size_t> weight_histogram;
  std::map<std::uint32_t, double> weight_fractions;
};

GraphStats graph_stats(const CoCommentGraph& graph);
std::string graph_stats_to_json(const GraphStats& stats);

// TSV edge list: header line, then "src<TAB>dst<TAB>weight" in (src, dst)
// order. Isolated vertices are not representable.
std::string write_edge_list(const CoCommentGraph& graph, std::string_view header);
std::string graph_header(int window_index);

struct EdgeListFile {
  std::string header;
  CoCommentGraph graph;
};
EdgeListFile read_edge_list(std::string_view text);

// Parses "key=value" tokens of a header line such as
// "#backbone v1 window=3 alpha=0.05 strict=true".
std::map<std::string, std::string> header_fields(std::string_view header);

}  // namespace cocomment
