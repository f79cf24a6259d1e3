#include "cocomment/projection.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "cocomment/error.hpp"
#include "cocomment/parallel.hpp"

namespace cocomment {

namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Run-length reduces sorted pair keys into weighted edges.
std::vector<WeightedEdge> reduce_sorted(const std::vector<std::uint64_t>& keys) {
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    edges.push_back({static_cast<VertexId>(keys[i] >> 32), static_cast<VertexId>(keys[i] & 0xFFFFFFFFu),
                     static_cast<std::uint32_t>(j - i)});
    i = j;
  }
  return edges;
}

}  // namespace

std::optional<VertexId> CoCommentGraph::find_vertex(std::string_view id) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), id);
  if (it == vertices.end() || *it != id) return std::nullopt;
  return static_cast<VertexId>(it - vertices.begin());
}

std::optional<std::uint32_t> CoCommentGraph::weight(std::string_view a, std::string_view b) const {
  auto ia = find_vertex(a), ib = find_vertex(b);
  if (!ia || !ib || *ia == *ib) return std::nullopt;
  auto [s, t] = std::minmax(*ia, *ib);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{s, t},
                             [](const WeightedEdge& e, const std::pair<VertexId, VertexId>& k) {
                               return std::pair{e.source, e.target} < k;
                             });
  if (it == edges.end() || it->source != s || it->target != t) return std::nullopt;
  return it->weight;
}

std::uint64_t CoCommentGraph::total_weight() const {
  std::uint64_t total = 0;
  for (const auto& e : edges) total += e.weight;
  return total;
}

std::vector<double> CoCommentGraph::strengths() const {
  std::vector<double> k(vertices.size(), 0.0);
  for (const auto& e : edges) {
    k[e.source] += e.weight;
    k[e.target] += e.weight;
  }
  return k;
}

CoCommentGraph build_graph(const Snapshot& snapshot, const BuildOptions& options) {
  CoCommentGraph g;
  g.window_index = snapshot.window_index;
  g.vertices = snapshot.commenters();

  std::unordered_map<std::string_view, VertexId> index;
  index.reserve(g.vertices.size());
  for (VertexId v = 0; v < g.vertices.size(); ++v) index.emplace(g.vertices[v], v);

  std::vector<std::vector<VertexId>> cliques;
  std::vector<std::size_t> offsets{0};
  cliques.reserve(snapshot.commenters_per_post.size());
  for (const auto& [post, members] : snapshot.commenters_per_post) {
    if (options.clique_cap && members.size() > *options.clique_cap)
      throw ResourceError("post '" + post + "' has " + std::to_string(members.size()) +
                          " commenters, above the clique cap of " + std::to_string(*options.clique_cap));
    const std::size_t pairs = members.size() * (members.size() - 1) / 2;
    if (offsets.back() + pairs > options.max_pair_incidences)
      throw ResourceError("post '" + post + "' (" + std::to_string(members.size()) +
                          " commenters) pushes the pair count past the budget of " +
                          std::to_string(options.max_pair_incidences));
    std::vector<VertexId> ids;
    ids.reserve(members.size());
    for (const auto& m : members) ids.push_back(index.at(m));
    std::sort(ids.begin(), ids.end());
    cliques.push_back(std::move(ids));
    offsets.push_back(offsets.back() + pairs);
  }

  std::vector<std::uint64_t> keys(offsets.back());
  parallel_for(cliques.size(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      std::size_t out = offsets[p];
      const auto& ids = cliques[p];
      for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b) keys[out++] = pair_key(ids[a], ids[b]);
    }
  });
  std::sort(keys.begin(), keys.end());
  g.edges = reduce_sorted(keys);
  return g;
}

CoCommentGraph graph_from_edges(int window_index,
                                std::span<const std::tuple<std::string, std::string, std::uint32_t>> edges) {
  CoCommentGraph g;
  g.window_index = window_index;
  for (const auto& [a, b, w] : edges) {
    g.vertices.push_back(a);
    g.vertices.push_back(b);
  }
  std::sort(g.vertices.begin(), g.vertices.end());
  g.vertices.erase(std::unique(g.vertices.begin(), g.vertices.end()), g.vertices.end());
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed;
  keyed.reserve(edges.size());
  for (const auto& [a, b, w] : edges) {
    if (a == b) throw InputError("self-loop on '" + a + "'");
    if (w == 0) throw InputError("edge " + a + "-" + b + " has zero weight");
    auto [s, t] = std::minmax(*g.find_vertex(a), *g.find_vertex(b));
    keyed.emplace_back(pair_key(s, t), w);
  }
  std::sort(keyed.begin(), keyed.end());
  for (const auto& [key, w] : keyed) {
    const auto s = static_cast<VertexId>(key >> 32), t = static_cast<VertexId>(key & 0xFFFFFFFFu);
    if (!g.edges.empty() && g.edges.back().source == s && g.edges.back().target == t)
      g.edges.back().weight += w;
    else
      g.edges.push_back({s, t, w});
  }
  return g;
}

CoCommentGraph edge_subgraph(const CoCommentGraph& graph, const std::vector<bool>& keep) {
  std::vector<char> used(graph.vertices.size(), 0);
  for (std::size_t i = 0; i < graph.edges.size(); ++i)
    if (keep[i]) used[graph.edges[i].source] = used[graph.edges[i].target] = 1;
  std::vector<VertexId> remap(graph.vertices.size(), 0);
  CoCommentGraph out;
  out.window_index = graph.window_index;
  for (VertexId v = 0; v < graph.vertices.size(); ++v)
    if (used[v]) {
      remap[v] = static_cast<VertexId>(out.vertices.size());
      out.vertices.push_back(graph.vertices[v]);
    }
  for (std::size_t i = 0; i < graph.edges.size(); ++i)
    if (keep[i]) {
      const auto& e = graph.edges[i];
      out.edges.push_back({remap[e.source], remap[e.target], e.weight});
    }
  return out;
}

GraphStats graph_stats(const CoCommentGraph& graph) {
  GraphStats s;
  s.vertex_count = graph.vertices.size();
  s.edge_count = graph.edges.size();
  for (const auto& e : graph.edges) {
    s.total_weight += e.weight;
    ++s.weight_histogram[e.weight];
  }
  for (const auto& [w, n] : s.weight_histogram)
    s.weight_fractions[w] = static_cast<double>(n) / static_cast<double>(s.edge_count);
  return s;
}

std::string graph_stats_to_json(const GraphStats& s) {
  nlohmann::json j;
  j["vertex_count"] = s.vertex_count;
  j["edge_count"] = s.edge_count;
  j["total_weight"] = s.total_weight;
  j["weight_histogram"] = nlohmann::json::object();
  j["weight_fractions"] = nlohmann::json::object();
  for (const auto& [w, n] : s.weight_histogram) j["weight_histogram"][std::to_string(w)] = n;
  for (const auto& [w, f] : s.weight_fractions) j["weight_fractions"][std::to_string(w)] = f;
  return j.dump(1) + "\n";
}

std::string graph_header(int window_index) {
  return "#cocomment-graph v1 window=" + std::to_string(window_index);
}

std::string write_edge_list(const CoCommentGraph& graph, std::string_view header) {
  std::string out;
  out.reserve(graph.edges.size() * 24 + header.size() + 1);
  out.append(header);
  out.push_back('\n');
  char buf[16];
  for (const auto& e : graph.edges) {
    out.append(graph.vertices[e.source]);
    out.push_back('\t');
    out.append(graph.vertices[e.target]);
    out.push_back('\t');
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.weight);
    out.append(buf, ptr);
    out.push_back('\n');
  }
  return out;
}

std::map<std::string, std::string> header_fields(std::string_view header) {
  std::map<std::string, std::string> fields;
  std::size_t pos = 0;
  while (pos < header.size()) {
    const auto end = std::min(header.find(' ', pos), header.size());
    const auto token = header.substr(pos, end - pos);
    if (const auto eq = token.find('='); eq != std::string_view::npos)
      fields.emplace(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
    pos = end + 1;
  }
  return fields;
}

EdgeListFile read_edge_list(std::string_view text) {
  EdgeListFile file;
  std::vector<std::tuple<std::string, std::string, std::uint32_t>> edges;
  std::size_t pos = 0, line_no = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line_no == 1) file.header = std::string(line);
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos)
      throw InputError("edge list line " + std::to_string(line_no) + ": expected 3 tab-separated fields");
    std::uint32_t w = 0;
    const auto wtxt = line.substr(t2 + 1);
    auto [ptr, ec] = std::from_chars(wtxt.data(), wtxt.data() + wtxt.size(), w);
    if (ec != std::errc() || ptr != wtxt.data() + wtxt.size() || w == 0)
      throw InputError("edge list line " + std::to_string(line_no) + ": bad weight");
    edges.emplace_back(std::string(line.substr(0, t1)), std::string(line.substr(t1 + 1, t2 - t1 - 1)), w);
  }
  int window = 0;
  if (auto fields = header_fields(file.header); fields.contains("window")) {
    try {
      window = std::stoi(fields["window"]);
    } catch (const std::exception&) {
      throw InputError("edge list header has a bad window field");
    }
  }
  file.graph = graph_from_edges(window, edges);
  return file;
}

}  // namespace cocomment
