#include "cocomment/community.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "cocomment/error.hpp"
#include "cocomment/random.hpp"

namespace cocomment {

std::vector<std::vector<std::string>> CommunityAssignment::communities() const {
  std::vector<std::vector<std::string>> out(community_count);
  for (const auto& [id, label] : labels) out.at(label).push_back(id);
  return out;
}

std::vector<std::uint32_t> CommunityAssignment::labels_for(const CoCommentGraph& graph) const {
  std::vector<std::uint32_t> out;
  out.reserve(graph.vertices.size());
  for (const auto& v : graph.vertices) {
    auto it = labels.find(v);
    if (it == labels.end()) throw InputError("vertex '" + v + "' has no community label");
    out.push_back(it->second);
  }
  return out;
}

double modularity(const CoCommentGraph& graph, std::span<const std::uint32_t> labels) {
  if (labels.size() != graph.vertices.size()) throw InputError("labels do not cover all vertices");
  const double m2 = 2.0 * static_cast<double>(graph.total_weight());
  if (m2 == 0.0) throw UndefinedError("modularity is undefined for a graph without edge weight");
  const auto k = graph.strengths();
  const std::uint32_t n_labels = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<double> internal(n_labels, 0.0), total(n_labels, 0.0);
  for (std::size_t v = 0; v < labels.size(); ++v) total[labels[v]] += k[v];
  for (const auto& e : graph.edges)
    if (labels[e.source] == labels[e.target]) internal[labels[e.source]] += 2.0 * e.weight;
  double q = 0.0;
  for (std::uint32_t c = 0; c < n_labels; ++c) q += internal[c] / m2 - (total[c] / m2) * (total[c] / m2);
  return q;
}

std::vector<std::uint32_t> canonical_labels(std::span<const std::uint32_t> labels) {
  const std::uint32_t n = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> size(n, 0), first(n, labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    ++size[labels[v]];
    first[labels[v]] = std::min(first[labels[v]], v);
  }
  std::vector<std::uint32_t> order;
  for (std::uint32_t c = 0; c < n; ++c)
    if (size[c] > 0) order.push_back(c);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (size[a] != size[b]) return size[a] > size[b];
    return first[a] < first[b];
  });
  std::vector<std::uint32_t> rename(n, 0);
  for (std::uint32_t i = 0; i < order.size(); ++i) rename[order[i]] = i;
  std::vector<std::uint32_t> out(labels.size());
  for (std::size_t v = 0; v < labels.size(); ++v) out[v] = rename[labels[v]];
  return out;
}

namespace {

// Weighted graph of one Louvain level. `self` holds A_ii (twice the
// internal weight of an aggregated node); adjacency excludes self loops.
struct LevelGraph {
  std::vector<std::uint32_t> offsets;
  std::vector<std::pair<std::uint32_t, double>> adj;
  std::vector<double> self;
  std::vector<double> strength;
  double m2 = 0.0;

  std::size_t size() const { return self.size(); }

  static LevelGraph from(const CoCommentGraph& g) {
    const std::size_t n = g.vertices.size();
    std::vector<std::vector<std::pair<std::uint32_t, double>>> lists(n);
    for (const auto& e : g.edges) {
      lists[e.source].emplace_back(e.target, e.weight);
      lists[e.target].emplace_back(e.source, e.weight);
    }
    return from_lists(lists, std::vector<double>(n, 0.0));
  }

  static LevelGraph from_lists(std::vector<std::vector<std::pair<std::uint32_t, double>>>& lists,
                               std::vector<double> self_loops) {
    LevelGraph lg;
    const std::size_t n = lists.size();
    lg.offsets.push_back(0);
    lg.self = std::move(self_loops);
    lg.strength.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto& l = lists[i];
      std::sort(l.begin(), l.end());
      for (const auto& [j, w] : l) {
        lg.adj.emplace_back(j, w);
        lg.strength[i] += w;
      }
      lg.strength[i] += lg.self[i];
      lg.offsets.push_back(static_cast<std::uint32_t>(lg.adj.size()));
    }
    lg.m2 = std::accumulate(lg.strength.begin(), lg.strength.end(), 0.0);
    return lg;
  }

  double modularity(const std::vector<std::uint32_t>& comm) const {
    std::vector<double> in(size(), 0.0), tot(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
      tot[comm[i]] += strength[i];
      in[comm[i]] += self[i];
      for (auto k = offsets[i]; k < offsets[i + 1]; ++k)
        if (comm[adj[k].first] == comm[i]) in[comm[i]] += adj[k].second;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < size(); ++c) q += in[c] / m2 - (tot[c] / m2) * (tot[c] / m2);
    return q;
  }
};

constexpr double kGainEps = 1e-12;

// One local-move phase. Returns true if any vertex changed community.
bool local_moves(const LevelGraph& g, std::vector<std::uint32_t>& comm, Rng& rng) {
  const std::size_t n = g.size();
  std::vector<double> tot(g.strength);
  std::vector<double> neigh_weight(n, -1.0);
  std::vector<std::uint32_t> neigh_comms;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order);

  bool any_move = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t own = comm[i];
      const double ki = g.strength[i];
      neigh_comms.clear();
      neigh_weight[own] = 0.0;
      neigh_comms.push_back(own);
      for (auto k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
        const auto c = comm[g.adj[k].first];
        if (neigh_weight[c] < 0.0) {
          neigh_weight[c] = 0.0;
          neigh_comms.push_back(c);
        }
        neigh_weight[c] += g.adj[k].second;
      }
      tot[own] -= ki;
      std::uint32_t best = own;
      double best_gain = neigh_weight[own] - tot[own] * ki / g.m2;
      const double own_gain = best_gain;
      for (std::uint32_t c : neigh_comms) {
        if (c == own) continue;
        const double gain = neigh_weight[c] - tot[c] * ki / g.m2;
        if (gain > best_gain + kGainEps && gain > own_gain + kGainEps) {
          best = c;
          best_gain = gain;
        } else if (best != own && gain >= best_gain - kGainEps && gain <= best_gain + kGainEps && c < best) {
          best = c;
        }
      }
      tot[best] += ki;
      comm[i] = best;
      for (std::uint32_t c : neigh_comms) neigh_weight[c] = -1.0;
      if (best != own) {
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

// Renumbers communities densely (by first vertex) and builds the
// community graph.
LevelGraph aggregate(const LevelGraph& g, std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> rename(g.size(), UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (rename[c] == UINT32_MAX) rename[c] = next++;
    c = rename[c];
  }
  std::vector<std::map<std::uint32_t, double>> acc(next);
  std::vector<double> self(next, 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ci = comm[i];
    self[ci] += g.self[i];
    for (auto k = g.offsets[i]; k < g.offsets[i + 1]; ++k) {
      const auto cj = comm[g.adj[k].first];
      if (cj == ci)
        self[ci] += g.adj[k].second;
      else
        acc[ci][cj] += g.adj[k].second;
    }
  }
  std::vector<std::vector<std::pair<std::uint32_t, double>>> lists(next);
  for (std::uint32_t c = 0; c < next; ++c) lists[c].assign(acc[c].begin(), acc[c].end());
  return LevelGraph::from_lists(lists, std::move(self));
}

}  // namespace

CommunityAssignment louvain(const CoCommentGraph& graph, std::uint64_t seed) {
  if (graph.vertices.empty()) throw InputError("louvain: empty graph");
  if (graph.total_weight() == 0) throw UndefinedError("louvain: graph has no edges");

  Rng rng(seed);
  LevelGraph level = LevelGraph::from(graph);
  std::vector<std::uint32_t> membership(graph.vertices.size());
  std::iota(membership.begin(), membership.end(), 0u);

  CommunityAssignment result;
  result.window_index = graph.window_index;
  result.seed = seed;
  for (;;) {
    std::vector<std::uint32_t> comm(level.size());
    std::iota(comm.begin(), comm.end(), 0u);
    const bool moved = local_moves(level, comm, rng);
    if (!moved) break;
    result.level_modularity.push_back(level.modularity(comm));
    LevelGraph next = aggregate(level, comm);
    for (auto& m : membership) m = comm[m];
    level = std::move(next);
  }

  const auto labels = canonical_labels(membership);
  result.modularity = modularity(graph, labels);
  result.community_count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  for (std::size_t v = 0; v < labels.size(); ++v) result.labels.emplace(graph.vertices[v], labels[v]);
  return result;
}

std::string assignment_to_json(const CommunityAssignment& a) {
  nlohmann::json j;
  j["window"] = a.window_index;
  j["seed"] = a.seed;
  // An edgeless backbone has no partition and an undefined modularity.
  j["modularity"] = a.community_count == 0 ? nlohmann::json(nullptr) : nlohmann::json(a.modularity);
  j["level_modularity"] = a.level_modularity;
  j["communities"] = nlohmann::json::array();
  const auto members = a.communities();
  for (std::uint32_t c = 0; c < members.size(); ++c)
    j["communities"].push_back({{"id", c}, {"size", members[c].size()}, {"members", members[c]}});
  return j.dump(1) + "\n";
}

CommunityAssignment assignment_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw InputError("community assignment is not a JSON object");
  try {
    CommunityAssignment a;
    a.window_index = j.at("window").get<int>();
    a.seed = j.at("seed").get<std::uint64_t>();
    a.modularity = j.at("modularity").is_null() ? 0.0 : j["modularity"].get<double>();
    if (j.contains("level_modularity")) a.level_modularity = j["level_modularity"].get<std::vector<double>>();
    for (const auto& c : j.at("communities")) {
      const auto id = c.at("id").get<std::uint32_t>();
      for (const auto& m : c.at("members")) a.labels[m.get<std::string>()] = id;
      a.community_count = std::max(a.community_count, id + 1);
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed community assignment: ") + e.what());
  }
}

}  // namespace cocomment
