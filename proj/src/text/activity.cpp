#include "cocomment/text/activity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <json.hpp>

#include "cocomment/error.hpp"

namespace cocomment::text {

namespace {

// Row-normalised community x key counts, where key(record) picks the column.
template <typename KeyFn>
LabeledMatrix fraction_matrix(const CommunityAssignment& assignment, const Snapshot& snapshot, KeyFn key) {
  std::map<std::uint32_t, std::map<std::string, double>> counts;
  std::map<std::string, int> columns;
  for (const auto& r : snapshot.comments) {
    auto it = assignment.labels.find(r.commenter_id);
    if (it == assignment.labels.end()) continue;
    const std::string& k = key(r);
    counts[it->second][k] += 1.0;
    columns.emplace(k, 0);
  }
  LabeledMatrix m;
  for (auto& [k, idx] : columns) {
    idx = static_cast<int>(m.column_labels.size());
    m.column_labels.push_back(k);
  }
  for (const auto& [community, row_counts] : counts) {
    double total = 0.0;
    for (const auto& [k, n] : row_counts) total += n;
    if (total == 0.0) continue;
    std::vector<double> row(m.column_labels.size(), 0.0);
    for (const auto& [k, n] : row_counts) row[columns.at(k)] = n / total;
    m.row_labels.push_back(std::to_string(community));
    m.values.push_back(std::move(row));
  }
  return m;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace

std::string matrix_to_json(const LabeledMatrix& m) {
  nlohmann::json j;
  j["rows"] = m.row_labels;
  j["columns"] = m.column_labels;
  j["values"] = m.values;
  return j.dump(1) + "\n";
}

InterestIndex interest_index(const CommunityAssignment& assignment, const Snapshot& snapshot) {
  InterestIndex out;
  out.matrix = fraction_matrix(assignment, snapshot, [](const InteractionRecord& r) -> const std::string& { return r.post_id; });
  const auto& m = out.matrix;
  for (std::size_t c = 0; c < m.columns(); ++c) {
    PostInterest pi;
    pi.post_id = m.column_labels[c];
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const double v = m.values[r][c];
      if (v > pi.top1) {
        pi.top2 = pi.top1;
        pi.top1 = v;
        pi.top_community = static_cast<std::uint32_t>(std::stoul(m.row_labels[r]));
      } else if (v > pi.top2) {
        pi.top2 = v;
      }
    }
    if (pi.top2 > 0.0) pi.ratio = pi.top1 / pi.top2;
    out.posts.push_back(std::move(pi));
  }
  return out;
}

LabeledMatrix community_influencer_matrix(const CommunityAssignment& assignment, const Snapshot& snapshot) {
  return fraction_matrix(assignment, snapshot, [](const InteractionRecord& r) -> const std::string& { return r.influencer_id; });
}

Dendrogram influencer_dendrogram(const LabeledMatrix& matrix) {
  const std::size_t n = matrix.columns();
  if (n < 2) throw InputError("a dendrogram needs at least two influencer columns");
  if (matrix.rows() < 2) throw UndefinedError("correlation needs at least two community rows");
  std::vector<std::vector<double>> cols(n, std::vector<double>(matrix.rows()));
  for (std::size_t r = 0; r < matrix.rows(); ++r)
    for (std::size_t c = 0; c < n; ++c) cols[c][r] = matrix.values[r][c];
  for (std::size_t c = 0; c < n; ++c)
    if (std::all_of(cols[c].begin(), cols[c].end(), [&](double v) { return v == cols[c][0]; }))
      throw UndefinedError("influencer '" + matrix.column_labels[c] + "' has a constant column; correlation is undefined");

  // Active clusters with their size, smallest leaf and distances.
  struct Cluster {
    std::uint32_t id;
    std::uint32_t size;
    std::uint32_t min_leaf;
  };
  std::vector<Cluster> active;
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::uint32_t i = 0; i < n; ++i) {
    active.push_back({i, 1, i});
    for (std::uint32_t j = 0; j < n; ++j)
      if (i != j) dist[i][j] = 1.0 - pearson(cols[i], cols[j]);
  }

  Dendrogram d;
  d.leaves = matrix.column_labels;
  std::uint32_t next_id = static_cast<std::uint32_t>(n);
  while (active.size() > 1) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    auto key = [&](std::size_t i, std::size_t j) {
      return std::minmax(active[i].min_leaf, active[j].min_leaf);
    };
    for (std::size_t i = 0; i < active.size(); ++i)
      for (std::size_t j = i + 1; j < active.size(); ++j) {
        const double v = dist[i][j];
        if (v < best || (v == best && key(i, j) < key(bi, bj))) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    const auto& a = active[bi];
    const auto& b = active[bj];
    const bool a_first = a.min_leaf < b.min_leaf;
    d.merges.push_back({a_first ? a.id : b.id, a_first ? b.id : a.id, best, a.size + b.size});
    const double sa = a.size, sb = b.size;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (k == bi || k == bj) continue;
      const double merged = (sa * dist[bi][k] + sb * dist[bj][k]) / (sa + sb);
      dist[bi][k] = dist[k][bi] = merged;
    }
    active[bi] = {next_id++, a.size + b.size, std::min(a.min_leaf, b.min_leaf)};
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(bj));
    dist.erase(dist.begin() + static_cast<std::ptrdiff_t>(bj));
    for (auto& row : dist) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
  }
  return d;
}

std::string dendrogram_to_json(const Dendrogram& d) {
  nlohmann::json j;
  j["leaves"] = d.leaves;
  j["merges"] = nlohmann::json::array();
  for (const auto& m : d.merges)
    j["merges"].push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
  return j.dump(1) + "\n";
}

Sentiment sentiment_classify(int score) {
  if (score < 0) return Sentiment::kNegative;
  if (score > 0) return Sentiment::kPositive;
  return Sentiment::kNeutral;
}

SentimentBreakdown sentiment_breakdown(const CommunityAssignment& assignment, const Snapshot& snapshot,
                                       std::uint32_t community, const std::string& influencer) {
  SentimentBreakdown b;
  for (const auto& r : snapshot.comments) {
    if (!r.sentiment || r.influencer_id != influencer) continue;
    auto it = assignment.labels.find(r.commenter_id);
    if (it == assignment.labels.end() || it->second != community) continue;
    switch (sentiment_classify(*r.sentiment)) {
      case Sentiment::kNegative: ++b.negative; break;
      case Sentiment::kNeutral: ++b.neutral; break;
      case Sentiment::kPositive: ++b.positive; break;
    }
  }
  return b;
}

std::optional<double> contrastive_score(const CommunityAssignment& assignment, const Snapshot& snapshot,
                                        std::uint32_t community, const std::string& influencer,
                                        std::size_t min_comments) {
  const auto b = sentiment_breakdown(assignment, snapshot, community, influencer);
  if (b.total() == 0 || b.total() < min_comments) return std::nullopt;
  const double n = static_cast<double>(b.total());
  return static_cast<double>(b.positive) / n - static_cast<double>(b.negative) / n;
}

}  // namespace cocomment::text
