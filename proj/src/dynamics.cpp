#include "cocomment/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <json.hpp>

#include "cocomment/error.hpp"

namespace cocomment {

double persistence(const std::vector<std::string>& members_w, const CoCommentGraph& backbone_w1) {
  if (members_w.empty()) throw UndefinedError("persistence is undefined for an empty backbone");
  std::size_t kept = 0;
  for (const auto& v : members_w)
    if (backbone_w1.find_vertex(v)) ++kept;
  return static_cast<double>(kept) / static_cast<double>(members_w.size());
}

double persistence(const CoCommentGraph& backbone_w, const CoCommentGraph& backbone_w1) {
  return persistence(backbone_w.vertices, backbone_w1);
}

double membership_nmi(const std::map<std::string, std::uint32_t>& labels_w,
                      const std::map<std::string, std::uint32_t>& labels_w1,
                      const std::vector<std::string>& persisted) {
  if (persisted.empty()) throw UndefinedError("NMI needs at least one persisted vertex");
  std::map<std::uint32_t, double> px, py;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> pxy;
  const double unit = 1.0 / static_cast<double>(persisted.size());
  for (const auto& v : persisted) {
    auto x = labels_w.find(v), y = labels_w1.find(v);
    if (x == labels_w.end() || y == labels_w1.end())
      throw InputError("persisted vertex '" + v + "' is missing from a labeling");
    px[x->second] += unit;
    py[y->second] += unit;
    pxy[{x->second, y->second}] += unit;
  }
  const bool single_x = px.size() == 1, single_y = py.size() == 1;
  if (single_x && single_y) return 1.0;
  if (single_x || single_y) return 0.0;
  auto entropy = [](const std::map<std::uint32_t, double>& p) {
    double h = 0.0;
    for (const auto& [k, v] : p) h -= v * std::log(v);
    return h;
  };
  double mi = 0.0;
  for (const auto& [xy, p] : pxy) mi += p * std::log(p / (px[xy.first] * py[xy.second]));
  const double nmi = mi / std::sqrt(entropy(px) * entropy(py));
  return std::clamp(nmi, 0.0, 1.0);
}

std::vector<std::string> top_k_commenters(const Snapshot& snapshot, const CoCommentGraph& backbone, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("cohort fraction must lie in (0, 1]");
  std::unordered_map<std::string_view, std::size_t> comments;
  for (const auto& r : snapshot.comments) ++comments[r.commenter_id];
  std::vector<std::pair<std::size_t, const std::string*>> members;
  members.reserve(backbone.vertices.size());
  for (const auto& v : backbone.vertices) {
    auto it = comments.find(v);
    members.emplace_back(it == comments.end() ? 0 : it->second, &v);
  }
  std::stable_sort(members.begin(), members.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(members.size()) - 1e-9));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k && i < members.size(); ++i) out.push_back(*members[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CommunityMatch> match_communities(const std::vector<text::TermVector>& docs_w,
                                              const std::vector<text::TermVector>& docs_w1,
                                              const text::TermVector& baseline_w1) {
  std::vector<CommunityMatch> out;
  for (std::uint32_t j = 0; j < docs_w.size(); ++j) {
    CommunityMatch m;
    m.community_w = j;
    m.baseline = text::cosine_similarity(docs_w[j], baseline_w1);
    std::optional<std::uint32_t> best;
    for (std::uint32_t k = 0; k < docs_w1.size(); ++k) {
      const double s = text::cosine_similarity(docs_w[j], docs_w1[k]);
      if (!best || s > m.similarity) {
        best = k;
        m.similarity = s;
      }
    }
    if (best && m.similarity > m.baseline) m.community_w1 = best;
    out.push_back(m);
  }
  return out;
}

std::string_view cohort_name(Cohort cohort) {
  switch (cohort) {
    case Cohort::kAll: return "all";
    case Cohort::kTop1Percent: return "top1pct";
    case Cohort::kTop5Percent: return "top5pct";
  }
  return "all";
}

std::vector<TransitionEntry> temporal_report(const std::vector<WindowArtifacts>& windows) {
  std::vector<TransitionEntry> report;
  for (std::size_t i = 0; i + 1 < windows.size(); ++i) {
    const auto& a = windows[i];
    const auto& b = windows[i + 1];
    if (b.snapshot->window_index != a.snapshot->window_index + 1) continue;
    for (Cohort cohort : {Cohort::kAll, Cohort::kTop1Percent, Cohort::kTop5Percent}) {
      TransitionEntry e;
      e.window_from = a.snapshot->window_index;
      e.window_to = b.snapshot->window_index;
      e.cohort = cohort;
      std::vector<std::string> members;
      switch (cohort) {
        case Cohort::kAll: members = a.backbone->vertices; break;
        case Cohort::kTop1Percent: members = top_k_commenters(*a.snapshot, *a.backbone, 0.01); break;
        case Cohort::kTop5Percent: members = top_k_commenters(*a.snapshot, *a.backbone, 0.05); break;
      }
      e.cohort_size = members.size();
      std::vector<std::string> persisted;
      for (const auto& v : members)
        if (b.backbone->find_vertex(v)) persisted.push_back(v);
      e.persisted = persisted.size();
      if (!members.empty()) e.persistence = static_cast<double>(persisted.size()) / static_cast<double>(members.size());
      if (!persisted.empty() && a.communities && b.communities)
        e.nmi = membership_nmi(a.communities->labels, b.communities->labels, persisted);
      if (cohort == Cohort::kAll) e.matches = match_communities(a.documents, b.documents, b.baseline);
      report.push_back(std::move(e));
    }
  }
  return report;
}

std::string temporal_report_to_json(const std::vector<TransitionEntry>& report) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& e : report) {
    nlohmann::json row;
    row["window_from"] = e.window_from;
    row["window_to"] = e.window_to;
    row["cohort"] = std::string(cohort_name(e.cohort));
    row["cohort_size"] = e.cohort_size;
    row["persisted"] = e.persisted;
    row["persistence"] = e.persistence ? nlohmann::json(*e.persistence) : nlohmann::json(nullptr);
    row["nmi"] = e.nmi ? nlohmann::json(*e.nmi) : nlohmann::json(nullptr);
    row["matches"] = nlohmann::json::array();
    for (const auto& m : e.matches)
      row["matches"].push_back({{"community_from", m.community_w},
                                {"community_to", m.community_w1 ? nlohmann::json(*m.community_w1) : nlohmann::json(nullptr)},
                                {"similarity", m.similarity},
                                {"baseline", m.baseline}});
    j.push_back(std::move(row));
  }
  return j.dump(1) + "\n";
}

}  // namespace cocomment
