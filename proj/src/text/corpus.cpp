#include "cocomment/text/corpus.hpp"

#include <algorithm>
#include <cmath>

namespace cocomment::text {

namespace {

std::vector<std::pair<std::string, double>> ranked(const TermVector& v) {
  std::vector<std::pair<std::string, double>> items(v.begin(), v.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return items;
}

}  // namespace

Corpus build_corpus(const Snapshot& snapshot, const CommunityAssignment& assignment, const TextConfig& config) {
  Corpus corpus;
  corpus.documents.resize(assignment.community_count);
  for (std::uint32_t c = 0; c < assignment.community_count; ++c) corpus.documents[c].community = c;

  for (const auto& r : snapshot.comments) {
    if (!r.text) continue;
    auto it = assignment.labels.find(r.commenter_id);
    if (it == assignment.labels.end()) continue;
    auto& doc = corpus.documents[it->second];
    for (auto& term : preprocess(*r.text, config)) ++doc.term_counts[term];
  }

  std::map<std::string, std::uint64_t> totals;
  for (const auto& doc : corpus.documents)
    for (const auto& [term, n] : doc.term_counts) totals[term] += n;

  std::vector<std::pair<std::string, std::uint64_t>> by_count(totals.begin(), totals.end());
  std::stable_sort(by_count.begin(), by_count.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  const auto n_popular = static_cast<std::size_t>(std::floor(config.popular_fraction * static_cast<double>(by_count.size())));
  for (std::size_t i = 0; i < n_popular && i < by_count.size(); ++i) corpus.removed_popular.insert(by_count[i].first);
  for (const auto& [term, n] : totals)
    if (n < config.min_occurrences && !corpus.removed_popular.contains(term)) corpus.removed_rare.insert(term);

  for (auto& doc : corpus.documents) {
    std::erase_if(doc.term_counts, [&](const auto& kv) {
      return corpus.removed_popular.contains(kv.first) || corpus.removed_rare.contains(kv.first);
    });
    doc.total_terms = 0;
    for (const auto& [term, n] : doc.term_counts) doc.total_terms += n;
  }
  return corpus;
}

std::map<std::string, double> inverse_document_frequency(const std::vector<CommunityDocument>& documents) {
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents)
    for (const auto& [term, n] : doc.term_counts)
      if (n > 0) ++df[term];
  const auto big_n = static_cast<double>(documents.size());
  std::map<std::string, double> idf;
  for (const auto& [term, n] : df) {
    const double ni = static_cast<double>(n);
    idf[term] = big_n > ni ? std::max(0.0, std::log((big_n - ni) / ni)) : 0.0;
  }
  return idf;
}

TermVector sparsify(const TermVector& vector, std::size_t top) {
  TermVector out;
  for (const auto& [term, w] : ranked(vector)) {
    if (out.size() >= top) break;
    if (w > 0.0) out.emplace(term, w);
  }
  return out;
}

TermVector weight_with_idf(const std::map<std::string, std::uint64_t>& counts,
                           const std::map<std::string, double>& idf, std::size_t top_terms) {
  TermVector full;
  for (const auto& [term, n] : counts) {
    auto it = idf.find(term);
    if (it == idf.end()) continue;
    const double w = static_cast<double>(n) * it->second;
    if (w > 0.0) full.emplace(term, w);
  }
  return sparsify(full, top_terms);
}

void compute_tfidf(std::vector<CommunityDocument>& documents, std::size_t top_terms) {
  const auto idf = inverse_document_frequency(documents);
  for (auto& doc : documents) doc.tfidf = weight_with_idf(doc.term_counts, idf, top_terms);
}

TermVector baseline_document(const Snapshot& snapshot, const std::vector<CommunityDocument>& documents,
                             const TextConfig& config) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& r : snapshot.comments)
    if (r.text)
      for (auto& term : preprocess(*r.text, config)) ++counts[term];
  return weight_with_idf(counts, inverse_document_frequency(documents), config.top_terms);
}

double cosine_similarity(const TermVector& a, const TermVector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [t, w] : a) na += w * w;
  for (const auto& [t, w] : b) nb += w * w;
  if (na == 0.0 || nb == 0.0) return 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<std::pair<std::string, double>> top_words(const CommunityDocument& document, std::size_t k) {
  auto items = ranked(document.tfidf);
  if (items.size() > k) items.resize(k);
  return items;
}

}  // namespace cocomment::text
