#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cocomment/community.hpp"
#include "cocomment/ingest.hpp"
#include "cocomment/text/tokenize.hpp"

namespace cocomment::text {

using TermVector = std::map<std::string, double>;

// All comments of one community's members, as one document.
struct CommunityDocument {
  std::uint32_t community = 0;
  std::map<std::string, std::uint64_t> term_counts;
  TermVector tfidf;  // at most TextConfig::top_terms non-zero entries
  std::uint64_t total_terms = 0;
};

struct Corpus {
  std::vector<CommunityDocument> documents;  // index == community id
  std::set<std::string> removed_popular;
  std::set<std::string> removed_rare;
};

// Groups the comments of each community and applies the corpus-level
// filters: the top `popular_fraction` of the vocabulary by total count
// (floor, ties by term) and every term with fewer than `min_occurrences`
// occurrences are removed from all documents. tfidf is left empty.
Corpus build_corpus(const Snapshot& snapshot, const CommunityAssignment& assignment, const TextConfig& config);

// Probabilistic IDF, max(0, ln((N - n_i) / n_i)), over terms with a
// non-zero count in at least one document.
std::map<std::string, double> inverse_document_frequency(const std::vector<CommunityDocument>& documents);

// Keeps the `top` largest entries (ties by term) and drops zeros.
TermVector sparsify(const TermVector& vector, std::size_t top);

// Fills each document's tfidf with TF * IDF (TF = raw count), sparsified.
void compute_tfidf(std::vector<CommunityDocument>& documents, std::size_t top_terms = 100);

// Weights a whole-window term count with the per-community IDF values;
// terms outside the IDF vocabulary are ignored.
TermVector weight_with_idf(const std::map<std::string, std::uint64_t>& counts,
                           const std::map<std::string, double>& idf, std::size_t top_terms);

// TF-IDF vector of every comment of the window, using the IDF of the
// community documents: the "average community" of the window.
TermVector baseline_document(const Snapshot& snapshot, const std::vector<CommunityDocument>& documents,
                             const TextConfig& config);

double cosine_similarity(const TermVector& a, const TermVector& b);

std::vector<std::pair<std::string, double>> top_words(const CommunityDocument& document, std::size_t k = 10);

}  // namespace cocomment::text
