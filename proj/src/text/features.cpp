#include "cocomment/text/features.hpp"

#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "cocomment/error.hpp"
#include "cocomment/text/tokenize.hpp"

namespace cocomment::text {

std::array<double, kFeatureCount> FeatureVector::values() const {
  return {avg_comment_length,         frac_with_mention,      avg_hashtags_per_comment, frac_with_uppercase_word,
          avg_comments_per_commenter, avg_emojis_per_comment, frac_replies};
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "avg_comment_length",         "frac_with_mention",      "avg_hashtags_per_comment", "frac_with_uppercase_word",
      "avg_comments_per_commenter", "avg_emojis_per_comment", "frac_replies"};
  return names;
}

FeatureVector feature_vector(const CommunityAssignment& assignment, const Snapshot& snapshot,
                             std::uint32_t community) {
  std::size_t n = 0, length = 0, with_mention = 0, hashtags = 0, with_upper = 0, emojis = 0, replies = 0;
  std::set<std::string> authors;
  for (const auto& r : snapshot.comments) {
    auto it = assignment.labels.find(r.commenter_id);
    if (it == assignment.labels.end() || it->second != community) continue;
    ++n;
    authors.insert(r.commenter_id);
    const auto s = analyze_comment(r.text.value_or(""));
    length += s.length;
    with_mention += s.mentions > 0;
    hashtags += s.hashtags;
    with_upper += s.has_uppercase_word;
    emojis += s.emojis;
    replies += r.is_reply.value_or(false);
  }
  if (n == 0) throw UndefinedError("community " + std::to_string(community) + " has no comments in this window");
  const double dn = static_cast<double>(n);
  FeatureVector f;
  f.avg_comment_length = static_cast<double>(length) / dn;
  f.frac_with_mention = static_cast<double>(with_mention) / dn;
  f.avg_hashtags_per_comment = static_cast<double>(hashtags) / dn;
  f.frac_with_uppercase_word = static_cast<double>(with_upper) / dn;
  f.avg_comments_per_commenter = dn / static_cast<double>(authors.size());
  f.avg_emojis_per_comment = static_cast<double>(emojis) / dn;
  f.frac_replies = static_cast<double>(replies) / dn;
  return f;
}

PcaResult pca_2d(const std::vector<std::vector<double>>& rows, const std::vector<std::string>& column_names) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(column_names.size());
  if (n < 3) throw InputError("PCA needs at least three rows");
  if (m < 2) throw InputError("PCA needs at least two columns");
  Eigen::MatrixXd z(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rows[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(m))
      throw InputError("PCA row " + std::to_string(i) + " has the wrong number of columns");
    for (Eigen::Index j = 0; j < m; ++j) z(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mean = z.col(j).mean();
    z.col(j).array() -= mean;
    const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n));
    if (!(sd > 1e-12 * (1.0 + std::abs(mean))))
      throw UndefinedError("metric '" + column_names[static_cast<std::size_t>(j)] + "' is constant across rows");
    z.col(j) /= sd;
  }
  const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw ResourceError("eigen-decomposition failed");

  PcaResult out;
  const auto& values = solver.eigenvalues();  // ascending
  for (Eigen::Index j = m - 1; j >= 0; --j) out.eigenvalues.push_back(std::max(0.0, values(j)));
  double total = 0.0;
  for (double v : out.eigenvalues) total += v;
  out.coordinates.assign(rows.size(), {0.0, 0.0});
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd v = solver.eigenvectors().col(m - 1 - c);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < m; ++j)
      if (std::abs(v(j)) > std::abs(v(arg)) + 1e-12) arg = j;
    if (v(arg) < 0) v = -v;
    out.loadings[static_cast<std::size_t>(c)].assign(v.data(), v.data() + m);
    const Eigen::VectorXd proj = z * v;
    for (Eigen::Index i = 0; i < n; ++i) out.coordinates[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = proj(i);
    out.explained[static_cast<std::size_t>(c)] = total > 0.0 ? out.eigenvalues[static_cast<std::size_t>(c)] / total : 0.0;
  }
  return out;
}

}  // namespace cocomment::text
