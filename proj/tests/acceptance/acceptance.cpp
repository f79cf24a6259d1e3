// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <sys/resource.h>

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cocomment/cli.hpp"
#include "cocomment/community.hpp"
#include "cocomment/digest.hpp"
#include "cocomment/dynamics.hpp"
#include "cocomment/nullmodel.hpp"
#include "cocomment/parallel.hpp"
#include "cocomment/poisson_binomial.hpp"
#include "cocomment/projection.hpp"
#include "cocomment/random.hpp"
#include "cocomment/synth.hpp"
#include "cocomment/text/corpus.hpp"
#include "cocomment/text/lexicon.hpp"
#include "fixtures.hpp"

using namespace cocomment;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double round2(double x) { return std::round(x * 100.0) / 100.0; }
double trunc2(double x) { return std::floor(x * 100.0 + 1e-9) / 100.0; }

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

double peak_rss_mib() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;  // ru_maxrss is in KiB on Linux
}

Snapshot filtered(const std::vector<InteractionRecord>& records) {
  return filter_single_post_commenters(make_snapshot(1, records));
}

SynthSpec calibration_spec(std::uint64_t seed) {
  SynthSpec spec;  // 500 commenters, 20 influencers, 200 posts, Zipf(1) audiences, sizes Zipf(1) up to 50
  spec.seed = seed;
  return spec;
}

// ---------------------------------------------------------------------------

Outcome toy_example() {
  const auto s = make_snapshot(1, fixtures::toy_records());
  const auto e = engagement_table(s);
  const double fc = e.relative_engagement("i", "c"), fd = e.relative_engagement("i", "d"),
               fe = e.relative_engagement("i", "e"), fj = e.relative_engagement("j", "c");
  bool ok = round2(fc) == 0.27 && round2(fd) == 0.18 && round2(fe) == 0.09 && round2(fj) == 0.14 &&
            e.relative_engagement("j", "d") == fj && e.relative_engagement("j", "e") == fj;

  // The worked example chains two-decimal values: r from the displayed f,
  // and r(c,d) from the displayed r, each shown truncated.
  const double r1c = trunc2(post_inclusion_prob(0.27, 3));
  const double r1d = trunc2(post_inclusion_prob(0.18, 3));
  const double r7e = trunc2(post_inclusion_prob(0.14, 3));
  ok = ok && r1c == 0.61 && r1d == 0.44 && r7e == 0.36;
  ok = ok && trunc2(r1c * r1d) == 0.26 && trunc2(r7e * r7e) == 0.12;

  // The production path multiplies the same factors.
  const auto params = edge_null_params(s, e, "c", "d");
  ok = ok && params.size() == 7 &&
       std::abs(params[0] - post_inclusion_prob(fc, 3) * post_inclusion_prob(fd, 3)) < 1e-15 &&
       std::abs(params[6] - std::pow(post_inclusion_prob(fj, 3), 2)) < 1e-15;
  return {ok, fmt("f=(%.4f %.4f %.4f %.4f) r=(%.2f %.2f %.2f) r(c,d)=(%.2f %.2f)", fc, fd, fe, fj, r1c, r1d, r7e,
                  trunc2(r1c * r1d), trunc2(r7e * r7e))};
}

Outcome salient_pair() {
  const auto s = filtered(fixtures::salient_pair_records());
  const auto g = build_graph(s);
  const auto b = extract_backbone(g, s, engagement_table(s));
  const bool ce = b.graph.weight("c", "e").has_value();
  const bool cd = b.graph.weight("c", "d").has_value();
  const bool d = b.graph.find_vertex("d").has_value();
  return {ce && !cd && !d, fmt("e_ce kept=%d e_cd kept=%d d present=%d", ce, cd, d)};
}

Outcome null_calibration() {
  double sum = 0.0;
  std::size_t w1_total = 0, w1_kept = 0, w3_total = 0, w3_kept = 0;
  const int seeds = 20;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto s = filtered(sample_null_trace(calibration_spec(seed)));
    const auto g = build_graph(s);
    BackboneOptions opts;
    opts.threads = default_thread_count();
    const auto b = extract_backbone(g, s, engagement_table(s), opts);
    sum += b.retention.kept_fraction();
    for (const auto& [w, r] : b.retention.per_weight) {
      if (w == 1) {
        w1_total += r.total;
        w1_kept += r.kept;
      } else if (w >= 3) {
        w3_total += r.total;
        w3_kept += r.kept;
      }
    }
  }
  const double mean = sum / seeds;
  const double f1 = w1_total ? double(w1_kept) / double(w1_total) : 0.0;
  const double f3 = w3_total ? double(w3_kept) / double(w3_total) : 0.0;
  return {mean <= 0.05 && f1 < f3,
          fmt("mean retained %.4f over %d seeds; weight-1 retention %.4f < weight>=3 retention %.4f", mean, seeds, f1,
              f3)};
}

Outcome rna_accuracy() {
  Rng rng(2024);
  const int vectors = 1000;
  int within = 0;
  double worst = 0.0;
  const PbPercentile pct(0.95);
  for (int t = 0; t < vectors; ++t) {
    const std::size_t n = 1 + rng.below(300);
    std::vector<double> p(n);
    for (auto& x : p) x = 0.001 + 0.499 * rng.uniform01();
    const auto m = pb_moments(p);
    const auto pmf = pb_pmf_exact(p);
    std::uint32_t exact = 0;
    double cdf = 0.0;
    bool found = false;
    for (std::size_t k = 0; k <= n; ++k) {
      cdf += pmf[k];
      if (!found && cdf >= 0.95) {
        exact = static_cast<std::uint32_t>(k);
        found = true;
      }
      if (m.mu >= 1.0) worst = std::max(worst, std::abs(pb_cdf_rna(m, static_cast<double>(k)) - std::min(cdf, 1.0)));
    }
    if (!found) exact = static_cast<std::uint32_t>(n);
    const auto approx = pct.rna(m);
    within += std::abs(static_cast<long>(approx) - static_cast<long>(exact)) <= 1;
  }
  const double share = double(within) / vectors;
  return {share >= 0.99 && worst <= 1e-2,
          fmt("percentile within +-1 in %.1f%% of vectors; max |CDF error| with mu>=1 = %.2e", 100 * share, worst)};
}

Outcome exact_oracle() {
  Rng rng(77);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> p(n);
    for (auto& x : p) x = rng.uniform01();
    std::vector<double> brute(n + 1, 0.0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      double pr = 1.0;
      int ones = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const bool on = (mask >> i) & 1u;
        pr *= on ? p[i] : 1.0 - p[i];
        ones += on;
      }
      brute[ones] += pr;
    }
    double cdf = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      cdf += brute[k];
      worst = std::max(worst, std::abs(pb_cdf_exact(p, static_cast<std::int64_t>(k)) - cdf));
    }
  }
  return {worst <= 1e-10, fmt("max deviation from 2^n enumeration %.2e", worst)};
}

Outcome modularity_oracle() {
  const auto g = fixtures::two_triangles();
  const double split = modularity(g, std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});
  const double one = modularity(g, std::vector<std::uint32_t>(6, 0));
  return {std::abs(split - 0.5) <= 1e-12 && std::abs(one) <= 1e-12, fmt("Q(split)=%.15f Q(one)=%.15f", split, one)};
}

Outcome planted_recovery() {
  const int seeds = 5;
  bool ok = true;
  double worst_intra = 1.0, worst_background = 0.0, worst_nmi = 1.0, min_gap = 1e9;
  for (int seed = 1; seed <= seeds; ++seed) {
    auto spec = calibration_spec(seed);
    spec.planted_groups.assign(5, PlantedGroup{20, 15});
    const auto planted = plant_groups(sample_null_trace(spec), spec);
    const auto s = filtered(planted.records);
    const auto g = build_graph(s);
    BackboneOptions opts;
    opts.threads = default_thread_count();
    const auto b = extract_backbone(g, s, engagement_table(s), opts);

    const auto& truth = planted.ground_truth;
    std::size_t intra = 0, intra_kept = 0, bg = 0, bg_kept = 0;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      const auto& x = truth.at(g.vertices[g.edges[k].source]);
      const auto& y = truth.at(g.vertices[g.edges[k].target]);
      if (x != "background" && x == y) {
        ++intra;
        intra_kept += b.kept[k];
      } else if (x == "background" && y == "background") {
        ++bg;
        bg_kept += b.kept[k];
      }
    }
    const double fi = double(intra_kept) / double(intra);
    const double fb = double(bg_kept) / double(bg);

    const auto found = louvain(b.graph, static_cast<std::uint64_t>(seed));
    std::map<std::string, std::uint32_t> classes;
    std::vector<std::string> members;
    for (const auto& v : b.graph.vertices) {
      const auto& t = truth.at(v);
      if (t == "background") continue;
      classes[v] = static_cast<std::uint32_t>(std::stoul(t.substr(5)));
      members.push_back(v);
    }
    const double nmi = members.empty() ? 0.0 : membership_nmi(found.labels, classes, members);
    const double q_original = louvain(g, static_cast<std::uint64_t>(seed)).modularity;

    worst_intra = std::min(worst_intra, fi);
    worst_background = std::max(worst_background, fb);
    worst_nmi = std::min(worst_nmi, nmi);
    min_gap = std::min(min_gap, found.modularity - q_original);
    ok = ok && fi >= 0.9 && fb <= 0.1 && nmi >= 0.9 && found.modularity > q_original;
  }
  return {ok, fmt("worst over %d seeds: intra-group kept %.3f, background kept %.4f, NMI %.3f, Q(backbone)-Q(graph) "
                  "%.3f",
                  seeds, worst_intra, worst_background, worst_nmi, min_gap)};
}

Outcome nmi_identities() {
  using Labels = std::map<std::string, std::uint32_t>;
  const std::vector<std::string> v{"a", "b", "c", "d"};
  const Labels x{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 1}};
  const Labels independent{{"a", 0}, {"b", 1}, {"c", 0}, {"d", 1}};
  const Labels refined{{"a", 0}, {"b", 0}, {"c", 1}, {"d", 2}};
  const double same = membership_nmi(x, x, v);
  const double zero = membership_nmi(x, independent, v);
  const double hand = membership_nmi(x, refined, v);
  std::vector<std::tuple<std::string, std::string, std::uint32_t>> e{{"a", "b", 1}, {"c", "d", 2}};
  const auto g = graph_from_edges(1, e);
  const double pers = persistence(g, g);
  return {std::abs(same - 1.0) < 1e-12 && std::abs(zero) < 1e-12 && std::abs(hand - 0.8165) <= 1e-4 && pers == 1.0,
          fmt("identical %.6f, independent %.6f, refined %.6f, persistence %.3f", same, zero, hand, pers)};
}

Outcome tfidf_checks() {
  using text::CommunityDocument;
  std::vector<CommunityDocument> docs(3);
  docs[0].term_counts = {{"samba", 5}, {"voto", 2}, {"praia", 1}};
  docs[1].term_counts = {{"voto", 3}, {"gol", 4}, {"praia", 2}};
  docs[2].term_counts = {{"voto", 1}, {"gol", 1}};
  for (std::uint32_t i = 0; i < 3; ++i) docs[i].community = i;
  const auto idf = text::inverse_document_frequency(docs);
  const bool idf_ok = idf.at("samba") == std::log(2.0) && idf.at("voto") == 0.0 && idf.at("gol") == 0.0;

  // Hand ranking for one document: counts 6, 4, 4, 1 of terms seen nowhere
  // else -> weights 6 ln2 > 4 ln2 (tie by term: "bar" < "foo") > 1 ln2.
  std::vector<CommunityDocument> ranked(3);
  ranked[0].term_counts = {{"foo", 4}, {"zed", 6}, {"bar", 4}, {"qux", 1}};
  ranked[1].term_counts = {{"other", 1}};
  ranked[2].term_counts = {{"more", 1}};
  text::compute_tfidf(ranked);
  std::vector<std::string> order;
  for (const auto& [t, w] : text::top_words(ranked[0])) order.push_back(t);
  const bool order_ok = order == std::vector<std::string>{"zed", "bar", "foo", "qux"};

  const text::TermVector a{{"x", 1.0}, {"y", 1.0}};
  const double c1 = text::cosine_similarity(a, a), c0 = text::cosine_similarity(a, {{"z", 1.0}}),
               ch = text::cosine_similarity(a, {{"x", 1.0}});
  const bool cos_ok = std::abs(c1 - 1.0) <= 1e-4 && std::abs(c0) <= 1e-4 && std::abs(ch - 0.7071) <= 1e-4;
  return {idf_ok && order_ok && cos_ok,
          fmt("IDF(samba)=%.6f IDF(voto)=%.1f; top words ok=%d; cosine %.4f/%.4f/%.4f", idf.at("samba"),
              idf.at("voto"), order_ok, c1, c0, ch)};
}

Outcome statistics_checks() {
  const auto k = text::kruskal_wallis({{1, 2, 3}, {10, 11, 12}});
  const double g = text::gini({1, 0, 0, 0});
  text::LabeledMatrix m;
  m.row_labels = {"0", "1", "2", "3", "4"};
  m.column_labels = {"a", "b", "c"};
  m.values = {{0, 1, 0.3}, {2, 4, 0.1}, {1, 9, 0.7}, {5, 2, 0.2}, {3, 3, 0.9}};
  const auto z = text::zscore_matrix(m);
  double worst = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0, var = 0.0;
    for (const auto& r : z.values) mean += r[c] / 5;
    for (const auto& r : z.values) var += (r[c] - mean) * (r[c] - mean) / 5;
    worst = std::max({worst, std::abs(mean), std::abs(std::sqrt(var) - 1.0)});
  }
  const bool ok = k && std::abs(k->h - 3.857) <= 1e-3 && std::abs(g - 0.75) <= 1e-9 && worst <= 1e-9;
  return {ok, fmt("H=%.4f Gini=%.12f z-score max deviation %.1e", k ? k->h : -1.0, g, worst)};
}

// Null trace sized to project onto ~10^4 commenters and ~5x10^6 edges.
Outcome performance() {
  SynthSpec spec;
  spec.n_commenters = 10000;
  spec.n_influencers = 40;
  spec.n_posts = 1600;
  spec.engagement_skew = 0.3;
  spec.post_sizes.kind = PostSizeDistribution::Kind::kConstant;
  spec.post_sizes.constant = 120;
  spec.seed = 11;
  const auto s = filtered(sample_null_trace(spec));
  BuildOptions build;
  build.threads = default_thread_count();
  const auto g = build_graph(s, build);
  const auto start = std::chrono::steady_clock::now();
  BackboneOptions opts;
  opts.threads = default_thread_count();
  const auto b = extract_backbone(g, s, engagement_table(s), opts);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double rss = peak_rss_mib();
  const bool size_ok = g.vertices.size() >= 10000 * 0.95 && g.edges.size() >= 5'000'000;
  return {size_ok && secs < 60.0 && rss < 4096.0,
          fmt("%zu vertices, %zu edges, kept %zu; extraction %.1f s on %u threads; peak RSS %.0f MiB",
              g.vertices.size(), g.edges.size(), b.graph.edges.size(), secs, default_thread_count(), rss)};
}

std::map<std::string, std::string> digests(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) out[entry.path().filename().string()] = sha256_file(entry.path());
  return out;
}

Outcome determinism() {
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* name : {"cocomment_accept_a", "cocomment_accept_b"}) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    std::ostringstream out, err;
    const std::vector<std::string> common{"--dir", dir.string(), "--seed", "5", "--planted", "20x15,20x15,20x15"};
    auto args = common;
    args.insert(args.begin(), "synth");
    if (cli::run(args, out, err) != 0) return {false, "synth failed: " + err.str()};
    args = common;
    args.insert(args.begin(), "pipeline");
    args.insert(args.end(), {"--input", (dir / "trace.jsonl").string(), "--min-occurrences", "1"});
    if (cli::run(args, out, err) != 0) return {false, "pipeline failed: " + err.str()};
    runs.push_back(digests(dir));
    fs::remove_all(dir);
  }
  return {runs[0] == runs[1] && runs[0].size() > 10, fmt("%zu artifacts, digests identical=%d", runs[0].size(),
                                                         runs[0] == runs[1])};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"toy example engagement and inclusion probabilities", toy_example},
      {"salient-pair backbone keeps e_ce, drops e_cd and d", salient_pair},
      {"null calibration retains at most alpha", null_calibration},
      {"RNA percentile and CDF accuracy", rna_accuracy},
      {"exact Poisson-Binomial CDF equals enumeration", exact_oracle},
      {"modularity of two triangles", modularity_oracle},
      {"planted-group recovery", planted_recovery},
      {"NMI and persistence identities", nmi_identities},
      {"TF-IDF, top words and cosine", tfidf_checks},
      {"Kruskal-Wallis, Gini and z-scores", statistics_checks},
      {"backbone extraction performance", performance},
      {"pipeline determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("[%s] criterion %zu: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
