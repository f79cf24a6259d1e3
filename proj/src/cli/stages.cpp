#include <algorithm>
#include <cstdio>
#include <regex>

#include <json.hpp>

#include "cocomment/cli.hpp"
#include "cocomment/community.hpp"
#include "cocomment/digest.hpp"
#include "cocomment/dynamics.hpp"
#include "cocomment/error.hpp"
#include "cocomment/io.hpp"
#include "cocomment/nullmodel.hpp"
#include "cocomment/projection.hpp"
#include "cocomment/text/activity.hpp"
#include "cocomment/text/corpus.hpp"
#include "cocomment/text/features.hpp"
#include "cocomment/text/lexicon.hpp"

namespace cocomment::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kManifestVersion = 1;

std::string window_file(const std::string& prefix, int window, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_w%03d.", window);
  return prefix + buf + ext;
}

// Records what a stage read and wrote, for its manifest.
class Stage {
 public:
  Stage(std::string name, const PipelineConfig& config, OutputSet& outputs)
      : name_(std::move(name)), config_(config), outputs_(outputs) {}

  const PipelineConfig& config() const { return config_; }
  fs::path path(const std::string& file) const { return config_.dir / file; }

  std::string read(const std::string& file) {
    const auto p = path(file);
    std::string text = read_file(p);
    inputs_.push_back({{"path", file}, {"sha256", sha256_hex(text)}});
    return text;
  }

  void read_external(const fs::path& p) { inputs_.push_back({{"path", p.filename().string()}, {"sha256", sha256_file(p)}}); }

  void write(const std::string& file, std::string_view content) {
    outputs_.write(path(file), content);
    outputs_list_.push_back({{"path", file}, {"sha256", sha256_hex(content)}});
  }

  void finish() {
    json m;
    m["stage"] = name_;
    m["manifest_version"] = kManifestVersion;
    json params = json::object();
    for (const auto& [k, v] : config_.settings)
      if (affects_output(k)) params[k] = v;
    m["parameters"] = params;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_list_;
    outputs_.write(path("manifest_" + name_ + ".json"), m.dump(1) + "\n");
  }

 private:
  std::string name_;
  const PipelineConfig& config_;
  OutputSet& outputs_;
  json inputs_ = json::array();
  json outputs_list_ = json::array();
};

// Window indices with a snapshot file in the working directory.
std::vector<int> snapshot_windows(const fs::path& dir) {
  static const std::regex pattern(R"(snapshot_w(\d+)\.json)");
  std::vector<int> out;
  if (!fs::is_directory(dir)) throw InputError("working directory " + dir.string() + " does not exist");
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) out.push_back(std::stoi(m[1].str()));
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw InputError("no snapshot_w*.json files in " + dir.string() + "; run the ingest stage first");
  return out;
}

Snapshot load_snapshot(Stage& st, int w) { return snapshot_from_json(st.read(window_file("snapshot", w, "json"))); }

CoCommentGraph load_edge_list(Stage& st, const std::string& prefix, int w) {
  auto file = read_edge_list(st.read(window_file(prefix, w, "tsv")));
  const auto fields = header_fields(file.header);
  if (!fields.contains("window") || fields.at("window") != std::to_string(w))
    throw InputError(window_file(prefix, w, "tsv") + ": header does not name window " + std::to_string(w));
  file.graph.window_index = w;
  return std::move(file.graph);
}

CommunityAssignment load_communities(Stage& st, int w) {
  return assignment_from_json(st.read(window_file("communities", w, "json")));
}

void ingest(Stage& st) {
  const auto& c = st.config();
  if (c.input.empty()) throw ConfigError("ingest needs an input trace (--input)");
  if (!fs::exists(c.input)) throw InputError("input trace " + c.input.string() + " does not exist");
  st.read_external(c.input);
  const auto parsed = parse_records_file(c.input, c.format, c.strict_parse);
  if (parsed.records.empty()) throw InputError("input trace " + c.input.string() + " holds no valid records");

  // Stale snapshots would be picked up by later stages.
  for (const auto& entry : fs::directory_iterator(c.dir)) {
    static const std::regex pattern(R"(snapshot_w\d+\.json)");
    if (std::regex_match(entry.path().filename().string(), pattern)) fs::remove(entry.path());
  }

  json report;
  report["records"] = parsed.records.size();
  report["malformed_count"] = parsed.malformed_count;
  report["malformed"] = json::array();
  for (const auto& m : parsed.malformed) report["malformed"].push_back({{"line", m.line}, {"reason", m.reason}});
  report["windows"] = json::array();
  for (const auto& raw : window_partition(parsed.records, c.window)) {
    const auto filtered = filter_single_post_commenters(raw);
    report["windows"].push_back({{"window", raw.window_index},
                                 {"posts", raw.posts.size()},
                                 {"commenters", raw.commenters().size()},
                                 {"comments", raw.comments.size()},
                                 {"filtered_posts", filtered.posts.size()},
                                 {"filtered_commenters", filtered.commenters().size()},
                                 {"filtered_comments", filtered.comments.size()}});
    st.write(window_file("snapshot", raw.window_index, "json"), snapshot_to_json(filtered));
  }
  st.write("ingest_report.json", report.dump(1) + "\n");
}

void graph(Stage& st) {
  const auto& c = st.config();
  BuildOptions opts;
  opts.clique_cap = c.clique_cap;
  opts.max_pair_incidences = c.max_pair_incidences;
  opts.threads = c.threads;
  for (int w : snapshot_windows(c.dir)) {
    const auto g = build_graph(load_snapshot(st, w), opts);
    st.write(window_file("graph", w, "tsv"), write_edge_list(g, graph_header(w)));
    st.write(window_file("graph_stats", w, "json"), graph_stats_to_json(graph_stats(g)));
  }
}

void backbone(Stage& st) {
  const auto& c = st.config();
  BackboneOptions opts;
  opts.alpha = c.alpha;
  opts.strict = c.strict;
  opts.exact_max_posts = c.exact_max_posts;
  opts.threads = c.threads;
  for (int w : snapshot_windows(c.dir)) {
    const auto snapshot = load_snapshot(st, w);
    const auto g = load_edge_list(st, "graph", w);
    const auto b = extract_backbone(g, snapshot, engagement_table(snapshot), opts);
    st.write(window_file("backbone", w, "tsv"), write_edge_list(b.graph, backbone_header(w, c.alpha, c.strict)));
    st.write(window_file("retention", w, "json"), retention_to_json(b.retention, c.alpha, c.strict));
  }
}

void communities(Stage& st) {
  const auto& c = st.config();
  for (int w : snapshot_windows(c.dir)) {
    const auto b = load_edge_list(st, "backbone", w);
    CommunityAssignment a;
    if (b.edges.empty()) {
      a.window_index = w;
      a.seed = c.seed;
    } else {
      a = louvain(b, c.seed);
    }
    st.write(window_file("communities", w, "json"), assignment_to_json(a));
  }
}

std::vector<text::CommunityDocument> documents_for(const Snapshot& s, const CommunityAssignment& a,
                                                   const text::TextConfig& cfg) {
  auto corpus = text::build_corpus(s, a, cfg);
  text::compute_tfidf(corpus.documents, cfg.top_terms);
  return std::move(corpus.documents);
}

void dynamics(Stage& st) {
  const auto& c = st.config();
  const auto windows = snapshot_windows(c.dir);
  std::vector<Snapshot> snapshots;
  std::vector<CoCommentGraph> backbones;
  std::vector<CommunityAssignment> assignments;
  for (int w : windows) {
    snapshots.push_back(load_snapshot(st, w));
    backbones.push_back(load_edge_list(st, "backbone", w));
    assignments.push_back(load_communities(st, w));
  }
  std::vector<WindowArtifacts> artifacts(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) {
    auto& a = artifacts[i];
    a.snapshot = &snapshots[i];
    a.backbone = &backbones[i];
    a.communities = &assignments[i];
    const auto docs = documents_for(snapshots[i], assignments[i], c.text);
    for (const auto& d : docs) a.documents.push_back(d.tfidf);
    a.baseline = text::baseline_document(snapshots[i], docs, c.text);
  }
  st.write("dynamics.json", temporal_report_to_json(temporal_report(artifacts)));
}

json matrix_json(const text::LabeledMatrix& m) { return json::parse(text::matrix_to_json(m)); }

template <typename Fn>
json guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const UndefinedError& e) {
    return json{{"undefined", e.what()}};
  } catch (const InputError& e) {
    return json{{"undefined", e.what()}};
  }
}

json text_report(const PipelineConfig& c, const Snapshot& s, const CommunityAssignment& a,
                 const std::optional<text::Lexicon>& lexicon) {
  json j;
  j["window"] = s.window_index;
  const auto docs = documents_for(s, a, c.text);
  j["communities"] = json::array();
  std::vector<std::vector<double>> feature_rows;
  std::vector<std::string> feature_labels;
  for (const auto& d : docs) {
    json row{{"id", d.community}, {"total_terms", d.total_terms}};
    row["top_words"] = json::array();
    for (const auto& [term, weight] : text::top_words(d, 10)) row["top_words"].push_back({term, weight});
    try {
      const auto f = text::feature_vector(a, s, d.community);
      json fj;
      const auto values = f.values();
      for (std::size_t k = 0; k < text::kFeatureCount; ++k) fj[text::feature_names()[k]] = values[k];
      row["features"] = fj;
      feature_rows.emplace_back(values.begin(), values.end());
      feature_labels.push_back(std::to_string(d.community));
    } catch (const UndefinedError&) {
      row["features"] = nullptr;
    }
    j["communities"].push_back(std::move(row));
  }

  const auto interest = text::interest_index(a, s);
  j["interest"] = matrix_json(interest.matrix);
  j["interest_top"] = json::array();
  for (const auto& p : interest.posts)
    j["interest_top"].push_back({{"post", p.post_id},
                                 {"community", p.top_community},
                                 {"top1", p.top1},
                                 {"top2", p.top2},
                                 {"ratio", p.ratio ? json(*p.ratio) : json(nullptr)}});

  const auto by_influencer = text::community_influencer_matrix(a, s);
  j["influencer_matrix"] = matrix_json(by_influencer);
  j["dendrogram"] = guarded([&] { return json::parse(text::dendrogram_to_json(text::influencer_dendrogram(by_influencer))); });

  json contrast;
  contrast["rows"] = by_influencer.row_labels;
  contrast["columns"] = by_influencer.column_labels;
  contrast["min_comments"] = c.min_comments;
  contrast["values"] = json::array();
  for (const auto& r : by_influencer.row_labels) {
    json row = json::array();
    for (const auto& inf : by_influencer.column_labels) {
      const auto v = text::contrastive_score(a, s, static_cast<std::uint32_t>(std::stoul(r)), inf, c.min_comments);
      row.push_back(v ? json(*v) : json("insufficient"));
    }
    contrast["values"].push_back(std::move(row));
  }
  j["contrastive"] = contrast;

  j["pca"] = guarded([&] {
    const std::vector<std::string> names(text::feature_names().begin(), text::feature_names().end());
    const auto p = text::pca_2d(feature_rows, names);
    json pj;
    pj["rows"] = feature_labels;
    pj["metrics"] = names;
    pj["eigenvalues"] = p.eigenvalues;
    pj["loadings"] = {p.loadings[0], p.loadings[1]};
    pj["explained"] = {p.explained[0], p.explained[1]};
    pj["coordinates"] = json::array();
    for (const auto& xy : p.coordinates) pj["coordinates"].push_back({xy[0], xy[1]});
    return pj;
  });

  if (lexicon) {
    j["lexicon"] = guarded([&] {
      json lj;
      const auto texts = text::community_comments(a, s);
      text::LabeledMatrix means;
      std::map<std::string, std::vector<std::vector<double>>> samples;
      std::map<std::string, std::vector<double>> per_attribute;
      for (const auto& [attr, _] : lexicon->attributes) means.column_labels.push_back(attr);
      for (const auto& [community, comments] : texts) {
        const auto per_comment = text::attribute_samples(comments, *lexicon);
        std::vector<double> row;
        for (const auto& attr : means.column_labels) {
          const auto& v = per_comment.at(attr);
          double mean = 0.0;
          for (double x : v) mean += x;
          mean = v.empty() ? 0.0 : mean / static_cast<double>(v.size());
          row.push_back(mean);
          per_attribute[attr].push_back(mean);
          if (v.size() >= 2) samples[attr].push_back(v);
        }
        means.row_labels.push_back(std::to_string(community));
        means.values.push_back(std::move(row));
      }
      lj["frequencies"] = matrix_json(means);
      json selected = json::array();
      std::map<std::string, std::vector<std::vector<double>>> testable;
      for (auto& [attr, groups] : samples)
        if (groups.size() >= 2) testable[attr] = groups;
      std::set<std::string> kept = text::kruskal_filter(testable, c.kruskal_p);
      lj["kruskal_selected"] = kept;
      std::map<std::string, std::vector<double>> kept_means;
      for (const auto& attr : kept) kept_means[attr] = per_attribute[attr];
      json ranked = json::array();
      for (const auto& [attr, g] : text::gini_rank(kept_means, c.gini_top)) ranked.push_back({attr, g});
      lj["gini_top"] = ranked;
      lj["zscores"] = guarded([&] {
        text::LabeledMatrix top;
        top.row_labels = means.row_labels;
        for (const auto& item : ranked) top.column_labels.push_back(item[0].get<std::string>());
        for (std::size_t r = 0; r < means.rows(); ++r) {
          std::vector<double> row;
          for (const auto& attr : top.column_labels) row.push_back(kept_means[attr][r]);
          top.values.push_back(std::move(row));
        }
        return matrix_json(text::zscore_matrix(top));
      });
      return lj;
    });
  }
  return j;
}

void text_stage(Stage& st) {
  const auto& c = st.config();
  if (!c.stopwords_path.empty()) st.read_external(c.stopwords_path);
  std::optional<text::Lexicon> lexicon;
  if (!c.lexicon_path.empty()) {
    lexicon = text::read_lexicon(c.lexicon_path);
    st.read_external(c.lexicon_path);
  }
  for (int w : snapshot_windows(c.dir)) {
    const auto s = load_snapshot(st, w);
    const auto a = load_communities(st, w);
    st.write(window_file("text", w, "json"), text_report(c, s, a, lexicon).dump(1) + "\n");
  }
}

void synth(Stage& st) {
  const auto& c = st.config();
  auto records = sample_null_trace(c.synth);
  std::map<std::string, std::string> truth;
  if (c.synth.planted_groups.empty()) {
    for (const auto& r : records) truth.emplace(r.commenter_id, "background");
  } else {
    auto planted = plant_groups(std::move(records), c.synth);
    records = std::move(planted.records);
    truth = std::move(planted.ground_truth);
  }
  std::string trace;
  for (const auto& r : records) trace += record_to_jsonl(r) + "\n";
  st.write("trace.jsonl", trace);
  st.write("ground_truth.json", ground_truth_to_json(truth));
}

using StageFn = void (*)(Stage&);

StageFn stage_function(const std::string& name) {
  if (name == "ingest") return ingest;
  if (name == "graph") return graph;
  if (name == "backbone") return backbone;
  if (name == "communities") return communities;
  if (name == "dynamics") return dynamics;
  if (name == "text") return text_stage;
  if (name == "synth") return synth;
  throw ConfigError("unknown stage '" + name + "'");
}

}  // namespace

void run_stage(const std::string& name, const PipelineConfig& config) {
  std::error_code ec;
  fs::create_directories(config.dir, ec);
  if (ec || !fs::is_directory(config.dir))
    throw ConfigError("output directory " + config.dir.string() + " cannot be created");

  OutputSet outputs;  // removed on failure
  const std::vector<std::string> order =
      name == "pipeline" ? std::vector<std::string>{"ingest", "graph", "backbone", "communities", "dynamics", "text"}
                         : std::vector<std::string>{name};
  for (const auto& s : order) {
    Stage stage(s, config, outputs);
    stage_function(s)(stage);
    stage.finish();
  }
  outputs.commit();
}

}  // namespace cocomment::cli
