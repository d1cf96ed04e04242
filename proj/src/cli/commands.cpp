#include "commands.hpp"

#include <unistd.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "goat/checkpoint.hpp"
#include "goat/digest.hpp"
#include "goat/error.hpp"
#include "goat/generators.hpp"
#include "goat/io.hpp"
#include "goat/metrics.hpp"
#include "goat/split.hpp"

namespace goat::cli {

Console::Console(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {
  color_ = &err == &std::cerr && std::getenv("NO_COLOR") == nullptr && ::isatty(STDERR_FILENO);
}

void Console::warn(const std::string& msg) {
  ++warnings_;
  if (color_)
    err_ << "\033[33mwarning:\033[0m " << msg << '\n';
  else
    err_ << "warning: " << msg << '\n';
}

void Console::info(const std::string& msg) {
  if (!quiet_) err_ << msg << '\n';
}

namespace {

namespace fs = std::filesystem;

std::string fmt_fraction(double f) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), f);
  return std::string(buf.data(), end);
}

std::string fmt_metric(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_metric(std::optional<double> v) { return v ? fmt_metric(*v) : "NA"; }

// Stream sub-key for a fraction, independent of its position in the grid.
std::uint64_t fraction_key(double f) { return std::bit_cast<std::uint64_t>(f); }

std::string dataset_name(const ExperimentConfig& cfg) {
  if (!cfg.preset.empty()) return cfg.preset;
  std::string stem = cfg.data.filename().string();
  return stem.substr(0, stem.find('.'));
}

struct LoadedGraph {
  Graph graph;
  std::uint64_t digest = 0;
};

LoadedGraph load_dataset(const ExperimentConfig& cfg, Console& console) {
  if (cfg.data.empty()) throw ValidationError("no dataset given (--data)");
  if (!fs::exists(cfg.data)) throw IoError("dataset not found: " + cfg.data.string());
  try {
    ParsedGraph parsed = read_edge_list(cfg.data, cfg.directed);
    if (parsed.stats.self_loops_skipped)
      console.warn(std::to_string(parsed.stats.self_loops_skipped) + " self-loops skipped in " +
                   cfg.data.string());
    return {std::move(parsed.graph), file_digest(cfg.data)};
  } catch (const ParseError& e) {
    throw IoError(cfg.data.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw IoError(cfg.data.string() + ": " + e.what());
  }
}

std::vector<double> unique_fractions(const std::vector<double>& fractions, Console& console) {
  std::vector<double> out;
  for (double f : fractions) {
    if (std::find(out.begin(), out.end(), f) != out.end()) {
      console.warn("duplicate fraction " + fmt_fraction(f) + " ignored");
      continue;
    }
    out.push_back(f);
  }
  return out;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string());
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  if (!out.flush()) throw IoError("cannot write " + path.string());
}

EvalSplit make_split(const Graph& g, const ExperimentConfig& cfg, double fraction) {
  Rng rng = make_rng(cfg.train.seed, Stream::split, fraction_key(fraction));
  return split_edges(g, fraction, rng);
}

TrainResult train_with_progress(const Graph& train_graph, const TrainConfig& tc,
                                const std::string& tag, Console& console) {
  const NegativeSampler sampler(train_graph);
  TrainHooks hooks;
  hooks.on_epoch = [&](std::size_t epoch, double loss) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s epoch %zu/%zu loss %.6f", tag.c_str(), epoch + 1,
                  tc.epochs, loss);
    console.info(buf);
  };
  return train(train_graph, tc, sampler, hooks);
}

struct FractionArtifacts {
  LoadedSplit split;
  Checkpoint checkpoint;
};

// Loads the split and checkpoint of one fraction and checks they were
// produced from this dataset and configuration.
FractionArtifacts load_artifacts(const fs::path& dir, const LoadedGraph& data,
                                 const ExperimentConfig& cfg, double fraction) {
  if (!fs::is_directory(dir))
    throw IoError("missing training artifacts: " + dir.string() + " (run `goat train` first)");
  FractionArtifacts a{read_split(dir, data.graph.num_nodes()),
                      read_checkpoint(dir / "checkpoint.bin")};
  const std::uint64_t expected = run_digest(data.digest, cfg, fraction);
  if (a.split.digest != expected)
    throw ConsistencyError("split in " + dir.string() + " has digest " +
                           format_digest(a.split.digest) + ", expected " +
                           format_digest(expected) + " for this dataset and configuration");
  if (a.checkpoint.header.config_digest != expected)
    throw ConsistencyError("checkpoint in " + dir.string() + " has digest " +
                           format_digest(a.checkpoint.header.config_digest) + ", expected " +
                           format_digest(expected));
  if (a.checkpoint.embedding.num_nodes() != data.graph.num_nodes())
    throw ConsistencyError("checkpoint node count does not match the dataset");
  return a;
}

struct LinkScores {
  std::optional<double> auc;
  std::optional<double> ap;
};

LinkScores evaluate_link_prediction(const Embedding& e, const Graph& train_graph,
                                    const EvalSplit& split, const ExperimentConfig& cfg,
                                    std::size_t neighborhood, double fraction) {
  if (split.test_pos.empty()) return {};
  Rng rng = make_rng(cfg.train.seed, Stream::eval, fraction_key(fraction));
  const RankedScores scores =
      score_split(e, train_graph, split, neighborhood, cfg.trials, cfg.train.variant, rng);
  return {auc(scores), average_precision(scores)};
}

constexpr const char* kMetricsHeader = "dataset\tfraction\tvariant\tauc\tap\tnmi\tami\tseed\n";

}  // namespace

void cmd_train(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  const LoadedGraph data = load_dataset(cfg, ctx.console);
  ensure_dir(ctx.out);
  write_text(ctx.out / "config.txt", cfg.to_text());
  {
    auto nodes = open_output(ctx.out / "nodes.tsv");
    write_node_map(nodes, data.graph);
  }
  ctx.console.info("loaded " + cfg.data.string() + ": " +
                   std::to_string(data.graph.num_nodes()) + " nodes, " +
                   std::to_string(data.graph.num_edges()) + " edges");

  for (double fraction : unique_fractions(cfg.fractions, ctx.console)) {
    const fs::path dir = ctx.out / fraction_dir(fraction);
    ensure_dir(dir);
    const EvalSplit split = make_split(data.graph, cfg, fraction);
    const std::uint64_t digest = run_digest(data.digest, cfg, fraction);
    write_split(dir, split, digest);

    const Graph train_graph = split.train_graph(data.graph);
    const TrainResult result =
        train_with_progress(train_graph, cfg.train, "fraction " + fmt_fraction(fraction),
                            ctx.console);

    write_checkpoint(dir / "checkpoint.bin", result.embedding, cfg.train.seed, digest);
    CheckpointMeta meta;
    meta.config = cfg.train;
    meta.dataset = cfg.data.string();
    meta.fraction = fraction;
    meta.config_digest = digest;
    meta.best_epoch = result.best_epoch;
    write_checkpoint_meta(dir / "checkpoint.json", meta);

    std::ostringstream loss;
    loss << "epoch\tmean_loss\n";
    for (std::size_t i = 0; i < result.epoch_loss.size(); ++i)
      loss << i + 1 << '\t' << fmt_metric(result.epoch_loss[i]) << '\n';
    write_text(dir / "loss.tsv", loss.str());
    if (!result.validation_auc.empty()) {
      std::ostringstream val;
      val << "epoch\tvalidation_auc\n";
      for (std::size_t i = 0; i < result.validation_auc.size(); ++i)
        val << i + 1 << '\t' << fmt_metric(result.validation_auc[i]) << '\n';
      write_text(dir / "validation.tsv", val.str());
    }
    ctx.out_stream << fmt_fraction(fraction) << '\t' << (dir / "checkpoint.bin").string() << '\n';
  }
}

void cmd_eval_lp(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  const LoadedGraph data = load_dataset(cfg, ctx.console);
  std::string report = kMetricsHeader;
  for (double fraction : unique_fractions(cfg.fractions, ctx.console)) {
    const FractionArtifacts a =
        load_artifacts(ctx.out / fraction_dir(fraction), data, cfg, fraction);
    const EvalSplit& split = a.split.split;
    const Graph train_graph = split.train_graph(data.graph);
    std::size_t stranded = 0;
    for (NodeId v = 0; v < data.graph.num_nodes(); ++v)
      stranded += data.graph.degree(v) > 0 && train_graph.degree(v) == 0;
    if (stranded)
      ctx.console.warn(std::to_string(stranded) + " nodes have no training edges at fraction " +
                       fmt_fraction(fraction) + "; their pairs are scored with global embeddings");
    const LinkScores s = evaluate_link_prediction(a.checkpoint.embedding, train_graph, split, cfg,
                                                  cfg.train.neighborhood, fraction);
    report += dataset_name(cfg) + '\t' + fmt_fraction(fraction) + '\t' +
              std::string(to_string(cfg.train.variant)) + '\t' + fmt_metric(s.auc) + '\t' +
              fmt_metric(s.ap) + "\tNA\tNA\t" + std::to_string(cfg.train.seed) + '\n';
  }
  write_text(ctx.out / "metrics_lp.tsv", report);
  ctx.out_stream << report;
}

void cmd_eval_cluster(const RunContext& ctx) {
  const ExperimentConfig& cfg = ctx.config;
  if (cfg.labels.empty()) throw ValidationError("eval-cluster needs --labels");
  const LoadedGraph data = load_dataset(cfg, ctx.console);
  if (!fs::exists(cfg.labels)) throw IoError("labels file not found: " + cfg.labels.string());
  CommunityLabels labels;
  try {
    labels = read_labels(cfg.labels, data.graph);
  } catch (const ParseError& e) {
    throw IoError(cfg.labels.string() + ": " + e.what());
  }
  if (labels.unknown_nodes)
    ctx.console.warn(std::to_string(labels.unknown_nodes) +
                     " labelled nodes are not in the graph and were excluded");

  std::vector<NodeId> labelled;
  std::vector<int> truth;
  for (NodeId v = 0; v < data.graph.num_nodes(); ++v) {
    if (labels.community[v] < 0) continue;
    labelled.push_back(v);
    truth.push_back(labels.community[v]);
  }
  if (labelled.size() < data.graph.num_nodes())
    ctx.console.warn(std::to_string(data.graph.num_nodes() - labelled.size()) +
                     " graph nodes have no label and were excluded");
  if (labelled.empty()) throw ValidationError("no graph node carries a label");
  const std::size_t k = cfg.k ? cfg.k : labels.num_communities;

  std::string report = "# cluster_mode=" + std::string(to_string(cfg.cluster_mode)) +
                       " k=" + std::to_string(k) + '\n' + kMetricsHeader;
  for (double fraction : unique_fractions(cfg.fractions, ctx.console)) {
    const FractionArtifacts a =
        load_artifacts(ctx.out / fraction_dir(fraction), data, cfg, fraction);
    const Graph train_graph = a.split.split.train_graph(data.graph);
    Rng feature_rng = make_rng(cfg.train.seed, Stream::eval, fraction_key(fraction), 1);
    const PointSet all = node_features_for_clustering(a.checkpoint.embedding, train_graph,
                                                      cfg.cluster_mode, cfg.train.neighborhood,
                                                      feature_rng);
    PointSet points;
    points.count = labelled.size();
    points.dim = all.dim;
    points.values.reserve(points.count * points.dim);
    for (NodeId v : labelled) {
      auto p = all.point(v);
      points.values.insert(points.values.end(), p.begin(), p.end());
    }
    Rng cluster_rng = make_rng(cfg.train.seed, Stream::cluster, fraction_key(fraction));
    KMeansOptions opts;
    opts.k = k;
    const ClusterResult clusters = kmeans(points, opts, cluster_rng);
    report += dataset_name(cfg) + '\t' + fmt_fraction(fraction) + '\t' +
              std::string(to_string(cfg.train.variant)) + "\tNA\tNA\t" +
              fmt_metric(nmi(truth, clusters.assignments)) + '\t' +
              fmt_metric(ami(truth, clusters.assignments)) + '\t' +
              std::to_string(cfg.train.seed) + '\n';
  }
  write_text(ctx.out / "metrics_cluster.tsv", report);
  ctx.out_stream << report;
}

void cmd_sweep_n(const RunContext& ctx, const std::vector<std::size_t>& values) {
  if (values.empty()) throw ValidationError("sweep-n needs at least one neighborhood size");
  std::vector<std::size_t> sizes;
  for (std::size_t n : values) {
    if (std::find(sizes.begin(), sizes.end(), n) != sizes.end()) {
      ctx.console.warn("duplicate neighborhood size " + std::to_string(n) + " ignored");
      continue;
    }
    sizes.push_back(n);
  }
  const ExperimentConfig& cfg = ctx.config;
  const LoadedGraph data = load_dataset(cfg, ctx.console);
  ensure_dir(ctx.out);
  write_text(ctx.out / "config.txt", cfg.to_text());

  std::string report = "dataset\tfraction\tvariant\tneighborhood\tauc\tap\tnmi\tami\tseed\n";
  std::string spreads;
  for (double fraction : unique_fractions(cfg.fractions, ctx.console)) {
    const EvalSplit split = make_split(data.graph, cfg, fraction);
    const Graph train_graph = split.train_graph(data.graph);
    std::vector<double> aucs;
    for (std::size_t n : sizes) {
      TrainConfig tc = cfg.train;
      tc.neighborhood = n;
      const TrainResult result = train_with_progress(
          train_graph, tc, "fraction " + fmt_fraction(fraction) + " N=" + std::to_string(n),
          ctx.console);
      const LinkScores s =
          evaluate_link_prediction(result.embedding, train_graph, split, cfg, n, fraction);
      if (s.auc) aucs.push_back(*s.auc);
      report += dataset_name(cfg) + '\t' + fmt_fraction(fraction) + '\t' +
                std::string(to_string(tc.variant)) + '\t' + std::to_string(n) + '\t' +
                fmt_metric(s.auc) + '\t' + fmt_metric(s.ap) + "\tNA\tNA\t" +
                std::to_string(tc.seed) + '\n';
    }
    const auto [lo, hi] = std::minmax_element(aucs.begin(), aucs.end());
    spreads += "# auc_spread fraction=" + fmt_fraction(fraction) + " value=" +
               (aucs.empty() ? std::string("NA") : fmt_metric(*hi - *lo)) + '\n';
  }
  report += spreads;
  write_text(ctx.out / "sweep_n.tsv", report);
  ctx.out_stream << report;
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (syy == 0.0 || sxx == 0.0) return 1.0;
  return sxy * sxy / (sxx * syy);
}

void cmd_bench_scaling(const BenchOptions& opts, std::ostream& out, Console& console) {
  if (opts.sizes.empty()) throw ValidationError("bench-scaling needs at least one size");
  if (!std::is_sorted(opts.sizes.begin(), opts.sizes.end()) ||
      std::adjacent_find(opts.sizes.begin(), opts.sizes.end()) != opts.sizes.end())
    throw ValidationError("sizes must be strictly ascending");
  if (opts.m_attach == 0) throw ValidationError("--m-attach must be positive");
  if (opts.repeats == 0) throw ValidationError("--repeats must be positive");
  if (opts.sizes.front() < opts.m_attach)
    throw ValidationError("sizes must be at least --m-attach");
  opts.train.validate();

  std::vector<double> edges, seconds;
  std::string report = "edges\tseconds\n";
  for (std::size_t target : opts.sizes) {
    // BA with n nodes has (n - m_attach) * m_attach edges.
    const std::size_t n = (target + opts.m_attach - 1) / opts.m_attach + opts.m_attach;
    Rng gen_rng = make_rng(opts.train.seed, Stream::generator, target);
    const Graph g = barabasi_albert(n, opts.m_attach, gen_rng);
    const NegativeSampler sampler(g);
    std::vector<double> times;
    for (std::size_t r = 0; r < opts.repeats; ++r) {
      Rng init_rng = make_rng(opts.train.seed, Stream::init);
      Trainer trainer(g, opts.train, sampler, init_embedding(g.num_nodes(), opts.train.dim, init_rng));
      const auto start = std::chrono::steady_clock::now();
      trainer.run_epoch(0);
      times.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    }
    std::sort(times.begin(), times.end());
    const double t = times[times.size() / 2];
    edges.push_back(static_cast<double>(g.num_edges()));
    seconds.push_back(t);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%zu\t%.6f\n", g.num_edges(), t);
    report += buf;
    console.info("m=" + std::to_string(g.num_edges()) + " epoch " + fmt_metric(t) + "s");
  }
  if (edges.size() >= 2) report += "# r2=" + fmt_metric(linear_fit_r2(edges, seconds)) + '\n';
  if (!opts.out.empty()) {
    ensure_dir(opts.out);
    write_text(opts.out / "bench_scaling.tsv", report);
  }
  out << report;
}

void cmd_export_attention(const AttentionOptions& opts, std::ostream& out, Console& console) {
  fs::path sidecar = opts.checkpoint;
  sidecar.replace_extension(".json");
  std::optional<CheckpointMeta> meta;
  if (fs::exists(sidecar)) meta = read_checkpoint_meta(sidecar);

  ExperimentConfig cfg;
  cfg.directed = opts.directed;
  cfg.data = !opts.data.empty() ? opts.data : meta ? fs::path(meta->dataset) : fs::path{};
  std::size_t neighborhood = opts.neighborhood;
  if (neighborhood == 0 && meta) neighborhood = meta->config.neighborhood;
  if (neighborhood == 0)
    throw ValidationError("--neighborhood is required when the checkpoint has no sidecar");
  const std::uint64_t seed = opts.seed ? *opts.seed : meta ? meta->config.seed : 1;

  const LoadedGraph data = load_dataset(cfg, console);
  if (!fs::exists(opts.checkpoint))
    throw IoError("checkpoint not found: " + opts.checkpoint.string());
  const Checkpoint ckpt = read_checkpoint(opts.checkpoint);
  if (ckpt.embedding.num_nodes() != data.graph.num_nodes())
    throw ConsistencyError("checkpoint has " + std::to_string(ckpt.embedding.num_nodes()) +
                           " nodes but the graph has " +
                           std::to_string(data.graph.num_nodes()));

  std::ifstream in(opts.pairs);
  if (!in) throw IoError("cannot read pairs file " + opts.pairs.string());
  std::vector<NodePair> pairs;
  std::string line;
  std::size_t lineno = 0, unknown = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string s, t;
    if (!(ls >> s)) continue;
    if (s.front() == '#') continue;
    if (!(ls >> t)) throw IoError(opts.pairs.string() + ": line " + std::to_string(lineno) +
                                  ": expected two node ids");
    auto u = data.graph.find(s), v = data.graph.find(t);
    if (!u || !v) {
      ++unknown;
      console.warn("pairs line " + std::to_string(lineno) + ": unknown node " + (u ? t : s) +
                   ", skipped");
      continue;
    }
    pairs.push_back({*u, *v});
  }

  Rng rng = make_rng(seed, Stream::eval, 0x61747465);
  const AttentionReport report =
      export_attention(ckpt.embedding, data.graph, pairs, neighborhood, rng);
  if (report.skipped)
    console.warn(std::to_string(report.skipped) + " pairs with an isolated endpoint skipped");
  const std::string json = attention_to_json(report, data.graph) + "\n";
  if (opts.output.empty()) {
    out << json;
  } else {
    if (opts.output.has_parent_path()) ensure_dir(opts.output.parent_path());
    write_text(opts.output, json);
  }
}

}  // namespace goat::cli
