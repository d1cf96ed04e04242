#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "goat/cli.hpp"
#include "goat/error.hpp"
#include "goat/kernels.hpp"

namespace goat::cli {
namespace {

namespace fs = std::filesystem;

struct FlagOption {
  std::string key;
  const char* help;
};

// Flags that map one-to-one onto config keys.
const std::vector<FlagOption> kExperimentFlags = {
    {"data", "edge list (\"u v\" or \"u v w\" per line)"},
    {"labels", "ground-truth communities (\"node community\" per line)"},
    {"fractions", "comma-separated training fractions (default 0.15,...,0.95)"},
    {"dim", "embedding dimension d"},
    {"neighborhood", "neighborhood size N"},
    {"lr", "learning rate"},
    {"dropout", "dropout rate in [0,1)"},
    {"negatives", "negative samples per edge"},
    {"epochs", "maximum training epochs"},
    {"variant", "goat | global"},
    {"seed", "root random seed"},
    {"workers", "training threads"},
    {"mode", "sync | async"},
    {"batch-per-worker", "edges per worker between sync barriers"},
    {"optimizer", "adam | sgd"},
    {"negative-repr", "context | global"},
    {"resample", "redraw neighborhoods on every edge visit (true|false)"},
    {"patience", "early-stopping patience in epochs (0 disables)"},
    {"validation-fraction", "share of training edges held out for early stopping"},
    {"trials", "neighborhood resamples averaged per scored pair"},
    {"cluster-mode", "global | averaged-context"},
    {"k", "number of clusters (default: number of communities)"},
    {"preset", "built-in hyperparameters: cora, cora2, citeseer, pubmed, email, zhihu"},
};

struct ExperimentFlags {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  CLI::Option* directed = nullptr;
  std::string config;
  std::string out;
  bool quiet = false;

  void attach(CLI::App* app) {
    for (const auto& f : kExperimentFlags)
      options.emplace_back(f.key, app->add_option("--" + f.key, values[f.key], f.help));
    directed = app->add_flag("--directed", "treat the edge list as directed");
    app->add_option("--config", config, "key=value config file; flags override it");
    app->add_option("--out", out, "output directory")->required();
    app->add_flag("-q,--quiet", quiet, "suppress progress output");
  }

  Settings given() const {
    Settings s;
    for (const auto& [key, opt] : options)
      if (opt->count()) s[key] = values.at(key);
    if (directed->count()) s["directed"] = "true";
    return s;
  }
};

Settings load_config_file(const fs::path& path) {
  try {
    return read_settings(path);
  } catch (const ParseError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// Layers: preset < config file < flags. Evaluation commands fall back to the
// snapshot written by `train` when no config file is named.
ExperimentConfig resolve(const ExperimentFlags& flags, bool use_snapshot) {
  Settings file;
  if (!flags.config.empty())
    file = load_config_file(flags.config);
  else if (use_snapshot && fs::exists(fs::path(flags.out) / "config.txt"))
    file = load_config_file(fs::path(flags.out) / "config.txt");
  const Settings cli = flags.given();

  auto lookup = [&](const std::string& key) -> std::string {
    if (auto it = cli.find(key); it != cli.end()) return it->second;
    if (auto it = file.find(key); it != file.end()) return it->second;
    return {};
  };
  std::string name = lookup("preset");
  if (name.empty()) {
    if (auto guessed = preset_for_path(lookup("data"))) name = *guessed;
  }
  Settings merged;
  if (!name.empty()) {
    auto p = preset(name);
    if (!p) throw ValidationError("unknown preset '" + name + "'");
    merged = *p;
    merged["preset"] = name;
  }
  for (const auto& [k, v] : file) merged[k] = v;
  for (const auto& [k, v] : cli) merged[k] = v;
  return make_config(merged);
}

int report_error(std::ostream& err, const std::string& msg, int code) {
  err << "error: " << msg << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Context-sensitive graph embeddings with mutual attention", "goat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "goat 1.0");

  ExperimentFlags train_f, lp_f, cluster_f, sweep_f;
  auto* train_cmd = app.add_subcommand("train", "split the graph and train one model per fraction");
  train_f.attach(train_cmd);
  auto* lp_cmd = app.add_subcommand("eval-lp", "link-prediction AUC/AP of trained checkpoints");
  lp_f.attach(lp_cmd);
  auto* cluster_cmd =
      app.add_subcommand("eval-cluster", "k-Means NMI/AMI of trained checkpoints");
  cluster_f.attach(cluster_cmd);
  auto* sweep_cmd = app.add_subcommand("sweep-n", "train and evaluate once per neighborhood size");
  sweep_f.attach(sweep_cmd);
  std::string sweep_values;
  sweep_cmd->add_option("--values", sweep_values, "comma-separated neighborhood sizes")
      ->required();

  BenchOptions bench;
  bench.train.dim = 16;
  bench.train.neighborhood = 10;
  bench.train.learning_rate = 1e-3;
  std::string bench_sizes, bench_out;
  bool bench_quiet = false;
  auto* bench_cmd =
      app.add_subcommand("bench-scaling", "time one epoch on Barabasi-Albert graphs");
  bench_cmd->add_option("--sizes", bench_sizes, "ascending comma-separated edge counts")
      ->required();
  bench_cmd->add_option("--m-attach", bench.m_attach, "edges added per new node")
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "timed epochs per size (median reported)")
      ->capture_default_str();
  bench_cmd->add_option("--dim", bench.train.dim, "embedding dimension")->capture_default_str();
  bench_cmd->add_option("--neighborhood", bench.train.neighborhood, "neighborhood size")
      ->capture_default_str();
  bench_cmd->add_option("--negatives", bench.train.negatives, "negatives per edge")
      ->capture_default_str();
  bench_cmd->add_option("--dropout", bench.train.dropout, "dropout rate")->capture_default_str();
  bench_cmd->add_option("--seed", bench.train.seed, "root random seed")->capture_default_str();
  bench_cmd->add_option("--workers", bench.train.workers, "training threads")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "directory for bench_scaling.tsv");
  bench_cmd->add_flag("-q,--quiet", bench_quiet, "suppress progress output");

  AttentionOptions attn;
  std::string attn_checkpoint, attn_data, attn_pairs, attn_output;
  std::uint64_t attn_seed = 0;
  bool attn_quiet = false;
  auto* attn_cmd =
      app.add_subcommand("export-attention", "attention weights for node pairs as JSON");
  attn_cmd->add_option("--checkpoint", attn_checkpoint, "checkpoint.bin written by train")
      ->required();
  attn_cmd->add_option("--data", attn_data, "edge list (default: dataset named in the sidecar)");
  attn_cmd->add_option("--pairs", attn_pairs, "file with one \"s t\" pair per line")->required();
  attn_cmd->add_option("--output", attn_output, "JSON output file (default: stdout)");
  attn_cmd->add_option("--neighborhood", attn.neighborhood,
                       "neighborhood size (default: from the sidecar)");
  auto* attn_seed_opt = attn_cmd->add_option("--seed", attn_seed, "sampling seed");
  attn_cmd->add_flag("--directed", attn.directed, "treat the edge list as directed");
  attn_cmd->add_flag("-q,--quiet", attn_quiet, "suppress progress output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (train_cmd->parsed()) {
      Console console(err, train_f.quiet);
      console.info(std::string("kernels: ") + std::string(simd::isa_name(simd::active().isa)));
      cmd_train({resolve(train_f, false), train_f.out, out, console});
    } else if (lp_cmd->parsed()) {
      Console console(err, lp_f.quiet);
      cmd_eval_lp({resolve(lp_f, true), lp_f.out, out, console});
    } else if (cluster_cmd->parsed()) {
      Console console(err, cluster_f.quiet);
      cmd_eval_cluster({resolve(cluster_f, true), cluster_f.out, out, console});
    } else if (sweep_cmd->parsed()) {
      Console console(err, sweep_f.quiet);
      const auto values = parse_size_list(sweep_values);
      cmd_sweep_n({resolve(sweep_f, false), sweep_f.out, out, console}, values);
    } else if (bench_cmd->parsed()) {
      Console console(err, bench_quiet);
      bench.sizes = parse_size_list(bench_sizes);
      bench.out = bench_out;
      cmd_bench_scaling(bench, out, console);
    } else if (attn_cmd->parsed()) {
      Console console(err, attn_quiet);
      attn.checkpoint = attn_checkpoint;
      attn.data = attn_data;
      attn.pairs = attn_pairs;
      attn.output = attn_output;
      if (attn_seed_opt->count()) attn.seed = attn_seed;
      cmd_export_attention(attn, out, console);
    }
  } catch (const ConsistencyError& e) {
    return report_error(err, e.what(), consistency);
  } catch (const IoError& e) {
    return report_error(err, e.what(), io_error);
  } catch (const ParseError& e) {
    return report_error(err, e.what(), io_error);
  } catch (const ValidationError& e) {
    return report_error(err, e.what(), usage);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, e.what(), io_error);
  } catch (const std::exception& e) {
    return report_error(err, e.what(), failure);
  }
  return ok;
}

}  // namespace goat::cli
