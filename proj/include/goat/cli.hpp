#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "goat/eval.hpp"
#include "goat/train.hpp"

namespace goat::cli {

enum ExitCode : int { ok = 0, failure = 1, io_error = 2, consistency = 3, usage = 4 };

/// Flat key=value settings; later layers override earlier ones.
using Settings = std::map<std::string, std::string, std::less<>>;

/// Everything needed to reproduce one experiment run. The output directory
/// is deliberately not part of it: the snapshot lives inside that directory.
struct ExperimentConfig {
  std::string preset;
  std::filesystem::path data;
  std::filesystem::path labels;
  bool directed = false;
  std::vector<double> fractions;
  TrainConfig train;
  std::size_t trials = 4;
  FeatureMode cluster_mode = FeatureMode::averaged_context;
  /// 0 means "number of communities in the labels file".
  std::size_t k = 0;

  /// One key=value line per setting, keys spelled like the long flags.
  std::string to_text() const;
  bool operator==(const ExperimentConfig&) const;
};

std::vector<double> default_fractions();
std::vector<std::string_view> preset_names();
/// Preset settings for a dataset name; nullopt when unknown.
std::optional<Settings> preset(std::string_view name);
/// Preset name guessed from a dataset file name ("cora.edgelist" -> "cora").
std::optional<std::string> preset_for_path(const std::filesystem::path& data);

/// Throws ParseError (with line number) on malformed lines.
Settings parse_settings(std::istream& in);
Settings read_settings(const std::filesystem::path& path);

/// Builds a config from merged settings. Throws ValidationError on unknown
/// keys, malformed values, or when `require_model` is set and the model
/// hyperparameters (dim, neighborhood, lr, dropout) are missing.
ExperimentConfig make_config(const Settings& s, bool require_model = true);

std::vector<double> parse_fraction_list(std::string_view text);
std::vector<std::size_t> parse_size_list(std::string_view text);

/// Directory name for one fraction, e.g. "frac_0.55".
std::string fraction_dir(double fraction);

/// Digest tying split files and checkpoints to the dataset contents, the
/// training configuration and the fraction.
std::uint64_t run_digest(std::uint64_t data_digest, const ExperimentConfig& cfg, double fraction);

/// Entry point behind the `goat` executable. Never throws; returns an
/// ExitCode. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace goat::cli
