#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "goat/cli.hpp"

namespace goat::cli {

// Warnings and progress go to `err`; colour only for a terminal and only
// when NO_COLOR is unset.
class Console {
 public:
  Console(std::ostream& err, bool quiet);
  void warn(const std::string& msg);
  void info(const std::string& msg);
  std::size_t warnings() const noexcept { return warnings_; }

 private:
  std::ostream& err_;
  bool quiet_;
  bool color_;
  std::size_t warnings_ = 0;
};

struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out;
  std::ostream& out_stream;
  Console& console;
};

void cmd_train(const RunContext& ctx);
void cmd_eval_lp(const RunContext& ctx);
void cmd_eval_cluster(const RunContext& ctx);
void cmd_sweep_n(const RunContext& ctx, const std::vector<std::size_t>& values);

struct BenchOptions {
  std::vector<std::size_t> sizes;
  std::size_t m_attach = 5;
  std::size_t repeats = 1;
  TrainConfig train;
  std::filesystem::path out;  // optional directory for bench_scaling.tsv
};
/// Coefficient of determination of the least-squares line through (x, y).
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);
void cmd_bench_scaling(const BenchOptions& opts, std::ostream& out, Console& console);

struct AttentionOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path data;
  std::filesystem::path pairs;
  std::filesystem::path output;  // empty: write to the output stream
  bool directed = false;
  std::size_t neighborhood = 0;  // 0: take it from the checkpoint sidecar
  std::optional<std::uint64_t> seed;
};
void cmd_export_attention(const AttentionOptions& opts, std::ostream& out, Console& console);

}  // namespace goat::cli
