#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "goat/embedding.hpp"
#include "goat/train.hpp"

namespace goat {

// Binary layout, little-endian:
//   char[8]  magic "GOATEMB1"
//   u32      format version
//   u32      reserved (0)
//   u64      n, d, seed, config digest
//   f64      (n + 1) * d values, row-major, padding row last
inline constexpr char kCheckpointMagic[8] = {'G', 'O', 'A', 'T', 'E', 'M', 'B', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointHeader {
  std::uint32_t version = kCheckpointVersion;
  std::uint64_t num_nodes = 0;
  std::uint64_t dim = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_digest = 0;
};

struct Checkpoint {
  CheckpointHeader header;
  Embedding embedding;
};

void write_checkpoint(const std::filesystem::path& path, const Embedding& e, std::uint64_t seed,
                      std::uint64_t config_digest);

/// Throws IoError on unreadable/truncated files and ParseError on a bad
/// magic or version.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// JSON sidecar describing how a checkpoint was produced.
struct CheckpointMeta {
  TrainConfig config;
  std::string dataset;
  double fraction = 1.0;
  std::uint64_t config_digest = 0;
  std::size_t best_epoch = 0;
};

void write_checkpoint_meta(const std::filesystem::path& path, const CheckpointMeta& meta);
CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path);

}  // namespace goat
