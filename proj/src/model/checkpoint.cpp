#include "goat/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "goat/error.hpp"
#include "goat/io.hpp"

namespace goat {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
T get(std::istream& in, const std::filesystem::path& path) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof value))
    throw IoError("truncated checkpoint '" + path.string() + "'");
  return value;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Embedding& e, std::uint64_t seed,
                      std::uint64_t config_digest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, 0);
  put<std::uint64_t>(out, e.num_nodes());
  put<std::uint64_t>(out, e.dim());
  put<std::uint64_t>(out, seed);
  put<std::uint64_t>(out, config_digest);
  const auto values = e.values();
  out.write(reinterpret_cast<const char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  char magic[8];
  if (!in.read(magic, sizeof magic)) throw IoError("truncated checkpoint '" + path.string() + "'");
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0)
    throw ParseError("'" + path.string() + "' is not a checkpoint", 0);
  Checkpoint ckpt;
  ckpt.header.version = get<std::uint32_t>(in, path);
  if (ckpt.header.version != kCheckpointVersion)
    throw ParseError("unsupported checkpoint version " + std::to_string(ckpt.header.version), 0);
  get<std::uint32_t>(in, path);
  ckpt.header.num_nodes = get<std::uint64_t>(in, path);
  ckpt.header.dim = get<std::uint64_t>(in, path);
  ckpt.header.seed = get<std::uint64_t>(in, path);
  ckpt.header.config_digest = get<std::uint64_t>(in, path);
  ckpt.embedding = Embedding(ckpt.header.num_nodes, ckpt.header.dim);
  auto values = ckpt.embedding.values();
  if (!in.read(reinterpret_cast<char*>(values.data()),
               static_cast<std::streamsize>(values.size() * sizeof(double))))
    throw IoError("truncated checkpoint '" + path.string() + "'");
  return ckpt;
}

void write_checkpoint_meta(const std::filesystem::path& path, const CheckpointMeta& meta) {
  const TrainConfig& c = meta.config;
  nlohmann::ordered_json doc = {
      {"dataset", meta.dataset},
      {"fraction", meta.fraction},
      {"config_digest", format_digest(meta.config_digest)},
      {"best_epoch", meta.best_epoch},
      {"dim", c.dim},
      {"neighborhood", c.neighborhood},
      {"lr", c.learning_rate},
      {"dropout", c.dropout},
      {"negatives", c.negatives},
      {"epochs", c.epochs},
      {"seed", c.seed},
      {"variant", to_string(c.variant)},
      {"negative_repr", to_string(c.negative_repr)},
      {"optimizer", to_string(c.optimizer)},
      {"resample", c.resample_neighborhoods},
      {"workers", c.workers},
      {"mode", to_string(c.mode)},
      {"batch_per_worker", c.batch_per_worker},
      {"patience", c.patience},
      {"validation_fraction", c.validation_fraction},
  };
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

CheckpointMeta read_checkpoint_meta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  CheckpointMeta meta;
  try {
    const auto doc = nlohmann::json::parse(in);
    meta.dataset = doc.at("dataset").get<std::string>();
    meta.fraction = doc.at("fraction").get<double>();
    meta.config_digest = std::stoull(doc.at("config_digest").get<std::string>(), nullptr, 16);
    meta.best_epoch = doc.at("best_epoch").get<std::size_t>();
    TrainConfig& c = meta.config;
    c.dim = doc.at("dim").get<std::size_t>();
    c.neighborhood = doc.at("neighborhood").get<std::size_t>();
    c.learning_rate = doc.at("lr").get<double>();
    c.dropout = doc.at("dropout").get<double>();
    c.negatives = doc.at("negatives").get<std::size_t>();
    c.epochs = doc.at("epochs").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.variant = parse_variant(doc.at("variant").get<std::string>()).value();
    c.negative_repr = parse_negative_repr(doc.at("negative_repr").get<std::string>()).value();
    c.optimizer = parse_optimizer(doc.at("optimizer").get<std::string>()).value();
    c.resample_neighborhoods = doc.at("resample").get<bool>();
    c.workers = doc.at("workers").get<std::size_t>();
    c.mode = parse_parallel_mode(doc.at("mode").get<std::string>()).value();
    c.batch_per_worker = doc.at("batch_per_worker").get<std::size_t>();
    c.patience = doc.at("patience").get<std::size_t>();
    c.validation_fraction = doc.at("validation_fraction").get<double>();
  } catch (const std::exception& ex) {
    throw ParseError("invalid checkpoint metadata '" + path.string() + "': " + ex.what(), 0);
  }
  return meta;
}

}  // namespace goat
