#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "goat/cli.hpp"
#include "goat/digest.hpp"
#include "goat/error.hpp"
#include "goat/io.hpp"

namespace goat::cli {
namespace {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size())
    throw ValidationError("invalid value for " + std::string(key) + ": '" + std::string(text) +
                          "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value))
      throw ValidationError("non-finite value for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ValidationError("invalid boolean for " + std::string(key) + ": '" + std::string(text) +
                        "'");
}

template <typename E>
E parse_enum(std::string_view key, std::string_view text, std::optional<E> (*fn)(std::string_view)) {
  if (auto v = fn(trim(text))) return *v;
  throw ValidationError("invalid value for " + std::string(key) + ": '" + std::string(text) + "'");
}

constexpr std::array kKnownKeys = {
    "preset",    "data",       "labels",       "directed", "fractions",        "dim",
    "neighborhood", "lr",      "dropout",      "negatives", "epochs",          "variant",
    "seed",      "workers",    "mode",         "batch-per-worker", "optimizer", "negative-repr",
    "resample",  "patience",   "validation-fraction", "trials", "cluster-mode", "k",
};

Settings common_preset(double dropout, std::size_t neighborhood) {
  return Settings{
      {"dim", "200"},
      {"neighborhood", std::to_string(neighborhood)},
      {"lr", "0.0001"},
      {"dropout", format_double(dropout)},
      {"epochs", "100"},
      {"patience", "5"},
  };
}

}  // namespace

std::vector<double> default_fractions() {
  std::vector<double> out;
  for (int i = 15; i <= 95; i += 10) out.push_back(i / 100.0);
  return out;
}

std::vector<std::string_view> preset_names() {
  return {"cora", "cora2", "citeseer", "pubmed", "email", "zhihu"};
}

std::optional<Settings> preset(std::string_view name) {
  if (name == "cora" || name == "cora2" || name == "citeseer" || name == "pubmed")
    return common_preset(0.5, 100);
  if (name == "email") {
    // One epoch over Email is far costlier than over the citation graphs
    // (average degree ~50 against ~4), so the budget is smaller.
    Settings s = common_preset(0.8, 100);
    s["epochs"] = "12";
    s["patience"] = "3";
    s["k"] = "42";
    return s;
  }
  if (name == "zhihu") return common_preset(0.65, 250);
  return std::nullopt;
}

std::optional<std::string> preset_for_path(const std::filesystem::path& data) {
  std::string stem = data.filename().string();
  stem = stem.substr(0, stem.find('.'));
  std::transform(stem.begin(), stem.end(), stem.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (stem.starts_with("email")) stem = "email";
  if (preset(stem)) return stem;
  return std::nullopt;
}

Settings parse_settings(std::istream& in) {
  Settings out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key=value", lineno);
    std::string key(trim(view.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", lineno);
    out[key] = std::string(trim(view.substr(eq + 1)));
  }
  return out;
}

Settings read_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  return parse_settings(in);
}

std::vector<double> parse_fraction_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    auto item = trim(text.substr(pos, comma - pos));
    if (item.empty()) throw ValidationError("empty entry in fraction list");
    const double f = parse_number<double>("fractions", item);
    if (!(f > 0.0 && f <= 1.0))
      throw ValidationError("fraction " + std::string(item) + " outside (0, 1]");
    out.push_back(f);
    pos = comma + 1;
  }
  return out;
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  if (trim(text).empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    auto item = trim(text.substr(pos, comma - pos));
    if (item.empty()) throw ValidationError("empty entry in list");
    out.push_back(parse_number<std::size_t>("list", item));
    pos = comma + 1;
  }
  return out;
}

ExperimentConfig make_config(const Settings& s, bool require_model) {
  for (const auto& [key, value] : s) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
      throw ValidationError("unknown setting '" + key + "'");
  }
  if (require_model) {
    std::string missing;
    for (const char* key : {"dim", "neighborhood", "lr", "dropout"}) {
      if (!s.contains(key)) missing += std::string(missing.empty() ? "" : ", ") + "--" + key;
    }
    if (!missing.empty())
      throw ValidationError("no preset for this dataset; please set " + missing);
  }

  ExperimentConfig c;
  auto get = [&](std::string_view key) -> const std::string* {
    auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };
  TrainConfig& t = c.train;
  if (auto v = get("preset")) c.preset = *v;
  if (auto v = get("data")) c.data = *v;
  if (auto v = get("labels")) c.labels = *v;
  if (auto v = get("directed")) c.directed = parse_bool("directed", *v);
  c.fractions = default_fractions();
  if (auto v = get("fractions")) c.fractions = parse_fraction_list(*v);
  if (auto v = get("dim")) t.dim = parse_number<std::size_t>("dim", *v);
  if (auto v = get("neighborhood")) t.neighborhood = parse_number<std::size_t>("neighborhood", *v);
  if (auto v = get("lr")) t.learning_rate = parse_number<double>("lr", *v);
  if (auto v = get("dropout")) t.dropout = parse_number<double>("dropout", *v);
  if (auto v = get("negatives")) t.negatives = parse_number<std::size_t>("negatives", *v);
  if (auto v = get("epochs")) t.epochs = parse_number<std::size_t>("epochs", *v);
  if (auto v = get("variant")) t.variant = parse_enum("variant", *v, &parse_variant);
  if (auto v = get("seed")) t.seed = parse_number<std::uint64_t>("seed", *v);
  if (auto v = get("workers")) t.workers = parse_number<std::size_t>("workers", *v);
  if (auto v = get("mode")) t.mode = parse_enum("mode", *v, &parse_parallel_mode);
  if (auto v = get("batch-per-worker"))
    t.batch_per_worker = parse_number<std::size_t>("batch-per-worker", *v);
  if (auto v = get("optimizer")) t.optimizer = parse_enum("optimizer", *v, &parse_optimizer);
  if (auto v = get("negative-repr"))
    t.negative_repr = parse_enum("negative-repr", *v, &parse_negative_repr);
  if (auto v = get("resample")) t.resample_neighborhoods = parse_bool("resample", *v);
  if (auto v = get("patience")) t.patience = parse_number<std::size_t>("patience", *v);
  if (auto v = get("validation-fraction"))
    t.validation_fraction = parse_number<double>("validation-fraction", *v);
  if (auto v = get("trials")) c.trials = parse_number<std::size_t>("trials", *v);
  if (auto v = get("cluster-mode"))
    c.cluster_mode = parse_enum("cluster-mode", *v, &parse_feature_mode);
  if (auto v = get("k")) c.k = parse_number<std::size_t>("k", *v);

  if (c.fractions.empty()) throw ValidationError("fraction list is empty");
  if (c.trials == 0) throw ValidationError("trials must be positive");
  t.validate();
  return c;
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  std::string fr;
  for (double f : fractions) fr += (fr.empty() ? "" : ",") + format_double(f);
  const TrainConfig& t = train;
  out << "preset=" << preset << '\n'
      << "data=" << data.string() << '\n'
      << "labels=" << labels.string() << '\n'
      << "directed=" << (directed ? "true" : "false") << '\n'
      << "fractions=" << fr << '\n'
      << "dim=" << t.dim << '\n'
      << "neighborhood=" << t.neighborhood << '\n'
      << "lr=" << format_double(t.learning_rate) << '\n'
      << "dropout=" << format_double(t.dropout) << '\n'
      << "negatives=" << t.negatives << '\n'
      << "epochs=" << t.epochs << '\n'
      << "variant=" << to_string(t.variant) << '\n'
      << "seed=" << t.seed << '\n'
      << "workers=" << t.workers << '\n'
      << "mode=" << to_string(t.mode) << '\n'
      << "batch-per-worker=" << t.batch_per_worker << '\n'
      << "optimizer=" << to_string(t.optimizer) << '\n'
      << "negative-repr=" << to_string(t.negative_repr) << '\n'
      << "resample=" << (t.resample_neighborhoods ? "true" : "false") << '\n'
      << "patience=" << t.patience << '\n'
      << "validation-fraction=" << format_double(t.validation_fraction) << '\n'
      << "trials=" << trials << '\n'
      << "cluster-mode=" << to_string(cluster_mode) << '\n'
      << "k=" << k << '\n';
  return out.str();
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return to_text() == o.to_text();
}

std::string fraction_dir(double fraction) { return "frac_" + format_double(fraction); }

std::uint64_t run_digest(std::uint64_t data_digest, const ExperimentConfig& cfg, double fraction) {
  std::string text = "data=" + format_digest(data_digest) + "\n";
  text += "directed=" + std::string(cfg.directed ? "true" : "false") + "\n";
  text += "fraction=" + format_double(fraction) + "\n";
  text += cfg.train.canonical();
  return fnv1a(text);
}

}  // namespace goat::cli
