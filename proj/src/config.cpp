#include "config.hpp"

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace graphpd::config {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw_usage("malformed-config", msg); }

toml::table parse(std::string_view text) {
  try {
    return toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error at line " << e.source().begin.line << ": " << e.description();
    bad(os.str());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("io-error", "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void reject_unknown(const toml::table& t, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, _] : t) {
    if (!allowed.count(std::string(key.str()))) {
      bad("unknown key '" + std::string(key.str()) + "' in " + where);
    }
  }
}

double as_real(const toml::node& n, const std::string& key) {
  if (auto v = n.value<double>()) return *v;  // also accepts integers
  bad("'" + key + "' must be a number");
}

std::size_t as_count(const toml::node& n, const std::string& key) {
  auto v = n.value<std::int64_t>();
  if (!v || !n.is_integer() || *v < 0) bad("'" + key + "' must be a nonnegative integer");
  return static_cast<std::size_t>(*v);
}

std::uint64_t as_seed(const toml::node& n, const std::string& key) {
  return static_cast<std::uint64_t>(as_count(n, key));
}

const toml::array& as_array(const toml::node& n, const std::string& key) {
  const auto* arr = n.as_array();
  if (!arr) bad("'" + key + "' must be an array");
  return *arr;
}

std::vector<double> real_list(const toml::node& n, const std::string& key) {
  std::vector<double> out;
  for (const auto& e : as_array(n, key)) out.push_back(as_real(e, key));
  return out;
}

std::vector<std::size_t> count_list(const toml::node& n, const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& e : as_array(n, key)) out.push_back(as_count(e, key));
  return out;
}

graph::Distance as_distance(const toml::node& n, const std::string& key) {
  auto s = n.value<std::string>();
  if (!s) bad("'" + key + "' entries must be strings");
  try {
    return graph::parse_distance(*s);
  } catch (const Error&) {
    bad("unknown distance '" + *s + "' in '" + key + "'");
  }
}

std::vector<graph::Distance> distance_list(const toml::node& n, const std::string& key) {
  std::vector<graph::Distance> out;
  for (const auto& e : as_array(n, key)) out.push_back(as_distance(e, key));
  return out;
}

void apply_train_table(const toml::table& root, gcn::TrainConfig& cfg) {
  const auto* node = root.get("train");
  if (!node) return;
  const auto* t = node->as_table();
  if (!t) bad("'train' must be a table");
  reject_unknown(*t,
                 {"max_epochs", "patience", "hidden_width", "weight_decay", "beta1", "beta2", "epsilon"},
                 "[train]");
  for (const auto& [k, v] : *t) {
    const std::string key(k.str());
    if (key == "max_epochs") cfg.max_epochs = as_count(v, key);
    else if (key == "patience") cfg.patience = as_count(v, key);
    else if (key == "hidden_width") cfg.hidden_width = as_count(v, key);
    else if (key == "weight_decay") cfg.weight_decay = as_real(v, key);
    else if (key == "beta1") cfg.beta1 = as_real(v, key);
    else if (key == "beta2") cfg.beta2 = as_real(v, key);
    else if (key == "epsilon") cfg.epsilon = as_real(v, key);
  }
  auto probe = cfg;
  probe.learning_rate = 0.0;
  try {
    probe.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
}

}  // namespace

synth::SynthConfig parse_synth_config(std::string_view text) {
  const auto root = parse(text);
  reject_unknown(root,
                 {"speakers_per_class", "segments_per_speaker", "dim", "class_separation",
                  "speaker_spread", "label_noise_rate", "seed"},
                 "synth config");
  synth::SynthConfig c;
  for (const auto& [k, v] : root) {
    const std::string key(k.str());
    if (key == "speakers_per_class") c.speakers_per_class = as_count(v, key);
    else if (key == "segments_per_speaker") c.segments_per_speaker = as_count(v, key);
    else if (key == "dim") c.dim = as_count(v, key);
    else if (key == "class_separation") c.class_separation = as_real(v, key);
    else if (key == "speaker_spread") c.speaker_spread = as_real(v, key);
    else if (key == "label_noise_rate") c.label_noise_rate = as_real(v, key);
    else if (key == "seed") c.seed = as_seed(v, key);
  }
  try {
    c.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return c;
}

synth::SynthConfig load_synth_config(const std::filesystem::path& path) {
  return parse_synth_config(read_file(path));
}

eval::ExperimentConfig parse_grid_config(std::string_view text, eval::ModelKind model) {
  const auto root = parse(text);
  reject_unknown(root, {"lr", "k", "L", "distance", "train"}, "grid config");
  eval::ExperimentConfig cfg;
  cfg.grid = eval::GridSpec::defaults(model);
  if (const auto* n = root.get("lr")) cfg.grid.learning_rates = real_list(*n, "lr");
  if (const auto* n = root.get("k")) cfg.grid.neighbors = count_list(*n, "k");
  if (const auto* n = root.get("L")) cfg.grid.depths = count_list(*n, "L");
  if (const auto* n = root.get("distance")) cfg.grid.distances = distance_list(*n, "distance");
  apply_train_table(root, cfg.train);
  try {
    cfg.grid.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return cfg;
}

eval::ExperimentConfig load_grid_config(const std::filesystem::path& path, eval::ModelKind model) {
  return parse_grid_config(read_file(path), model);
}

eval::SweepConfig parse_sweep_config(std::string_view text, eval::SweepAxis axis) {
  const auto root = parse(text);
  reject_unknown(root, {"lr", "distance", "values", "fixed", "train"}, "sweep config");
  auto cfg = eval::SweepConfig::defaults(axis);
  if (const auto* n = root.get("lr")) cfg.learning_rates = real_list(*n, "lr");
  if (const auto* n = root.get("distance")) cfg.distances = distance_list(*n, "distance");
  if (const auto* n = root.get("values")) cfg.values = count_list(*n, "values");
  if (const auto* n = root.get("fixed")) {
    const auto* t = n->as_table();
    if (!t) bad("'fixed' must be a table of distance = integer");
    for (const auto& [k, v] : *t) {
      const std::string key(k.str());
      cfg.fixed[as_distance(toml::value<std::string>(key), "fixed")] = as_count(v, "fixed." + key);
    }
  }
  apply_train_table(root, cfg.train);
  try {
    cfg.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return cfg;
}

eval::SweepConfig load_sweep_config(const std::filesystem::path& path, eval::SweepAxis axis) {
  return parse_sweep_config(read_file(path), axis);
}

}  // namespace graphpd::config
