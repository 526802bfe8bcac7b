#include "emac/harness/config_file.hpp"

#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "emac/csv.hpp"
#include "emac/errors.hpp"

namespace emac::harness {
namespace {

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
T parse_value(std::string_view text) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      throw std::invalid_argument("bad bool");
    } else if constexpr (std::is_same_v<T, int>) {
      const long long v = csv::parse_int(text);
      if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw std::out_of_range("int range");
      }
      return static_cast<int>(v);
    } else {
      return csv::parse_double(text);
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + std::string(text) + "'");
  }
}

template <class T>
std::string show(T v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else if constexpr (std::is_same_v<T, int>) {
    return std::to_string(v);
  } else {
    return csv::format_double(v);
  }
}

template <class T, class Ptr>
Field sim_field(Ptr ptr) {
  return {[ptr](RunConfig& c, std::string_view v) { c.sim.*ptr = parse_value<T>(v); },
          [ptr](const RunConfig& c) { return show<T>(c.sim.*ptr); }};
}

template <class T, class Ptr>
Field train_field(Ptr ptr) {
  return {[ptr](RunConfig& c, std::string_view v) { c.train.*ptr = parse_value<T>(v); },
          [ptr](const RunConfig& c) { return show<T>(c.train.*ptr); }};
}

// Ordered as written by write_config.
const std::vector<std::pair<std::string, Field>>& fields() {
  using env::SimConfig;
  using marl::TrainConfig;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"n_ue", sim_field<int>(&SimConfig::n_ue)},
      {"buffer_capacity", sim_field<int>(&SimConfig::buffer_capacity)},
      {"total_sdus", sim_field<int>(&SimConfig::total_sdus)},
      {"p_arrival", sim_field<double>(&SimConfig::p_arrival)},
      {"tbler", sim_field<double>(&SimConfig::tbler)},
      {"dl_vocab", sim_field<int>(&SimConfig::dl_vocab)},
      {"ul_vocab", sim_field<int>(&SimConfig::ul_vocab)},
      {"max_steps", sim_field<int>(&SimConfig::max_steps)},
      {"reward_param", sim_field<int>(&SimConfig::reward_param)},
      {"memory_length", train_field<int>(&TrainConfig::memory_length)},
      {"memory_inclusive", train_field<bool>(&TrainConfig::memory_inclusive)},
      {"replay_capacity", train_field<int>(&TrainConfig::replay_capacity)},
      {"batch_size", train_field<int>(&TrainConfig::batch_size)},
      {"update_interval", train_field<int>(&TrainConfig::update_interval)},
      {"learning_rate", train_field<double>(&TrainConfig::learning_rate)},
      {"discount", train_field<double>(&TrainConfig::discount)},
      {"policy_reg", train_field<double>(&TrainConfig::policy_reg)},
      {"gumbel_temperature", train_field<double>(&TrainConfig::gumbel_temperature)},
      {"soft_update", train_field<double>(&TrainConfig::soft_update)},
      {"hidden_units", train_field<int>(&TrainConfig::hidden_units)},
      {"episodes_train", train_field<int>(&TrainConfig::episodes_train)},
      {"episodes_eval", train_field<int>(&TrainConfig::episodes_eval)},
      {"episodes_test", train_field<int>(&TrainConfig::episodes_test)},
      {"eval_interval", train_field<int>(&TrainConfig::eval_interval)},
      {"ue_identity", train_field<bool>(&TrainConfig::ue_identity)},
      {"ablation",
       {[](RunConfig& c, std::string_view v) { c.train.ablation = marl::parse_ablation(v); },
        [](const RunConfig& c) { return std::string(marl::to_string(c.train.ablation)); }}},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

RunConfig desk_config() {
  RunConfig c;
  c.train.episodes_train = 20000;
  c.train.eval_interval = 500;
  return c;
}

RunConfig parse_config(std::istream& in, const RunConfig& base) {
  std::map<std::string_view, const Field*> index;
  for (const auto& [name, field] : fields()) index.emplace(name, &field);

  RunConfig config = base;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(view.substr(0, eq)));
    const std::string_view value = trim(view.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError("unknown config key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError("duplicate config key '" + key + "'");
    try {
      it->second->set(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError("key '" + key + "': " + e.what());
    }
  }
  config.sim.validate();
  config.train.validate();
  return config;
}

RunConfig load_config(const std::filesystem::path& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, base);
}

void write_config(std::ostream& out, const RunConfig& config) {
  for (const auto& [name, field] : fields()) out << name << " = " << field.get(config) << '\n';
}

}  // namespace emac::harness
