// Copyright 2026 The mmimo Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mmimo/config_io.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mmimo/units.hpp"

namespace mmimo {
namespace {

const std::set<std::string> kKnownKeys = {
    "num_bs",          "antennas_per_bs",    "num_users",
    "coherence_length", "pilot_length",      "dl_fraction",
    "square_side",     "coverage_side",      "min_bs_user_distance",
    "shadow_std_db",   "pathloss_intercept_db", "pathloss_slope",
    "pilot_policy",    "pilot_power",        "ul_noise",
    "dl_noise",        "amp_efficiency",     "max_power"};

double parse_power(const YAML::Node& node, const std::string& key) {
  const std::string text = node.as<std::string>();
  std::istringstream in(text);
  double value = 0.0;
  if (!(in >> value)) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  std::string unit;
  in >> unit;
  if (unit.empty() || unit == "W") return value;
  if (unit == "dBm") return dbm_to_watt(value);
  if (unit == "mW") return value * 1e-3;
  throw ConfigError("config key '" + key + "': unknown unit '" + unit + "'");
}

std::vector<double> parse_power_list(const YAML::Node& node,
                                     const std::string& key, int count) {
  std::vector<double> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(parse_power(item, key));
    if (static_cast<int>(out.size()) != count) {
      throw ConfigError("config key '" + key + "' needs " +
                        std::to_string(count) + " entries");
    }
  } else {
    out.assign(count, parse_power(node, key));
  }
  return out;
}

template <typename T>
T get(const YAML::Node& root, const std::string& key, T fallback) {
  if (!root[key]) return fallback;
  try {
    return root[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

}  // namespace

NetworkConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("config must be a key-value mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  const int L = get<int>(root, "num_bs", 4);
  const int M = get<int>(root, "antennas_per_bs", 200);
  const int K = get<int>(root, "num_users", 20);
  if (L < 1 || K < 1) throw ConfigError("num_bs and num_users must be >= 1");
  NetworkConfig c = NetworkConfig::defaults(L, M, K);

  c.coherence_length = get<int>(root, "coherence_length", c.coherence_length);
  c.pilot_length = get<int>(root, "pilot_length", c.pilot_length);
  c.dl_fraction = get<double>(root, "dl_fraction", c.dl_fraction);
  c.square_side = get<double>(root, "square_side", c.square_side);
  c.coverage_side = get<double>(root, "coverage_side", c.coverage_side);
  c.min_bs_user_distance =
      get<double>(root, "min_bs_user_distance", c.min_bs_user_distance);
  c.shadow_std_db = get<double>(root, "shadow_std_db", c.shadow_std_db);
  c.pathloss_intercept_db =
      get<double>(root, "pathloss_intercept_db", c.pathloss_intercept_db);
  c.pathloss_slope = get<double>(root, "pathloss_slope", c.pathloss_slope);
  if (root["pilot_policy"]) {
    c.pilot_policy = pilot_policy_from_string(root["pilot_policy"].as<std::string>());
  }
  if (root["pilot_power"]) c.pilot_power = parse_power_list(root["pilot_power"], "pilot_power", K);
  if (root["ul_noise"]) c.ul_noise = parse_power(root["ul_noise"], "ul_noise");
  if (root["dl_noise"]) c.dl_noise = parse_power(root["dl_noise"], "dl_noise");
  if (root["amp_efficiency"]) {
    c.amp_efficiency.clear();
    const auto& node = root["amp_efficiency"];
    if (node.IsSequence()) {
      for (const auto& v : node) c.amp_efficiency.push_back(v.as<double>());
    } else {
      c.amp_efficiency.assign(L, node.as<double>());
    }
  }
  if (root["max_power"]) c.max_power = parse_power_list(root["max_power"], "max_power", L);

  c.validate();
  return c;
}

NetworkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const NetworkConfig& c) {
  std::ostringstream out;
  out << std::setprecision(17);
  auto list = [&out](const std::vector<double>& v) {
    out << "[";
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
    out << "]";
  };
  out << "num_bs: " << c.num_bs << "                # L\n"
      << "antennas_per_bs: " << c.antennas_per_bs << "      # M\n"
      << "num_users: " << c.num_users << "            # K\n"
      << "coherence_length: " << c.coherence_length << "    # symbols\n"
      << "pilot_length: " << c.pilot_length << "         # symbols\n"
      << "dl_fraction: " << c.dl_fraction << "           # in (0, 1]\n"
      << "square_side: " << c.square_side << "           # km, BS square\n"
      << "coverage_side: " << c.coverage_side << "         # km, user drop square\n"
      << "min_bs_user_distance: " << c.min_bs_user_distance << "  # km\n"
      << "shadow_std_db: " << c.shadow_std_db << "         # dB\n"
      << "pathloss_intercept_db: " << c.pathloss_intercept_db << "  # dB at 1 km\n"
      << "pathloss_slope: " << c.pathloss_slope << "        # dB per decade\n"
      << "pilot_policy: " << to_string(c.pilot_policy) << "\n"
      << "pilot_power: ";
  list(c.pilot_power);
  out << "  # W per user\n"
      << "ul_noise: " << c.ul_noise << "  # W\n"
      << "dl_noise: " << c.dl_noise << "  # W\n"
      << "amp_efficiency: ";
  list(c.amp_efficiency);
  out << "  # per BS\nmax_power: ";
  list(c.max_power);
  out << "  # W per BS\n";
  return out.str();
}

}  // namespace mmimo
