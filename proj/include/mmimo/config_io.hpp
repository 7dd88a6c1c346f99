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

#ifndef MMIMO_CONFIG_IO_HPP_
#define MMIMO_CONFIG_IO_HPP_

#include <string>

#include "mmimo/system_model.hpp"

namespace mmimo {

// NetworkConfig files are YAML mappings whose keys are the NetworkConfig
// field names. Missing keys fall back to NetworkConfig::defaults() for the
// given num_bs / antennas_per_bs / num_users. Per-user and per-BS fields
// accept a scalar (broadcast) or a list. Power-valued fields accept a plain
// number in W or a string with a "dBm" suffix, e.g. "-96 dBm".

NetworkConfig parse_config(const std::string& yaml_text);
NetworkConfig load_config(const std::string& path);

/// Annotated YAML that parse_config() reads back to an equal config.
std::string format_config(const NetworkConfig& config);

}  // namespace mmimo

#endif  // MMIMO_CONFIG_IO_HPP_
