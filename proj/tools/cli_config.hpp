// Copyright 2026 The rbmscope Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RBMSCOPE_TOOLS_CLI_CONFIG_HPP
#define RBMSCOPE_TOOLS_CLI_CONFIG_HPP

#include <CLI11.hpp>
#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "rbmscope/data.hpp"

namespace rbmscope::cli {

/// Binds CLI11 options to config-file keys with flag-over-file precedence:
/// a value comes from the command line when given, else from the config
/// file, else from the built-in default. Also renders the resolved values
/// into the run manifest.
class FieldSet {
 public:
  using Target = std::variant<int*, double*, std::string*, bool*, std::uint64_t*>;

  void bind(CLI::Option* opt, std::string key, Target target, bool required = false);

  /// Applies config values for options not set on the command line, then
  /// checks required fields. Throws ParseError naming the offending field.
  void resolve(const nlohmann::json& config);

  nlohmann::ordered_json manifest_config() const;

 private:
  struct Field {
    CLI::Option* opt;
    std::string key;
    Target target;
    bool required;
    bool present = false;
  };
  std::vector<Field> fields_;
};

/// Reads a JSON config file; a whitespace-only file yields an empty object
/// and a manifest envelope is unwrapped to its "config" member.
nlohmann::json load_config_file(const std::string& path);

/// Writes <out>/manifest.json with the artifact version, command, seed and
/// every resolved config value.
void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    std::uint64_t seed, const nlohmann::ordered_json& config);

/// Dataset selector string:
///   bars-stripes:<side>:<n_items>:<seed>
///   idx:<images path>[:<threshold>]
BinaryDataset load_data_spec(const std::string& spec);

/// Expands a path pattern whose components may contain '*', sorted
/// lexicographically.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rbmscope::cli

#endif  // RBMSCOPE_TOOLS_CLI_CONFIG_HPP
