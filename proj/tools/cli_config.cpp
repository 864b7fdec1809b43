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

#include "cli_config.hpp"

#include <fstream>
#include <sstream>

#include "rbmscope/errors.hpp"
#include "rbmscope/version.hpp"

namespace rbmscope::cli {

namespace {

template <typename T>
T config_number(const nlohmann::json& value, const std::string& key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!value.is_boolean()) throw ParseError("config field '" + key + "' must be a boolean");
    return value.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!value.is_string()) throw ParseError("config field '" + key + "' must be a string");
    return value.get<std::string>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!value.is_number()) throw ParseError("config field '" + key + "' must be a number");
    return value.get<double>();
  } else {
    if (!value.is_number_integer() && !value.is_number_unsigned()) {
      throw ParseError("config field '" + key + "' must be an integer");
    }
    return value.get<T>();
  }
}

}  // namespace

void FieldSet::bind(CLI::Option* opt, std::string key, Target target, bool required) {
  fields_.push_back(Field{opt, std::move(key), target, required});
}

void FieldSet::resolve(const nlohmann::json& config) {
  for (auto& field : fields_) {
    const bool on_cli = field.opt != nullptr && field.opt->count() > 0;
    const bool in_config = config.contains(field.key);
    if (!on_cli && in_config) {
      const nlohmann::json& value = config.at(field.key);
      std::visit(
          [&](auto* target) {
            using T = std::remove_pointer_t<decltype(target)>;
            *target = config_number<T>(value, field.key);
          },
          field.target);
    }
    field.present = on_cli || in_config;
    if (field.required && !field.present) {
      throw ParseError("missing required option --" + field.key);
    }
  }
}

nlohmann::ordered_json FieldSet::manifest_config() const {
  nlohmann::ordered_json out;
  for (const auto& field : fields_) {
    std::visit([&](auto* target) { out[field.key] = *target; }, field.target);
  }
  return out;
}

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return nlohmann::json::object();
  }
  nlohmann::json parsed = nlohmann::json::parse(text, nullptr, false);
  if (parsed.is_discarded()) throw ParseError("config file is not valid JSON: " + path);
  if (!parsed.is_object()) throw ParseError("config file must hold a JSON object: " + path);
  if (parsed.contains("config") && parsed["config"].is_object()) {
    return parsed["config"];  // manifest envelope
  }
  return parsed;
}

void write_manifest(const std::filesystem::path& out_dir, const std::string& command,
                    std::uint64_t seed, const nlohmann::ordered_json& config) {
  nlohmann::ordered_json manifest;
  manifest["artifact_version"] = kVersion;
  manifest["command"] = command;
  manifest["seed"] = seed;
  manifest["config"] = config;
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

BinaryDataset load_data_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.empty()) throw ParseError("empty data spec");

  if (parts[0] == "bars-stripes") {
    if (parts.size() != 4) {
      throw ParseError("data spec must be bars-stripes:<side>:<n_items>:<seed>");
    }
    return synthetic_bars_stripes(std::stoul(parts[1]), std::stoul(parts[2]),
                                  std::stoull(parts[3]));
  }
  if (parts[0] == "idx") {
    if (parts.size() < 2 || parts.size() > 3) {
      throw ParseError("data spec must be idx:<path>[:<threshold>]");
    }
    const int threshold = parts.size() == 3 ? std::stoi(parts[2]) : 127;
    return binarize(load_idx(parts[1]), threshold);
  }
  throw ParseError("unknown data spec kind: " + parts[0]);
}

namespace {

bool wildcard_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

}  // namespace

std::vector<std::filesystem::path> expand_glob(const std::string& pattern) {
  const std::filesystem::path full(pattern);
  if (pattern.find('*') == std::string::npos) {
    if (!std::filesystem::exists(full)) throw Error("no such file: " + pattern);
    return {full};
  }
  const std::filesystem::path dir =
      full.parent_path().empty() ? std::filesystem::path(".") : full.parent_path();
  const std::string name_pattern = full.filename().string();
  if (dir.string().find('*') != std::string::npos) {
    throw ParseError("wildcards are only supported in the filename component");
  }
  std::vector<std::filesystem::path> matches;
  if (std::filesystem::exists(dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (wildcard_match(name_pattern, entry.path().filename().string())) {
        matches.push_back(entry.path());
      }
    }
  }
  std::sort(matches.begin(), matches.end());
  if (matches.empty()) throw Error("glob matched no files: " + pattern);
  return matches;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path.string());
  out << text;
}

}  // namespace rbmscope::cli
