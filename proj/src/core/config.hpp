#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pwe {

// Flat INI-style experiment configuration: [section] headers, key = value
// lines, '#' comments. Order is preserved so that write/read round-trips.
struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
  bool operator==(const ConfigSection& other) const {
    return name == other.name && entries == other.entries;
  }
};

struct ConfigDoc {
  std::vector<ConfigSection> sections;

  const ConfigSection* find(const std::string& name) const;
  const std::string* find(const std::string& section, const std::string& key) const;
  void set(const std::string& section, const std::string& key, const std::string& value);
  bool operator==(const ConfigDoc& other) const { return sections == other.sections; }
};

ConfigDoc read_config_text(const std::string& text);
ConfigDoc read_config_file(const std::string& path);
std::string write_config_text(const ConfigDoc& doc);

}  // namespace pwe
