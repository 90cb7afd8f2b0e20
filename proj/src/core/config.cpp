#include "core/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "core/common.hpp"

namespace pwe {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      return false;
  return true;
}

}  // namespace

const std::string* ConfigSection::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

const ConfigSection* ConfigDoc::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const std::string* ConfigDoc::find(const std::string& section, const std::string& key) const {
  const ConfigSection* s = find(section);
  return s ? s->find(key) : nullptr;
}

void ConfigDoc::set(const std::string& section, const std::string& key,
                    const std::string& value) {
  for (auto& s : sections) {
    if (s.name != section) continue;
    for (auto& [k, v] : s.entries) {
      if (k == key) {
        v = value;
        return;
      }
    }
    s.entries.emplace_back(key, value);
    return;
  }
  sections.push_back({section, {{key, value}}});
}

ConfigDoc read_config_text(const std::string& text) {
  ConfigDoc doc;
  ConfigSection* cur = nullptr;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name))
        throw ConfigError("config line " + std::to_string(lineno) + ": bad section name");
      if (doc.find(name))
        throw ConfigError("config line " + std::to_string(lineno) + ": duplicate section [" +
                          name + "]");
      doc.sections.push_back({name, {}});
      cur = &doc.sections.back();
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key))
      throw ConfigError("config line " + std::to_string(lineno) + ": bad key");
    if (!cur) {
      doc.sections.push_back({"", {}});
      cur = &doc.sections.back();
    }
    if (cur->find(key))
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                        "'");
    cur->entries.emplace_back(key, value);
  }
  return doc;
}

ConfigDoc read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_config_text(buf.str());
}

std::string write_config_text(const ConfigDoc& doc) {
  std::ostringstream out;
  bool first = true;
  for (const auto& s : doc.sections) {
    if (!first) out << "\n";
    first = false;
    if (!s.name.empty()) out << "[" << s.name << "]\n";
    for (const auto& [k, v] : s.entries) out << k << " = " << v << "\n";
  }
  return out.str();
}

}  // namespace pwe
