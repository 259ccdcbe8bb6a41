#include "gbench/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "toml.hpp"

namespace gbench::cli {

namespace {

nlohmann::json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (const auto* a = node.as_array()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (const auto* s = node.as_string()) return s->get();
  if (const auto* i = node.as_integer()) return i->get();
  if (const auto* f = node.as_floating_point()) {
    const double v = f->get();
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  }
  if (const auto* b = node.as_boolean()) return b->get();
  throw ConfigError("unsupported TOML value type (dates and times are not accepted)");
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (ends_with(path, ".toml")) {
    try {
      return toml_to_json(toml::parse(buf.str(), path));
    } catch (const toml::parse_error& e) {
      throw ConfigError(std::string("TOML parse error: ") + std::string(e.description()));
    }
  }
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
}

nlohmann::json command_section(const nlohmann::json& file_config, const std::string& command) {
  if (!file_config.is_object()) throw ConfigError("config file must contain a table/object");
  if (file_config.contains(command)) {
    const auto& sec = file_config.at(command);
    if (!sec.is_object()) throw ConfigError("config section [" + command + "] must be a table");
    return sec;
  }
  nlohmann::json flat = nlohmann::json::object();
  for (const auto& [k, v] : file_config.items()) {
    if (!v.is_object()) flat[k] = v;
  }
  return flat;
}

std::string config_hash(const nlohmann::json& config) {
  const std::string canon = config.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t resolve_seed(const nlohmann::json& config) {
  if (config.contains("seed")) {
    const auto& s = config.at("seed");
    if (s.is_number_unsigned() || s.is_number_integer()) return s.get<std::uint64_t>();
    throw ConfigError("seed must be a non-negative integer");
  }
  if (const char* env = std::getenv("GB_SEED"); env != nullptr && *env != '\0') {
    std::uint64_t v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec != std::errc() || ptr != end) throw ConfigError("GB_SEED must be a non-negative integer");
    return v;
  }
  return kDefaultSeed;
}

double parse_number(const std::string& text) {
  if (text == "inf" || text == "+inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) throw ConfigError("empty entry in number list '" + text + "'");
    out.push_back(parse_number(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace gbench::cli
