#include "gbench/cli.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace gbench::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", v);
}

void write_csv_header(std::ostream& out, const std::string& command, const nlohmann::json& config,
                      std::uint64_t seed) {
  out << "# " << kToolVersion << '\n';
  out << "# command: " << command << '\n';
  out << "# config_hash: " << config_hash(config) << '\n';
  out << "# seed: " << seed << '\n';
}

}  // namespace gbench::cli
