#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cgeem::cli {

struct Manifest {
  std::string command;
  nlohmann::json flags = nlohmann::json::object();
  std::vector<std::string> configs;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;  // file names relative to the output directory

  /// Writes manifest.json into `dir`. The timestamp is SOURCE_DATE_EPOCH when
  /// set, otherwise the current UTC time.
  void write(const std::filesystem::path& dir) const;
};

std::string utc_timestamp();

}  // namespace cgeem::cli
