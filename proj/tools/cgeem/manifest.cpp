#include "manifest.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include "cgeem/serialization.hpp"

#ifndef CGEEM_VERSION
#define CGEEM_VERSION "0.0.0"
#endif

namespace cgeem::cli {

std::string utc_timestamp() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void Manifest::write(const std::filesystem::path& dir) const {
  nlohmann::json j = {
      {"command", command},
      {"tool_version", CGEEM_VERSION},
      {"timestamp", utc_timestamp()},
      {"flags", flags},
      {"configs", configs},
      {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)},
      {"inputs", inputs},
      {"outputs", outputs},
  };
  io::write_json(dir / "manifest.json", j);
}

}  // namespace cgeem::cli
