#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace cubeshadow {

inline constexpr const char* kVersion = "0.1.0";

/// One CLI invocation, serialized as a single JSON object with the keys
/// command, params, results, elapsed_ms, version, seed.
struct RunRecord {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::int64_t elapsed_ms = 0;
  std::string version = kVersion;
  std::optional<std::uint64_t> seed;

  bool operator==(const RunRecord&) const = default;
};

inline void to_json(nlohmann::json& j, const RunRecord& r) {
  j = nlohmann::json{{"command", r.command},       {"params", r.params},   {"results", r.results},
                     {"elapsed_ms", r.elapsed_ms}, {"version", r.version}, {"seed", nullptr}};
  if (r.seed) j["seed"] = *r.seed;
}

inline void from_json(const nlohmann::json& j, RunRecord& r) {
  j.at("command").get_to(r.command);
  r.params = j.at("params");
  r.results = j.at("results");
  j.at("elapsed_ms").get_to(r.elapsed_ms);
  j.at("version").get_to(r.version);
  const auto& s = j.at("seed");
  r.seed = s.is_null() ? std::nullopt : std::optional<std::uint64_t>(s.get<std::uint64_t>());
}

}  // namespace cubeshadow
