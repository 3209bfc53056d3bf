#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bmb/sampler.hpp"

namespace bmb {

inline constexpr const char* kVersion = "1.0.0";

// Record of one CLI run. Wall times are optional so that a manifest can be a
// deterministic function of the inputs.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> versions;
  std::vector<long> mh_corrected;  // per chain
  std::vector<long> sweeps;        // per chain
  std::optional<std::vector<PhaseTimes>> wall_time;

  bool operator==(const RunManifest& other) const;
};

std::map<std::string, std::string> build_versions();

nlohmann::ordered_json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::ordered_json& j);

}  // namespace bmb
