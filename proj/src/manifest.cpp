#include "bmb/manifest.hpp"

#include <Eigen/Core>
#include <boost/version.hpp>

namespace bmb {

namespace {

bool same_times(const PhaseTimes& a, const PhaseTimes& b) {
  return a.scales == b.scales && a.w12 == b.w12 && a.w11 == b.w11 && a.total == b.total;
}

}  // namespace

bool RunManifest::operator==(const RunManifest& o) const {
  if (command != o.command || config != o.config || seed != o.seed || versions != o.versions ||
      mh_corrected != o.mh_corrected || sweeps != o.sweeps || wall_time.has_value() != o.wall_time.has_value()) {
    return false;
  }
  if (wall_time) {
    if (wall_time->size() != o.wall_time->size()) return false;
    for (std::size_t i = 0; i < wall_time->size(); ++i) {
      if (!same_times((*wall_time)[i], (*o.wall_time)[i])) return false;
    }
  }
  return true;
}

std::map<std::string, std::string> build_versions() {
  std::map<std::string, std::string> v;
  v["bmb"] = kVersion;
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["boost"] = std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) +
               "." + std::to_string(BOOST_VERSION % 100);
#if defined(__clang__)
  v["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  v["compiler"] = "gcc " + std::to_string(__GNUC__) + "." + std::to_string(__GNUC_MINOR__) + "." +
                  std::to_string(__GNUC_PATCHLEVEL__);
#else
  v["compiler"] = "unknown";
#endif
  return v;
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["config"] = m.config;
  j["versions"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.versions) j["versions"][k] = v;
  j["mh_corrected"] = m.mh_corrected;
  j["sweeps"] = m.sweeps;
  if (m.wall_time) {
    j["wall_time"] = nlohmann::ordered_json::array();
    for (const auto& t : *m.wall_time) {
      j["wall_time"].push_back({{"scales", t.scales}, {"w12", t.w12}, {"w11", t.w11}, {"total", t.total}});
    }
  }
  return j;
}

RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  try {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config = j.at("config");
    for (const auto& [k, v] : j.at("versions").items()) m.versions[k] = v.get<std::string>();
    m.mh_corrected = j.at("mh_corrected").get<std::vector<long>>();
    m.sweeps = j.at("sweeps").get<std::vector<long>>();
    if (j.contains("wall_time")) {
      std::vector<PhaseTimes> times;
      for (const auto& t : j.at("wall_time")) {
        times.push_back(PhaseTimes{t.at("scales").get<double>(), t.at("w12").get<double>(),
                                   t.at("w11").get<double>(), t.at("total").get<double>()});
      }
      m.wall_time = std::move(times);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed manifest: ") + e.what());
  }
}

}  // namespace bmb
