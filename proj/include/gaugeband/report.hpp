#ifndef GAUGEBAND_REPORT_HPP_
#define GAUGEBAND_REPORT_HPP_

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gaugeband/error.hpp"

namespace gaugeband {

inline constexpr const char* kVersion = "1.0.0";

//! 64-bit FNV-1a, as 16 hex digits.
inline std::string Fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

//! Writes via a sibling temp file and rename.
inline void WriteAtomically(const std::filesystem::path& path,
                            const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline nlohmann::json Versions() {
  nlohmann::json v{{"gaugeband", kVersion}};
  for (const char* m : {"lattice", "potential", "gauge", "bloch", "agmon", "wkb", "tunneling", "harness"})
    v["modules"][m] = kVersion;
  return v;
}

struct Check {
  std::string name;
  bool passed = false;
  nlohmann::json detail;
};

//! Per-experiment report. `timing` is excluded from the content hash.
class Report {
 public:
  Report(std::string experiment, nlohmann::json config)
      : experiment_(std::move(experiment)), config_(std::move(config)) {}

  nlohmann::json& results() { return results_; }
  const nlohmann::json& results() const { return results_; }
  const std::vector<Check>& checks() const { return checks_; }

  void AddCheck(const std::string& name, bool passed, nlohmann::json detail = {}) {
    checks_.push_back({name, passed, std::move(detail)});
  }
  void Warn(const std::string& msg) { warnings_.push_back(msg); }
  void Fail(const std::string& msg) { error_ = msg; }
  void SetWallClock(double seconds) { wall_clock_ = seconds; }

  bool errored() const { return !error_.empty(); }
  bool AllPassed() const {
    if (errored()) return false;
    for (const Check& c : checks_)
      if (!c.passed) return false;
    return true;
  }
  std::string Status() const {
    if (errored()) return "failed";
    return AllPassed() ? "passed" : "thresholds_failed";
  }

  nlohmann::json Content() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const Check& c : checks_) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    nlohmann::json j{{"experiment", experiment_},
                     {"status", Status()},
                     {"config", config_},
                     {"config_hash", Fnv1a(config_.dump())},
                     {"versions", Versions()},
                     {"results", results_},
                     {"checks", checks},
                     {"warnings", warnings_}};
    if (errored()) j["error"] = error_;
    return j;
  }

  nlohmann::json ToJson() const {
    nlohmann::json j = Content();
    j["content_hash"] = Fnv1a(Content().dump());
    j["timing"] = {{"wall_clock_s", wall_clock_}};
    return j;
  }

  void Write(const std::filesystem::path& path) const {
    const std::string text = ToJson().dump(2) + "\n";
    WriteAtomically(path, [&](std::ostream& os) { os << text; });
  }

 private:
  std::string experiment_;
  nlohmann::json config_;
  nlohmann::json results_ = nlohmann::json::object();
  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
  std::string error_;
  double wall_clock_ = 0.0;
};

}  // namespace gaugeband

#endif  // GAUGEBAND_REPORT_HPP_
