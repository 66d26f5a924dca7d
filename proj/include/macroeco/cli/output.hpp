#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace macroeco::cli {

/// Bad invocation: unknown flag, missing input, refused overwrite. Exit 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::ordered_json;

struct Manifest {
  std::string command;
  std::vector<std::string> inputs;
  Json parameters = Json::object();
  std::uint64_t seed = 0;
  std::optional<double> wall_clock_seconds;
};

/// Files produced by one command, held in memory until written together.
class OutputSet {
 public:
  std::ostringstream& file(const std::string& name) { return files_[name]; }

  void json(const std::string& name, const Json& value) { files_[name] << value.dump(2) << '\n'; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : files_) out.push_back(name);
    return out;
  }

  /// Writes every file plus manifest.json into `dir`. Without `force`, any
  /// existing target aborts before anything is written.
  void write(const std::filesystem::path& dir, const Manifest& manifest, bool force) const {
    auto names = this->names();
    names.push_back("manifest.json");
    if (!force) {
      for (const auto& n : names) {
        if (std::filesystem::exists(dir / n)) {
          throw UsageError("refusing to overwrite " + (dir / n).string() + " (use --force)");
        }
      }
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
    for (const auto& [name, content] : files_) put(dir / name, content.str());
    Json m;
    m["command"] = manifest.command;
    m["inputs"] = manifest.inputs;
    m["parameters"] = manifest.parameters;
    m["seed"] = manifest.seed;
    m["tool_version"] = MACROECO_VERSION;
    m["outputs"] = names;
    if (manifest.wall_clock_seconds) m["wall_clock_seconds"] = *manifest.wall_clock_seconds;
    put(dir / "manifest.json", m.dump(2) + "\n");
  }

 private:
  static void put(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
    if (!out) throw UsageError("failed writing " + path.string());
  }

  std::map<std::string, std::ostringstream> files_;
};

}  // namespace macroeco::cli
