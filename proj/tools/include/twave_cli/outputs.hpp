#pragma once

#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace twave::cli {

inline constexpr const char* kCodeVersion = "0.1.0";
inline constexpr const char* kOutputRootEnv = "TWAVE_OUTPUT_ROOT";

/// $TWAVE_OUTPUT_ROOT, or ./twave-runs when unset.
std::filesystem::path output_root();

std::string utc_timestamp();

/// One run directory and its manifest. Artifacts are registered as they are created and the
/// manifest is written by finish().
class RunDirectory {
 public:
  /// Creates root/run_id. Without a run_id, one is derived from the command and the clock and
  /// suffixed until unused. An explicit run_id that already exists throws SchemaError.
  RunDirectory(const std::filesystem::path& root, const std::string& command, const std::string& run_id = "");

  const std::filesystem::path& path() const { return path_; }
  const std::string& run_id() const { return run_id_; }

  /// Full path of a new artifact, recorded in the manifest.
  std::filesystem::path artifact(const std::string& name);

  void set_config(const nlohmann::json& config, std::uint64_t seed);
  void set_status(const std::string& status) { status_ = status; }
  void finish();

 private:
  std::filesystem::path path_;
  std::string run_id_, command_, started_, status_ = "ok";
  nlohmann::json config_ = nlohmann::json::object();
  std::uint64_t seed_ = 0;
  std::vector<std::string> artifacts_;
};

/// Comma-separated rows with round-trip precision.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);

 private:
  std::FILE* f_ = nullptr;
  std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace twave::cli
