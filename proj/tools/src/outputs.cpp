#include "twave_cli/outputs.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "twave_cli/config_io.hpp"

namespace twave::cli {

namespace fs = std::filesystem;

fs::path output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  return env && *env ? fs::path(env) : fs::path("twave-runs");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunDirectory::RunDirectory(const fs::path& root, const std::string& command, const std::string& run_id)
    : command_(command), started_(utc_timestamp()) {
  fs::create_directories(root);
  if (!run_id.empty()) {
    if (run_id.find('/') != std::string::npos || run_id == "." || run_id == "..")
      throw SchemaError("run id must be a plain directory name");
    run_id_ = run_id;
    path_ = root / run_id_;
    if (!fs::create_directory(path_)) throw SchemaError("run directory already exists: " + path_.string());
    return;
  }
  std::string stamp = started_;
  for (char& ch : stamp)
    if (ch == ':') ch = '-';
  for (int n = 0;; ++n) {
    run_id_ = command + "-" + stamp + (n ? "-" + std::to_string(n) : "");
    path_ = root / run_id_;
    if (fs::create_directory(path_)) return;
  }
}

fs::path RunDirectory::artifact(const std::string& name) {
  artifacts_.push_back(name);
  return path_ / name;
}

void RunDirectory::set_config(const nlohmann::json& config, std::uint64_t seed) {
  config_ = config;
  seed_ = seed;
}

void RunDirectory::finish() {
  const nlohmann::json m = {
      {"schema_version", kSchemaVersion},
      {"run_id", run_id_},
      {"command", command_},
      {"config", config_},
      {"code_version", kCodeVersion},
      {"seed", seed_},
      {"started", started_},
      {"finished", utc_timestamp()},
      {"status", status_},
      {"artifacts", artifacts_},
  };
  write_json(path_ / "manifest.json", m);
}

CsvWriter::CsvWriter(const fs::path& path, const std::vector<std::string>& header) : columns_(header.size()) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) throw fs::filesystem_error("cannot open for writing", path, std::make_error_code(std::errc::io_error));
  for (std::size_t i = 0; i < header.size(); ++i) std::fprintf(f_, "%s%s", i ? "," : "", header[i].c_str());
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("csv row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) std::fprintf(f_, "%s%.17g", i ? "," : "", values[i]);
  std::fputc('\n', f_);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw fs::filesystem_error("cannot open for writing", path, std::make_error_code(std::errc::io_error));
  os << j.dump(2) << '\n';
}

}  // namespace twave::cli
