#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "twave/nonlinear.hpp"

namespace twave::cli {

inline constexpr int kSchemaVersion = 1;

/// Config file does not match the schema (unknown key, wrong type, invalid value).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const SimConfig& c);

/// Strict: unknown keys and type mismatches throw SchemaError. Missing keys keep their defaults.
SimConfig sim_config_from_json(const nlohmann::json& j);
SimConfig load_sim_config(const std::string& path);

std::string to_string(DataFamily f);
std::string to_string(DataNormalization n);

}  // namespace twave::cli
