#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stairgait/model.hpp"

namespace stairgait {

struct Violation {
    std::string field;    // dotted path, e.g. "robot.l1"
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool mentions(std::string_view field) const;
    std::string to_string() const;
};

ValidationReport validate(const SimConfig& config);

/// Throws ConfigError naming the first violation.
void require_valid(const SimConfig& config);

/// Parse a JSON configuration document. Absent fields keep their defaults;
/// an empty document yields the default robot and timing. Throws ConfigError
/// on syntax errors, unknown keys, wrongly typed values and failed validation.
SimConfig load_config(std::string_view text);
SimConfig load_config_file(const std::filesystem::path& path);

/// Inverse of load_config for any valid configuration.
std::string serialize_config(const SimConfig& config);

/// FNV-1a over the serialized document, as 16 hex digits.
std::string config_hash(const SimConfig& config);

}  // namespace stairgait
