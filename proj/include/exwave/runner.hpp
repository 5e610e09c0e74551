#pragma once

// Experiment runner behind the exterior-wave CLI: JSON config in, CSV tables and
// a JSON manifest out.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace exwave::runner {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTruncation = 3;

/// Malformed JSON, unknown keys, or out-of-range values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Cell = std::variant<long long, double, std::string>;

struct Table {
    std::string name;  ///< file stem; written as <name>.csv
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
    /// Header plus rows; doubles with 17 significant digits.
    std::string to_csv() const;
};

const std::vector<std::string>& subcommands();

struct RunOptions {
    std::string subcommand;
    std::filesystem::path config_path;
    std::optional<std::filesystem::path> output_dir;
    std::optional<int> threads;
};

struct RunResult {
    std::vector<Table> tables;
    std::string manifest;  ///< JSON text
    bool passed = true;    ///< selftest verdict; true for other subcommands
    std::vector<std::string> warnings;
};

/// Parses and runs without touching the filesystem beyond reading the config.
/// Throws ConfigError, exwave::TruncationError, or other exceptions for runtime failures.
RunResult execute(const std::string& subcommand, const std::string& config_text, std::optional<int> threads);

/// execute() plus file output; returns the process exit code and reports failures on `err`.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace exwave::runner
