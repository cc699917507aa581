#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "config.hpp"
#include "ergotor/errors.hpp"
#include "report.hpp"

namespace ergotor::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the configured experiment. Library errors propagate.
Report execute(const ExperimentConfig& config);

/// One-line JSON object {"error": {"kind", "message", ...}}.
std::string error_json(const Error& error);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
};

/// `ergotor run`: validates, executes and writes the report files.
int run_command(const std::filesystem::path& config_path, const RunOptions& options,
                std::ostream& out, std::ostream& err);

/// `ergotor validate`: prints "valid" or one line per violation.
int validate_command(const std::filesystem::path& config_path, std::ostream& out,
                     std::ostream& err);

/// Argument parsing and dispatch for the ergotor executable.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ergotor::cli
