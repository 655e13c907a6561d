#pragma once

// Scenario-driven runs: schema-checked JSON in, reports plus a checksummed
// manifest out.
//
// Exit codes: 0 success, 2 schema violation, 3 numerical failure,
// 4 failed check.

#include "dshock/common.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dshock::cli {

constexpr int kExitOk = 0;
constexpr int kExitSchema = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheckFailed = 4;

int exit_code_for(Errc code);

struct RunOptions {
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;  // overrides the scenario seed
  bool strict = false;                // informational checks become required checks
  std::string expect_kind;            // subcommand restriction; empty accepts any kind
  // Extra copy of the primary artifact (trajectory / oracle CSV or report) under this file name.
  std::string primary_alias;
};

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> failures;
  std::vector<std::string> files;  // relative to the output directory
  nlohmann::json report;
};

// Reads and parses a scenario file (parse errors throw Errc::schema).
nlohmann::json load_json(const std::filesystem::path& path);

// Validates the whole scenario, then computes. Errors propagate as dshock::Error.
RunResult run(const nlohmann::json& scenario, const RunOptions& opts,
              const std::filesystem::path& base_dir = std::filesystem::path("."));

// run() on a file with every error mapped to its exit code; an error report is
// written to the output directory when it can be created.
RunResult run_file(const std::filesystem::path& scenario, const RunOptions& opts);

// ---------------------------------------------------------------- output

// 17 significant digits, scientific.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  const std::vector<std::string>& header() const { return header_; }
  void write(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

// manifest.json listing `files` (relative to dir) with sizes and SHA-256.
void write_manifest(const std::filesystem::path& dir, const std::vector<std::string>& files,
                    const nlohmann::json& meta);

}  // namespace dshock::cli
