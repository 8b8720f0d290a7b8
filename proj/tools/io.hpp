#pragma once

// File plumbing for the command-line tool: atomic writes, content hashes,
// sample input and run manifests.

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace grenlab::cli {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Bad flags, unreadable inputs or inputs that fail validation (exit 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

// Writes to a temporary file in the target directory, then renames it over
// `path`, so the final path only ever holds complete content.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// Newline-separated decimal floats; blank lines are skipped.
std::vector<double> read_sample(const std::filesystem::path& path);

std::filesystem::path manifest_path_for(const std::filesystem::path& output);

struct Manifest {
  std::string subcommand;
  std::vector<std::string> argv;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
};

// Hashes every input and output as it is on disk and writes the manifest
// atomically next to the first output.
nlohmann::json manifest_json(const Manifest& manifest);
void write_manifest(const Manifest& manifest);

}  // namespace grenlab::cli
