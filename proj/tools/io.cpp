#include "io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace grenlab::cli {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto dir = path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write failed for " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::vector<double> read_sample(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<double> out;
  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": not a number: '" +
                        std::string(begin, end) + "'");
    }
    out.push_back(value);
  }
  return out;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

nlohmann::json manifest_json(const Manifest& manifest) {
  auto hashed = [](const std::vector<std::filesystem::path>& paths) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& p : paths) list.push_back({{"path", p.string()}, {"fnv1a64", fnv1a64_hex(read_file(p))}});
    return list;
  };
  return {{"subcommand", manifest.subcommand},
          {"artifact_version", kArtifactVersion},
          {"argv", manifest.argv},
          {"config", manifest.config},
          {"seed", manifest.seed},
          {"inputs", hashed(manifest.inputs)},
          {"outputs", hashed(manifest.outputs)}};
}

void write_manifest(const Manifest& manifest) {
  if (manifest.outputs.empty()) return;
  write_atomic(manifest_path_for(manifest.outputs.front()), manifest_json(manifest).dump(2) + "\n");
}

}  // namespace grenlab::cli
