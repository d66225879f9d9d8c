// Run manifest: resolved config, RNG identity, per-phase wall time and I/O
// counters, memory peaks, output checksums. Written atomically; sufficient
// to reproduce the run bit-exactly.
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace emg {

struct RunManifest {
  std::map<std::string, std::string> kv;

  void set(const std::string& key, const std::string& value) { kv[key] = value; }
  void set(const std::string& key, std::uint64_t value) { kv[key] = std::to_string(value); }
  void set(const std::string& key, double value);
  const std::string* get(const std::string& key) const {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  }
  std::uint64_t get_u64(const std::string& key) const;

  void save_atomic(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);
};

std::uint64_t fnv1a64_file(const std::filesystem::path& path);

}  // namespace emg
