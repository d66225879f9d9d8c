// Shared test helpers.
#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "emgraph/config.hpp"
#include "emgraph/core.hpp"

namespace emg::test {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<std::uint64_t> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("emgraph-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

inline ClusterConfig small_config(const TempDir& dir, std::uint32_t scale = 10,
                                  std::uint32_t nb = 2, std::uint32_t nc = 2,
                                  std::uint64_t seed = 7) {
  ClusterConfig cfg;
  cfg.scale = scale;
  cfg.nb = nb;
  cfg.nc = nc;
  cfg.seed = seed;
  cfg.edge_factor = 16;
  cfg.block_edges = 256;        // 4 KiB blocks keep unit tests small
  cfg.mem_per_core = 64 << 10;  // 64 KiB
  cfg.packet_bytes = 4 << 10;
  cfg.workdir = dir.str();
  cfg.watchdog_ms = 20000;
  return cfg;
}

inline std::vector<Edge> random_edges(std::size_t n, std::uint64_t limit, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Edge> out(n);
  for (auto& e : out) e = {rng() % limit, rng() % limit};
  return out;
}

inline std::vector<char> read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool files_equal(const std::filesystem::path& a, const std::filesystem::path& b) {
  return read_all(a) == read_all(b);
}

}  // namespace emg::test
