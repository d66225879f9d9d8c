// Run configuration: user-supplied knobs plus all derived constants.
#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include "emgraph/core.hpp"
#include "emgraph/error.hpp"

namespace emg {

// R-MAT quadrant probabilities. Defaults are the Graph500 reference values.
struct RmatParams {
  double a = 0.57;
  double b = 0.19;
  double c = 0.19;
  double d = 0.05;
};

enum class CsrVariant : std::uint8_t { sorted, hash };
enum class RedistMode : std::uint8_t { sorted, unordered };
enum class KernelChoice : std::uint8_t { automatic, scalar, avx2 };

struct ClusterConfig {
  std::uint32_t scale = 10;          // n = 2^scale
  std::uint64_t edge_factor = 16;    // f: edges per vertex
  std::uint32_t nb = 1;              // compute nodes
  std::uint32_t nc = 1;              // cores per node
  std::uint64_t block_edges = 4096;  // C_e: edges per disk block
  std::uint64_t mem_per_core = 1ull << 20;   // mmc bytes
  std::uint64_t packet_bytes = 1ull << 16;   // mblk bytes
  std::uint64_t seed = 1;
  RmatParams rmat;
  std::string workdir = "emgraph-out";
  bool emit_both_orientations = false;
  CsrVariant csr_variant = CsrVariant::sorted;
  RedistMode redistribute = RedistMode::sorted;
  std::uint32_t jitter_ms = 0;
  KernelChoice kernels = KernelChoice::automatic;
  std::uint64_t watchdog_ms = 60000;

  // Derived constants. Never user-supplied.
  std::uint64_t n() const { return 1ull << scale; }
  std::uint64_t total_edges() const { return n() * edge_factor; }
  std::uint64_t bucket() const { return n() / nb; }          // B
  std::uint64_t bin() const { return bucket() / nc; }        // b
  std::uint64_t edges_per_core() const {                     // appended per core
    return bin() * edge_factor * (emit_both_orientations ? 2 : 1);
  }
  std::uint64_t block_bytes() const { return block_edges * sizeof(Edge); }
  // Half of mmc, so a chunk plus the stable-sort temp buffer stay within
  // the mmc working-memory ceiling.
  std::uint64_t chunk_edges() const { return mem_per_core / 2 / sizeof(Edge); }
  std::uint64_t chunk_bytes() const { return chunk_edges() * sizeof(Edge); }
  std::uint32_t owner_shift() const {  // log2(B)
    std::uint32_t s = 0;
    for (std::uint64_t v = bucket(); v > 1; v >>= 1) ++s;
    return s;
  }
  // Watchdog deadline, widened with problem size.
  std::uint64_t effective_watchdog_ms() const {
    return watchdog_ms * (1 + scale / 16);
  }

  std::filesystem::path node_dir(std::uint32_t bid) const {
    return std::filesystem::path(workdir) / ("n" + std::to_string(bid));
  }
  std::filesystem::path core_dir(std::uint32_t bid, std::uint32_t cid) const {
    return node_dir(bid) / ("c" + std::to_string(cid));
  }

  void validate() const;
};

// Node that owns vertex v — the one whose range partition contains it.
inline std::uint32_t owner_of(vertex_t v, const ClusterConfig& cfg) {
  if (v >= cfg.n()) throw std::logic_error("owner_of: vertex out of range");
  return static_cast<std::uint32_t>(v >> cfg.owner_shift());
}

// key = value text file; '#' starts a comment. Unknown keys are errors.
ClusterConfig load_config_file(const std::filesystem::path& path, ClusterConfig base = {});
bool apply_config_kv(ClusterConfig& cfg, const std::string& key, const std::string& value);

}  // namespace emg
