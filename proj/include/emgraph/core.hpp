// Core domain types and the two partitioning schemes used by every phase.
#pragma once

#include <cstdint>
#include <vector>

#include "emgraph/error.hpp"

namespace emg {

using vertex_t = std::uint64_t;

// Ordered endpoint pair. Self-loops and duplicates are allowed; the
// generator never dedupes.
struct Edge {
  vertex_t src;
  vertex_t des;

  friend bool operator==(const Edge&, const Edge&) = default;
};
static_assert(sizeof(Edge) == 16, "edge records are two little-endian u64");

enum class EdgeField : std::uint8_t { src, des };

inline vertex_t edge_key(const Edge& e, EdgeField f) {
  return f == EdgeField::src ? e.src : e.des;
}

// Half-open identifier range [lo, hi).
struct Range {
  vertex_t lo;
  vertex_t hi;

  vertex_t width() const { return hi - lo; }
  bool contains(vertex_t v) const { return v >= lo && v < hi; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct ChunkDescriptor {
  std::uint64_t index;
  std::uint64_t offset;  // element index of chunk start
  std::uint64_t len;     // element count

  friend bool operator==(const ChunkDescriptor&, const ChunkDescriptor&) = default;
};

// RP(n, k): k contiguous ranges of width n/k. Requires k | n.
inline std::vector<Range> range_partition(std::uint64_t n, std::uint64_t k) {
  if (k == 0) throw ConfigError("range_partition: k must be positive");
  if (k > n) throw ConfigError("range_partition: k exceeds n");
  if (n % k != 0) throw ConfigError("range_partition: k must divide n");
  const std::uint64_t w = n / k;
  std::vector<Range> out;
  out.reserve(k);
  for (std::uint64_t i = 0; i < k; ++i) out.push_back({i * w, (i + 1) * w});
  return out;
}

// CP(len, csz): fixed-size tiling, final chunk may be shorter.
inline std::vector<ChunkDescriptor> chunk_partition(std::uint64_t len, std::uint64_t csz) {
  if (csz == 0) throw ConfigError("chunk_partition: chunk size must be positive");
  std::vector<ChunkDescriptor> out;
  out.reserve((len + csz - 1) / csz);
  std::uint64_t off = 0, idx = 0;
  while (off < len) {
    const std::uint64_t take = std::min(csz, len - off);
    out.push_back({idx++, off, take});
    off += take;
  }
  return out;
}

}  // namespace emg
