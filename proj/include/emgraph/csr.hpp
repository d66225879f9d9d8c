// CSR construction from the owned edgelist: the parallel hash/associative-map
// builder (degv/offv/edgev with atomic flushes) and the trivial single-scan
// builder over a src-sorted stream.
#pragma once

#include <span>
#include <unordered_map>

#include "emgraph/cluster.hpp"
#include "emgraph/redistribute.hpp"

namespace emg {

constexpr std::uint64_t kCsrMagic = 0x3130525343474D45ull;  // "EMGCSR01"
constexpr std::uint64_t kCsrVersion = 1;

// Per-node CSR slice: offv has B+1 entries; neighbors of local vertex v are
// adjv[offv[v] : offv[v+1]], global id = base + v.
struct CsrGraph {
  std::uint64_t n = 0;
  std::uint64_t bucket = 0;  // B
  std::uint64_t base = 0;
  std::vector<std::uint64_t> offv;
  std::vector<std::uint64_t> adjv;

  static CsrGraph load(const std::filesystem::path& path);
};

std::filesystem::path csr_file(const ClusterConfig& cfg, std::uint32_t bid);

// One csr.bin: header (magic, version, n, B, base, m_local), offv, adjv.
// The adjacency region is written through per-consumer channels; the header
// and offv are finalized through their own channel.
class CsrFile {
 public:
  CsrFile(const std::filesystem::path& path, std::uint64_t n, std::uint64_t bucket,
          std::uint64_t base, std::uint64_t block_bytes, IoSink* sink);

  std::uint64_t adj_base() const { return 48 + (bucket_ + 1) * 8; }
  FileChannel adj_channel(IoSink* sink) { return FileChannel(dev_, sink); }
  void finalize(std::span<const std::uint64_t> offv, std::uint64_t m_local);

 private:
  std::shared_ptr<BlockDevice> dev_;
  std::uint64_t n_, bucket_, base_;
  IoSink* sink_;
};

// Bounded degree accumulator: private counts, whole-map flush into the
// shared degv via atomic adds once the byte budget is reached.
class DegreeMap {
 public:
  DegreeMap(std::uint64_t budget_bytes, MemGauge& gauge)
      : budget_(budget_bytes), gauge_(&gauge) {}

  void add(std::uint64_t local_v, std::span<std::uint64_t> degv);
  void flush(std::span<std::uint64_t> degv);

  static constexpr std::uint64_t kEntryBytes = 48;

 private:
  std::unordered_map<std::uint64_t, std::uint64_t> m_;
  std::uint64_t budget_;
  MemGauge* gauge_;
  MemLease lease_;
};

// Bounded adjacency buffer; flush reserves per-vertex spans in the shared
// cursor array by fetch-and-add and writes them to the adjacency region.
class AdjMap {
 public:
  AdjMap(std::uint64_t budget_bytes, MemGauge& gauge) : budget_(budget_bytes), gauge_(&gauge) {}

  void add(std::uint64_t local_v, std::uint64_t des, std::span<std::uint64_t> degv,
           std::span<std::uint64_t> cursor, std::span<const std::uint64_t> offv,
           CsrFile& out, FileChannel& ch);
  void flush(std::span<std::uint64_t> degv, std::span<std::uint64_t> cursor,
             std::span<const std::uint64_t> offv, CsrFile& out, FileChannel& ch);

  static constexpr std::uint64_t kEntryBytes = 48;

 private:
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> m_;
  std::uint64_t bytes_ = 0;
  std::uint64_t budget_;
  MemGauge* gauge_;
  MemLease lease_;
};

// offv from degv (single worker).
std::vector<std::uint64_t> build_offv(std::span<const std::uint64_t> degv);

// Single sequential scan over a src-sorted stream; zero-degree gaps are
// filled by one-step cursor advances. Destinations are handed to `emit` in
// stream order.
std::vector<std::uint64_t> csr_offsets_from_sorted(
    EdgeSource& stream, std::uint64_t bucket, std::uint64_t base,
    const std::function<void(std::uint64_t)>& emit);

void csr_phase(NodeCtx& ctx);

}  // namespace emg
