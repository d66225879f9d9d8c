// Scatter-gather shipment of relabeled edges to their owner nodes, in
// unordered and sorted-stream variants.
#pragma once

#include "emgraph/cluster.hpp"
#include "emgraph/emstore.hpp"

namespace emg {

// The node's collected ("owned") edges. Unordered mode keeps one append-only
// list; sorted mode keeps one sorted run per sender, merged lazily on scan.
struct OwnedStore {
  RedistMode mode;
  std::unique_ptr<ExtEdgeList> single;
  std::vector<std::unique_ptr<ExtEdgeList>> runs;

  static OwnedStore create(const ClusterConfig& cfg, std::uint32_t bid, IoSink* sink);
  static OwnedStore open(const ClusterConfig& cfg, std::uint32_t bid, IoSink* sink);

  std::uint64_t count() const;
  void flush();

  // Whole sequence: merged by src in sorted mode, storage order otherwise.
  std::unique_ptr<EdgeSource> scan(IoSink* sink) const;

  // The sequence chunk-partitioned into nc per-core scan ranges; sinks[t]
  // accounts core t's reads.
  std::vector<std::unique_ptr<EdgeSource>> core_scans(std::uint32_t nc,
                                                      std::span<IoSink* const> sinks) const;
};

// Scatter worker: routes every local relabeled edge into the packet of
// owner_of(e.src); full packets ship immediately, residuals at the end,
// followed by one end-of-stream sentinel per destination.
void redistribute_edges(NodeCtx& ctx, RedistMode mode);

// Collector worker: appends received packets to the owned store until nb
// sentinels have arrived. Returns the owned edge count.
std::uint64_t collect_edges(NodeCtx& ctx, RedistMode mode);

// Full phase: optional chunk re-sort (sorted mode), collector + scatter
// workers, barriers, conservation metrics.
void redistribute_phase(NodeCtx& ctx);

}  // namespace emg
