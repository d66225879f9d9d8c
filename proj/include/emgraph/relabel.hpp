// Sort-merge-join relabeling of edge endpoints against remote permutation
// ranges: per-pass chunk sort, then a lockstep id sweep against each node's
// permutation slice fetched from its permute server.
#pragma once

#include <span>
#include <thread>

#include "emgraph/cluster.hpp"
#include "emgraph/emstore.hpp"

namespace emg {

// In-memory form of the join step: rewrites the run of entries whose `field`
// equals id (starting at elci) to pid; returns the cursor past the run.
// Precondition: elc sorted on `field` and elc[elci..].field >= id.
std::uint64_t label_chunk(std::uint64_t id, std::uint64_t pid, std::span<Edge> elc,
                          std::uint64_t elci, EdgeField field);

// Block-buffered read-modify-write cursor over one on-disk chunk. Keeps one
// block resident; reads and write-backs are sequential streams.
class ChunkCursor {
 public:
  ChunkCursor(ExtEdgeList& list, const ChunkDescriptor& chunk, EdgeField field,
              MemGauge* gauge, IoSink* sink);

  bool at_end() const { return pos_ == chunk_.offset + chunk_.len; }
  std::uint64_t position() const { return pos_ - chunk_.offset; }
  std::uint64_t length() const { return chunk_.len; }

  // label_chunk over the buffered block(s); relabels the full run even when
  // it crosses block boundaries.
  std::uint64_t relabel_run(std::uint64_t id, std::uint64_t pid);

  void finish();  // flush the trailing dirty block

 private:
  void ensure_loaded();
  void flush_block();

  ExtEdgeList* list_;
  ChunkDescriptor chunk_;
  EdgeField field_;
  FileChannel rch_, wch_;
  std::vector<Edge> buf_;
  std::uint64_t buf_first_ = 0;
  std::uint64_t pos_;
  bool loaded_ = false;
  bool dirty_ = false;
  MemLease lease_;
};

// Per-node responder serving this node's pv slice to remote label_edges.
class PermuteServer {
 public:
  explicit PermuteServer(NodeCtx& ctx);
  ~PermuteServer();
  void stop();

 private:
  void run();
  NodeCtx& ctx_;
  std::thread thread_;
  bool stopped_ = false;
};

// Ordered permutation chunk pv_s; local request bypasses the transport.
std::vector<std::uint64_t> get_permute_range(NodeCtx& ctx, std::uint32_t s);

// One relabel pass (sort chunks on `field`, then the lockstep sweep) for
// every core of this node. pass_idx only names the metrics.
void relabel_pass(NodeCtx& ctx, EdgeField field, std::uint32_t pass_idx);

// des pass, then src pass, with the permute server running; ends with a
// global barrier.
void relabel_phase(NodeCtx& ctx);

}  // namespace emg
