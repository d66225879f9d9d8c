#include "emgraph/redistribute.hpp"

#include <thread>

#include "emgraph/bytes.hpp"
#include "emgraph/rmat.hpp"

namespace emg {

namespace {

std::filesystem::path owned_file(const ClusterConfig& cfg, std::uint32_t bid) {
  return cfg.node_dir(bid) / "owned.bin";
}
std::filesystem::path run_file(const ClusterConfig& cfg, std::uint32_t bid, std::uint32_t s) {
  return cfg.node_dir(bid) / ("owned.run" + std::to_string(s) + ".bin");
}

OwnedStore make_store(const ClusterConfig& cfg, std::uint32_t bid, IoSink* sink, bool truncate) {
  OwnedStore st;
  st.mode = cfg.redistribute;
  if (st.mode == RedistMode::unordered) {
    st.single = std::make_unique<ExtEdgeList>(owned_file(cfg, bid), cfg.block_edges,
                                              cfg.chunk_edges(), sink, truncate);
  } else {
    for (std::uint32_t s = 0; s < cfg.nb; ++s)
      st.runs.push_back(std::make_unique<ExtEdgeList>(run_file(cfg, bid, s), cfg.block_edges,
                                                      cfg.chunk_edges(), sink, truncate));
  }
  return st;
}

}  // namespace

OwnedStore OwnedStore::create(const ClusterConfig& cfg, std::uint32_t bid, IoSink* sink) {
  return make_store(cfg, bid, sink, true);
}

OwnedStore OwnedStore::open(const ClusterConfig& cfg, std::uint32_t bid, IoSink* sink) {
  return make_store(cfg, bid, sink, false);
}

std::uint64_t OwnedStore::count() const {
  if (mode == RedistMode::unordered) return single->count();
  std::uint64_t total = 0;
  for (const auto& r : runs) total += r->count();
  return total;
}

void OwnedStore::flush() {
  if (single) single->flush();
  for (auto& r : runs) r->flush();
}

std::unique_ptr<EdgeSource> OwnedStore::scan(IoSink* sink) const {
  if (mode == RedistMode::unordered) return single->scan(sink);
  std::vector<std::unique_ptr<EdgeSource>> inputs;
  for (const auto& r : runs) inputs.push_back(r->scan(sink));
  return sorted_merge(std::move(inputs), EdgeField::src);
}

std::vector<std::unique_ptr<EdgeSource>> OwnedStore::core_scans(
    std::uint32_t nc, std::span<IoSink* const> sinks) const {
  const std::uint64_t total = count();
  std::vector<std::unique_ptr<EdgeSource>> out;
  if (total > 0) {
    const std::uint64_t per_core = (total + nc - 1) / nc;
    for (const auto& c : chunk_partition(total, per_core)) {
      IoSink* sink = sinks[c.index];
      // map the global range [c.offset, c.offset+c.len) onto the backing lists
      std::vector<std::unique_ptr<EdgeSource>> parts;
      if (mode == RedistMode::unordered) {
        parts.push_back(single->scan_range(c.offset, c.len, sink));
      } else {
        std::uint64_t base = 0;
        for (const auto& r : runs) {
          const std::uint64_t lo = std::max(c.offset, base);
          const std::uint64_t hi = std::min(c.offset + c.len, base + r->count());
          if (lo < hi) parts.push_back(r->scan_range(lo - base, hi - lo, sink));
          base += r->count();
        }
      }
      out.push_back(std::make_unique<ChainStream>(std::move(parts)));
    }
  }
  while (out.size() < nc)
    out.push_back(std::make_unique<ChainStream>(std::vector<std::unique_ptr<EdgeSource>>{}));
  return out;
}

void redistribute_edges(NodeCtx& ctx, RedistMode mode) {
  const ClusterConfig& cfg = ctx.cfg;
  const std::uint64_t cap = std::max<std::uint64_t>(1, cfg.packet_bytes / sizeof(Edge));
  const std::uint32_t shift = cfg.owner_shift();
  std::vector<std::vector<Edge>> pkt(cfg.nb);
  for (auto& p : pkt) p.reserve(cap);

  auto ship = [&](std::uint32_t d) {
    ctx.send(d, MsgKind::edge_packet, to_bytes(std::span<const Edge>(pkt[d])));
    pkt[d].clear();
  };

  // Input stream: per-core edge files in core order; in sorted mode the
  // chunks were just re-sorted on the new src, merged into one stream.
  std::vector<std::unique_ptr<EdgeSource>> inputs;
  std::vector<std::unique_ptr<ExtEdgeList>> lists;
  for (std::uint32_t cid = 0; cid < cfg.nc; ++cid) {
    auto el = std::make_unique<ExtEdgeList>(gen_file(cfg, ctx.bid, cid), cfg.block_edges,
                                            cfg.chunk_edges(), &ctx.node_io, false);
    if (mode == RedistMode::sorted) {
      for (const auto& c : el->chunks())
        inputs.push_back(el->scan_range(c.offset, c.len, &ctx.node_io));
    } else {
      inputs.push_back(el->scan(&ctx.node_io));
    }
    lists.push_back(std::move(el));
  }
  std::unique_ptr<EdgeSource> stream =
      mode == RedistMode::sorted
          ? sorted_merge(std::move(inputs), EdgeField::src)
          : std::unique_ptr<EdgeSource>(std::make_unique<ChainStream>(std::move(inputs)));

  Edge e;
  while (stream->next(e)) {
    if (e.src >= cfg.n())
      throw PipelineError("redistribute",
                          "edge source out of range after relabel (corrupt relabel state)");
    const std::uint32_t d = static_cast<std::uint32_t>(e.src >> shift);
    pkt[d].push_back(e);
    if (pkt[d].size() == cap) ship(d);
  }
  for (std::uint32_t d = 0; d < cfg.nb; ++d) {
    if (!pkt[d].empty()) ship(d);
    ctx.send(d, MsgKind::end_of_stream, {});
  }
}

std::uint64_t collect_edges(NodeCtx& ctx, RedistMode mode) {
  const ClusterConfig& cfg = ctx.cfg;
  const std::uint64_t lo = std::uint64_t(ctx.bid) * cfg.bucket();
  const std::uint64_t hi = lo + cfg.bucket();
  OwnedStore store = OwnedStore::create(cfg, ctx.bid, &ctx.node_io);

  std::uint32_t sentinels = 0;
  while (sentinels < cfg.nb) {
    Message m = ctx.recv_any({MsgKind::edge_packet, MsgKind::end_of_stream});
    if (m.kind == MsgKind::end_of_stream) {
      ++sentinels;
      continue;
    }
    const auto edges = from_bytes<Edge>(m.payload);
    ExtEdgeList& dst = mode == RedistMode::sorted ? *store.runs[m.source] : *store.single;
    for (const Edge& e : edges) {
      if (e.src < lo || e.src >= hi)
        throw PipelineError("redistribute", "received edge outside this node's range");
      dst.append(e);
    }
  }
  store.flush();
  return store.count();
}

void redistribute_phase(NodeCtx& ctx) {
  const ClusterConfig& cfg = ctx.cfg;

  if (cfg.redistribute == RedistMode::sorted) {
    // Re-sort every chunk on the relabeled source field.
    ctx.parallel_cores([&](std::uint32_t tid) {
      ExtEdgeList el(gen_file(cfg, ctx.bid, tid), cfg.block_edges, cfg.chunk_edges(),
                     ctx.core_io[tid].get(), false);
      MemGauge& g = ctx.mem.gauge("redistribute.sort.c" + std::to_string(tid));
      for (const auto& c : el.chunks()) el.sort_chunk(c, EdgeField::src, &g);
    });
  }

  std::uint64_t owned_count = 0;
  std::exception_ptr collect_err;
  std::thread collector([&] {
    try {
      owned_count = collect_edges(ctx, cfg.redistribute);
    } catch (const CancelledError&) {
    } catch (...) {
      collect_err = std::current_exception();
      ctx.net.abort("collector failed on node " + std::to_string(ctx.bid));
    }
  });

  // No scatter may send before every collector is listening.
  ctx.global_barrier.arrive_and_wait("redistribute.collectors");

  try {
    redistribute_edges(ctx, cfg.redistribute);
  } catch (...) {
    ctx.net.abort("scatter failed on node " + std::to_string(ctx.bid));
    collector.join();
    throw;
  }
  collector.join();
  if (collect_err) std::rethrow_exception(collect_err);

  ctx.record("owned.count", owned_count);
  ctx.global_barrier.arrive_and_wait("redistribute");
}

}  // namespace emg
