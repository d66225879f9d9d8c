#include "emgraph/relabel.hpp"

#include <fstream>

#include "emgraph/bytes.hpp"
#include "emgraph/kernels.hpp"
#include "emgraph/rmat.hpp"

namespace emg {

std::uint64_t label_chunk(std::uint64_t id, std::uint64_t pid, std::span<Edge> elc,
                          std::uint64_t elci, EdgeField field) {
  const std::size_t run = kernels::match_run(elc.data() + elci, elc.size() - elci, field, id);
  if (field == EdgeField::src) {
    for (std::size_t k = 0; k < run; ++k) elc[elci + k].src = pid;
  } else {
    for (std::size_t k = 0; k < run; ++k) elc[elci + k].des = pid;
  }
  return elci + run;
}

// ---------------------------------------------------------------- ChunkCursor

ChunkCursor::ChunkCursor(ExtEdgeList& list, const ChunkDescriptor& chunk, EdgeField field,
                         MemGauge* gauge, IoSink* sink)
    : list_(&list), chunk_(chunk), field_(field),
      rch_(list.device(), sink), wch_(list.device(), sink), pos_(chunk.offset) {
  const std::uint64_t block_bytes = list.block_edges() * sizeof(Edge);
  if (gauge) lease_ = MemLease(*gauge, block_bytes);
  buf_.reserve(list.block_edges());
}

void ChunkCursor::ensure_loaded() {
  if (loaded_ && pos_ < buf_first_ + buf_.size()) return;
  flush_block();
  buf_first_ = pos_;
  const std::uint64_t end = chunk_.offset + chunk_.len;
  const std::uint64_t take = std::min<std::uint64_t>(list_->block_edges(), end - pos_);
  buf_.resize(take);
  rch_.read(pos_ * sizeof(Edge), buf_.data(), take * sizeof(Edge));
  loaded_ = true;
}

void ChunkCursor::flush_block() {
  if (!loaded_) return;
  // Every block is written back once the cursor leaves it; the sweep visits
  // every element, so blocks are dirty in practice and the write stream stays
  // contiguous either way.
  wch_.write(buf_first_ * sizeof(Edge), buf_.data(), buf_.size() * sizeof(Edge));
  dirty_ = false;
  loaded_ = false;
}

std::uint64_t ChunkCursor::relabel_run(std::uint64_t id, std::uint64_t pid) {
  std::uint64_t total = 0;
  for (;;) {
    if (at_end()) return total;
    ensure_loaded();
    const std::size_t off = pos_ - buf_first_;
    const std::size_t run = kernels::match_run(buf_.data() + off, buf_.size() - off, field_, id);
    if (run == 0) {
      if (total == 0 && edge_key(buf_[off], field_) < id)
        throw SortednessError("relabel: chunk not sorted on sweep field (key " +
                              std::to_string(edge_key(buf_[off], field_)) + " below id " +
                              std::to_string(id) + ")");
      return total;
    }
    if (field_ == EdgeField::src) {
      for (std::size_t k = 0; k < run; ++k) buf_[off + k].src = pid;
    } else {
      for (std::size_t k = 0; k < run; ++k) buf_[off + k].des = pid;
    }
    dirty_ = true;
    pos_ += run;
    total += run;
    if (pos_ < buf_first_ + buf_.size()) return total;  // run ended inside block
  }
}

void ChunkCursor::finish() { flush_block(); }

// -------------------------------------------------------------- PermuteServer

PermuteServer::PermuteServer(NodeCtx& ctx) : ctx_(ctx) {
  if (ctx_.pv.size() != ctx_.cfg.bucket())
    throw PipelineError("relabel", "permute server started before shuffle completed");
  thread_ = std::thread([this] { run(); });
}

void PermuteServer::run() {
  try {
    for (;;) {
      Message m = ctx_.recv_any({MsgKind::permute_request});
      if (!m.payload.empty() && m.payload[0] == 1) return;  // shutdown
      ctx_.send(m.source, MsgKind::permute_range,
                to_bytes(std::span<const std::uint64_t>(ctx_.pv)));
    }
  } catch (const CancelledError&) {
  } catch (...) {
    ctx_.net.abort("permute server failed on node " + std::to_string(ctx_.bid));
  }
}

void PermuteServer::stop() {
  if (stopped_) return;
  stopped_ = true;
  try {
    ctx_.send(ctx_.bid, MsgKind::permute_request, {1});
  } catch (...) {
    // transport aborted; the server thread saw the cancel
  }
  if (thread_.joinable()) thread_.join();
}

PermuteServer::~PermuteServer() { stop(); }

std::vector<std::uint64_t> get_permute_range(NodeCtx& ctx, std::uint32_t s) {
  if (ctx.pv.size() != ctx.cfg.bucket())
    throw PipelineError("relabel", "get_permute_range before shuffle completion (phase order)");
  if (s == ctx.bid) return ctx.pv;
  ctx.send(s, MsgKind::permute_request, {0});
  Message m = ctx.recv_from(s, MsgKind::permute_range);
  auto pv_s = from_bytes<std::uint64_t>(m.payload);
  if (pv_s.size() != ctx.cfg.bucket())
    throw PipelineError("relabel", "permutation range has wrong length");
  return pv_s;
}

// ----------------------------------------------------------------- the passes

void relabel_pass(NodeCtx& ctx, EdgeField field, std::uint32_t pass_idx) {
  const ClusterConfig& cfg = ctx.cfg;
  const std::uint64_t B = cfg.bucket();
  std::vector<std::uint64_t> shared_pv;  // fetched once per range by core 0
  const std::string pfx = "relabel.pass" + std::to_string(pass_idx) + ".";

  ctx.parallel_cores([&](std::uint32_t tid) {
    IoSink* sink = ctx.core_io[tid].get();
    ExtEdgeList el(gen_file(cfg, ctx.bid, tid), cfg.block_edges, cfg.chunk_edges(), sink,
                   /*truncate=*/false);
    const auto cl = el.chunks();

    // Read each chunk, sort on the pass field, write it back.
    const IoStats before_sort = sink->snapshot();
    MemGauge& sort_gauge = ctx.mem.gauge("relabel.sort.c" + std::to_string(tid));
    for (const auto& c : cl) el.sort_chunk(c, field, &sort_gauge);
    const IoStats sort_io = sink->snapshot() - before_sort;
    ctx.record(pfx + "c" + std::to_string(tid) + ".sort_blocks", sort_io.total());

    ctx.core_barrier.arrive_and_wait("relabel.sorted");

    MemGauge& buf_gauge = ctx.mem.gauge("relabel.buffers.c" + std::to_string(tid));
    std::vector<ChunkCursor> cursors;
    cursors.reserve(cl.size());
    for (const auto& c : cl) cursors.emplace_back(el, c, field, &buf_gauge, sink);

    const IoStats before_sweep = sink->snapshot();
    for (std::uint32_t s = 0; s < cfg.nb; ++s) {
      if (tid == 0) shared_pv = get_permute_range(ctx, s);
      ctx.core_barrier.arrive_and_wait("label_wait");
      std::uint64_t id = std::uint64_t(s) * B;
      for (std::uint64_t k = 0; k < B; ++k, ++id) {
        const std::uint64_t pid = shared_pv[k];
        for (auto& cur : cursors) cur.relabel_run(id, pid);
      }
      ctx.core_barrier.arrive_and_wait("relabel_wait");
    }
    for (std::size_t i = 0; i < cursors.size(); ++i) {
      cursors[i].finish();
      if (cursors[i].position() != cl[i].len)
        throw PipelineError("relabel", "sweep left chunk " + std::to_string(i) +
                                           " incomplete (endpoint outside [0,n)?)");
    }
    const IoStats sweep_io = sink->snapshot() - before_sweep;
    ctx.record(pfx + "c" + std::to_string(tid) + ".sweep_seq",
               sweep_io.seq_reads + sweep_io.seq_writes);
    ctx.record(pfx + "c" + std::to_string(tid) + ".sweep_rand", sweep_io.randoms());
  });
}

void relabel_phase(NodeCtx& ctx) {
  if (ctx.pv.empty()) {
    // phase-at-a-time mode: reload the slice persisted by the shuffle phase
    const auto path = ctx.node_dir() / "pv.bin";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError("relabel", "missing permutation slice: " + path.string());
    ctx.pv.resize(ctx.cfg.bucket());
    in.read(reinterpret_cast<char*>(ctx.pv.data()),
            static_cast<std::streamsize>(ctx.pv.size() * 8));
    if (!in) throw PipelineError("relabel", "short permutation slice: " + path.string());
  }

  PermuteServer server(ctx);
  relabel_pass(ctx, EdgeField::des, 0);
  relabel_pass(ctx, EdgeField::src, 1);
  // All nodes are past both passes before any server goes away.
  ctx.global_barrier.arrive_and_wait("relabel");
  server.stop();
}

}  // namespace emg
