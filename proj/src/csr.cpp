#include "emgraph/csr.hpp"

#include <atomic>
#include <fstream>

#include "emgraph/kernels.hpp"

namespace emg {

std::filesystem::path csr_file(const ClusterConfig& cfg, std::uint32_t bid) {
  return cfg.node_dir(bid) / "csr.bin";
}

CsrGraph CsrGraph::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open csr file: " + path.string());
  std::uint64_t hdr[6];
  in.read(reinterpret_cast<char*>(hdr), sizeof(hdr));
  if (!in || hdr[0] != kCsrMagic || hdr[1] != kCsrVersion)
    throw std::runtime_error("bad csr header: " + path.string());
  CsrGraph g;
  g.n = hdr[2];
  g.bucket = hdr[3];
  g.base = hdr[4];
  const std::uint64_t m_local = hdr[5];
  g.offv.resize(g.bucket + 1);
  in.read(reinterpret_cast<char*>(g.offv.data()),
          static_cast<std::streamsize>(g.offv.size() * 8));
  g.adjv.resize(m_local);
  in.read(reinterpret_cast<char*>(g.adjv.data()),
          static_cast<std::streamsize>(g.adjv.size() * 8));
  if (!in) throw std::runtime_error("truncated csr file: " + path.string());
  return g;
}

CsrFile::CsrFile(const std::filesystem::path& path, std::uint64_t n, std::uint64_t bucket,
                 std::uint64_t base, std::uint64_t block_bytes, IoSink* sink)
    : dev_(std::make_shared<BlockDevice>(path, block_bytes, /*truncate=*/true)),
      n_(n), bucket_(bucket), base_(base), sink_(sink) {}

void CsrFile::finalize(std::span<const std::uint64_t> offv, std::uint64_t m_local) {
  const std::uint64_t hdr[6] = {kCsrMagic, kCsrVersion, n_, bucket_, base_, m_local};
  FileChannel ch(dev_, sink_);
  ch.write(0, hdr, sizeof(hdr));
  ch.write(sizeof(hdr), offv.data(), offv.size_bytes());
  dev_->resize(adj_base() + m_local * 8);
}

// ------------------------------------------------------------------ DegreeMap

void DegreeMap::add(std::uint64_t local_v, std::span<std::uint64_t> degv) {
  // flush before an insert could push residency past the budget
  if ((m_.size() + 1) * kEntryBytes > budget_) flush(degv);
  auto [it, fresh] = m_.try_emplace(local_v, 0);
  ++it->second;
  if (fresh) {
    if (lease_.bytes() == 0)
      lease_ = MemLease(*gauge_, kEntryBytes);
    else
      lease_.grow(kEntryBytes);
  }
}

void DegreeMap::flush(std::span<std::uint64_t> degv) {
  for (const auto& [v, cnt] : m_)
    std::atomic_ref<std::uint64_t>(degv[v]).fetch_add(cnt, std::memory_order_relaxed);
  m_.clear();
  lease_.release();
}

// --------------------------------------------------------------------- AdjMap

void AdjMap::add(std::uint64_t local_v, std::uint64_t des, std::span<std::uint64_t> degv,
                 std::span<std::uint64_t> cursor, std::span<const std::uint64_t> offv,
                 CsrFile& out, FileChannel& ch) {
  if (bytes_ + 8 + kEntryBytes > budget_) flush(degv, cursor, offv, out, ch);
  auto [it, fresh] = m_.try_emplace(local_v);
  it->second.push_back(des);
  const std::uint64_t grew = 8 + (fresh ? kEntryBytes : 0);
  bytes_ += grew;
  if (lease_.bytes() == 0)
    lease_ = MemLease(*gauge_, grew);
  else
    lease_.grow(grew);
}

void AdjMap::flush(std::span<std::uint64_t> degv, std::span<std::uint64_t> cursor,
                   std::span<const std::uint64_t> offv, CsrFile& out, FileChannel& ch) {
  for (const auto& [v, dests] : m_) {
    const std::uint64_t old =
        std::atomic_ref<std::uint64_t>(cursor[v]).fetch_add(dests.size(),
                                                            std::memory_order_relaxed);
    if (old + dests.size() > degv[v])
      throw PipelineError("csr", "adjacency cursor overrun for vertex " + std::to_string(v) +
                                     " (degv/edge mismatch)");
    ch.write(out.adj_base() + (offv[v] + old) * 8, dests.data(), dests.size() * 8);
  }
  m_.clear();
  bytes_ = 0;
  lease_.release();
}

// ------------------------------------------------------------------- builders

std::vector<std::uint64_t> build_offv(std::span<const std::uint64_t> degv) {
  std::vector<std::uint64_t> offv(degv.size() + 1);
  kernels::prefix_sum(degv.data(), offv.data(), degv.size());
  return offv;
}

std::vector<std::uint64_t> csr_offsets_from_sorted(
    EdgeSource& stream, std::uint64_t bucket, std::uint64_t base,
    const std::function<void(std::uint64_t)>& emit) {
  std::vector<std::uint64_t> offv(bucket + 1);
  std::uint64_t csrc = 0, elidx = 0;
  offv[0] = 0;
  Edge e;
  while (stream.next(e)) {
    if (e.src < base || e.src - base >= bucket)
      throw PipelineError("csr", "owned edge outside node range");
    const std::uint64_t s = e.src - base;
    if (s < csrc) throw SortednessError("csr: owned stream not sorted by src");
    while (csrc < s) offv[++csrc] = elidx;
    emit(e.des);
    ++elidx;
  }
  while (csrc < bucket) offv[++csrc] = elidx;
  return offv;
}

namespace {

void build_csr_sorted_variant(NodeCtx& ctx, OwnedStore& owned) {
  const ClusterConfig& cfg = ctx.cfg;
  const std::uint64_t B = cfg.bucket();
  const std::uint64_t base = std::uint64_t(ctx.bid) * B;

  CsrFile out(csr_file(cfg, ctx.bid), cfg.n(), B, base, cfg.block_bytes(), &ctx.node_io);
  FileChannel adj_ch = out.adj_channel(&ctx.node_io);

  // one block of buffered destinations between writes
  MemLease buf_lease(ctx.mem.gauge("csr.adjbuf"), cfg.block_bytes());
  std::vector<std::uint64_t> buf;
  buf.reserve(cfg.block_bytes() / 8);
  std::uint64_t written = 0;
  auto drain = [&] {
    adj_ch.write(out.adj_base() + written * 8, buf.data(), buf.size() * 8);
    written += buf.size();
    buf.clear();
  };

  auto stream = owned.scan(&ctx.node_io);
  std::vector<std::uint64_t> offv =
      csr_offsets_from_sorted(*stream, B, base, [&](std::uint64_t des) {
        buf.push_back(des);
        if (buf.size() == cfg.block_bytes() / 8) drain();
      });
  if (!buf.empty()) drain();
  out.finalize(offv, written);
}

void build_csr_hash_variant(NodeCtx& ctx, OwnedStore& owned) {
  const ClusterConfig& cfg = ctx.cfg;
  const std::uint64_t B = cfg.bucket();
  const std::uint64_t base = std::uint64_t(ctx.bid) * B;

  // degv: node-shared, atomically updated
  MemLease degv_lease(ctx.mem.gauge("csr.degv"), B * 8);
  std::vector<std::uint64_t> degv(B, 0);
  {
    std::vector<IoSink*> sinks;
    for (auto& s : ctx.core_io) sinks.push_back(s.get());
    auto scans = owned.core_scans(cfg.nc, sinks);
    ctx.parallel_cores([&](std::uint32_t tid) {
      DegreeMap map(cfg.mem_per_core, ctx.mem.gauge("csr.map.c" + std::to_string(tid)));
      Edge e;
      while (scans[tid]->next(e)) map.add(e.src - base, degv);
      map.flush(degv);
      ctx.core_barrier.arrive_and_wait("build_degv");
    });
  }

  // offv: built sequentially by one worker
  std::vector<std::uint64_t> offv = build_offv(degv);
  const std::uint64_t m_local = offv[B];

  CsrFile out(csr_file(cfg, ctx.bid), cfg.n(), B, base, cfg.block_bytes(), &ctx.node_io);

  // edgev: per-core buffered scatter through the shared write cursors
  MemLease cursor_lease(ctx.mem.gauge("csr.cursor"), B * 8);
  std::vector<std::uint64_t> cursor(B, 0);
  {
    std::vector<IoSink*> sinks;
    for (auto& s : ctx.core_io) sinks.push_back(s.get());
    auto scans = owned.core_scans(cfg.nc, sinks);
    ctx.parallel_cores([&](std::uint32_t tid) {
      AdjMap map(cfg.mem_per_core, ctx.mem.gauge("csr.map.c" + std::to_string(tid)));
      FileChannel ch = out.adj_channel(ctx.core_io[tid].get());
      Edge e;
      while (scans[tid]->next(e))
        map.add(e.src - base, e.des, degv, cursor, offv, out, ch);
      map.flush(degv, cursor, offv, out, ch);
      ctx.core_barrier.arrive_and_wait("build_edgev");
    });
  }
  for (std::uint64_t v = 0; v < B; ++v)
    if (cursor[v] != degv[v])
      throw PipelineError("csr", "cursor/degree mismatch at vertex " + std::to_string(v));

  out.finalize(offv, m_local);
}

}  // namespace

void csr_phase(NodeCtx& ctx) {
  const ClusterConfig& cfg = ctx.cfg;
  OwnedStore owned = OwnedStore::open(cfg, ctx.bid, &ctx.node_io);

  const IoStats before = ctx.io_snapshot();
  if (cfg.csr_variant == CsrVariant::sorted) {
    build_csr_sorted_variant(ctx, owned);
  } else {
    build_csr_hash_variant(ctx, owned);
  }
  const IoStats delta = ctx.io_snapshot() - before;
  ctx.record("csr.rand_blocks", delta.randoms());
  ctx.record("csr.seq_blocks", delta.seq_reads + delta.seq_writes);

  ctx.global_barrier.arrive_and_wait("csr");
}

}  // namespace emg
