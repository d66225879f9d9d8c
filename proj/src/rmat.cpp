#include "emgraph/rmat.hpp"

namespace emg {

Edge gen_rmat_edge(RngStream& rng, std::uint32_t scale, const kernels::QuadrantThresholds& t) {
  Edge e;
  kernels::rmat_fill(rng.key, rng.ctr, scale, t, &e, 1);
  rng.skip(scale);
  return e;
}

void generate_edgelist(ExtEdgeList& store, std::uint64_t count, RngStream& rng,
                       std::uint32_t scale, const kernels::QuadrantThresholds& t,
                       bool both_orientations) {
  constexpr std::uint64_t kBatch = 4096;
  std::vector<Edge> buf(std::min(count, kBatch));
  std::uint64_t left = count;
  while (left > 0) {
    const std::uint64_t take = std::min(left, kBatch);
    kernels::rmat_fill(rng.key, rng.ctr, scale, t, buf.data(), take);
    rng.skip(take * scale);
    for (std::uint64_t i = 0; i < take; ++i) {
      store.append(buf[i]);
      if (both_orientations) store.append({buf[i].des, buf[i].src});
    }
    left -= take;
  }
  store.flush();
}

void generate_phase(NodeCtx& ctx) {
  const ClusterConfig& cfg = ctx.cfg;
  const auto t = thresholds_for(cfg.rmat);
  ctx.parallel_cores([&](std::uint32_t tid) {
    std::filesystem::create_directories(ctx.core_dir(tid));
    const IoStats before = ctx.core_io[tid]->snapshot();
    ExtEdgeList store(gen_file(cfg, ctx.bid, tid), cfg.block_edges, cfg.chunk_edges(),
                      ctx.core_io[tid].get(), /*truncate=*/true);
    RngStream rng = generate_stream(cfg, ctx.bid, tid);
    generate_edgelist(store, cfg.bin() * cfg.edge_factor, rng, cfg.scale, t,
                      cfg.emit_both_orientations);
    const IoStats delta = ctx.core_io[tid]->snapshot() - before;
    ctx.record("generate.c" + std::to_string(tid) + ".seq_writes", delta.seq_writes);
    ctx.record("generate.c" + std::to_string(tid) + ".rand", delta.randoms());
  });
  ctx.global_barrier.arrive_and_wait("generate");
}

}  // namespace emg
