// Seeded R-MAT edge sampling and the per-core generation phase.
#pragma once

#include "emgraph/cluster.hpp"
#include "emgraph/emstore.hpp"
#include "emgraph/kernels.hpp"
#include "emgraph/rng.hpp"

namespace emg {

inline kernels::QuadrantThresholds thresholds_for(const RmatParams& p) {
  return kernels::quadrant_thresholds(p.a, p.b, p.c);
}

// One edge from `scale` recursive quadrant choices, high bit first.
// Consumes exactly `scale` draws from the stream.
Edge gen_rmat_edge(RngStream& rng, std::uint32_t scale, const kernels::QuadrantThresholds& t);

// Appends `count` sampled edges (plus the reversed pair per edge when
// both_orientations is set) and flushes. Sequential writes only.
void generate_edgelist(ExtEdgeList& store, std::uint64_t count, RngStream& rng,
                       std::uint32_t scale, const kernels::QuadrantThresholds& t,
                       bool both_orientations = false);

// Per-core generation of b*f edges into <workdir>/n<bid>/c<cid>/edges.gen.bin.
void generate_phase(NodeCtx& ctx);

// Stream for node/core (bid, cid) under the configured master seed.
inline RngStream generate_stream(const ClusterConfig& cfg, std::uint32_t bid, std::uint32_t cid) {
  return RngStream::seeded(cfg.seed).derive(stream_tag::generate).derive(bid).derive(cid);
}

inline std::filesystem::path gen_file(const ClusterConfig& cfg, std::uint32_t bid,
                                      std::uint32_t cid) {
  return cfg.core_dir(bid, cid) / "edges.gen.bin";
}

}  // namespace emg
