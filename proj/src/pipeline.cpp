#include "emgraph/pipeline.hpp"

#include <chrono>
#include <fstream>

#include "emgraph/csr.hpp"
#include "emgraph/kernels.hpp"
#include "emgraph/redistribute.hpp"
#include "emgraph/relabel.hpp"
#include "emgraph/rmat.hpp"
#include "emgraph/shuffle.hpp"
#include "emgraph/validate.hpp"

namespace emg {

namespace {

struct NodeOutcome {
  std::map<std::string, std::uint64_t> metrics;
  std::map<std::string, std::uint64_t> mem_peaks;
  std::map<std::string, IoStats> phase_io;
  std::map<std::string, std::uint64_t> phase_wall_ms;
};

const char* variant_name(CsrVariant v) { return v == CsrVariant::sorted ? "sorted" : "hash"; }
const char* mode_name(RedistMode m) { return m == RedistMode::sorted ? "sorted" : "unordered"; }

void write_pv_slice(NodeCtx& ctx) {
  FileChannel ch(std::make_shared<BlockDevice>(ctx.node_dir() / "pv.bin",
                                               ctx.cfg.block_bytes(), true),
                 &ctx.node_io);
  ch.write(0, ctx.pv.data(), ctx.pv.size() * 8);
}

}  // namespace

void manifest_set_config(RunManifest& m, const ClusterConfig& cfg) {
  m.set("config.scale", std::uint64_t(cfg.scale));
  m.set("config.edge_factor", cfg.edge_factor);
  m.set("config.nodes", std::uint64_t(cfg.nb));
  m.set("config.cores", std::uint64_t(cfg.nc));
  m.set("config.block_edges", cfg.block_edges);
  m.set("config.mem_per_core", cfg.mem_per_core);
  m.set("config.packet_bytes", cfg.packet_bytes);
  m.set("config.seed", cfg.seed);
  m.set("config.rmat_a", cfg.rmat.a);
  m.set("config.rmat_b", cfg.rmat.b);
  m.set("config.rmat_c", cfg.rmat.c);
  m.set("config.rmat_d", cfg.rmat.d);
  m.set("config.workdir", cfg.workdir);
  m.set("config.emit_both_orientations", std::uint64_t(cfg.emit_both_orientations ? 1 : 0));
  m.set("config.csr_variant", variant_name(cfg.csr_variant));
  m.set("config.redistribute", mode_name(cfg.redistribute));
  m.set("config.jitter_ms", std::uint64_t(cfg.jitter_ms));
  m.set("derived.n", cfg.n());
  m.set("derived.bucket", cfg.bucket());
  m.set("derived.bin", cfg.bin());
}

ClusterConfig config_from_manifest(const RunManifest& m) {
  ClusterConfig cfg;
  cfg.scale = static_cast<std::uint32_t>(m.get_u64("config.scale"));
  cfg.edge_factor = m.get_u64("config.edge_factor");
  cfg.nb = static_cast<std::uint32_t>(m.get_u64("config.nodes"));
  cfg.nc = static_cast<std::uint32_t>(m.get_u64("config.cores"));
  cfg.block_edges = m.get_u64("config.block_edges");
  cfg.mem_per_core = m.get_u64("config.mem_per_core");
  cfg.packet_bytes = m.get_u64("config.packet_bytes");
  cfg.seed = m.get_u64("config.seed");
  cfg.rmat.a = std::stod(*m.get("config.rmat_a"));
  cfg.rmat.b = std::stod(*m.get("config.rmat_b"));
  cfg.rmat.c = std::stod(*m.get("config.rmat_c"));
  cfg.rmat.d = std::stod(*m.get("config.rmat_d"));
  cfg.workdir = *m.get("config.workdir");
  cfg.emit_both_orientations = m.get_u64("config.emit_both_orientations") != 0;
  cfg.csr_variant = *m.get("config.csr_variant") == "sorted" ? CsrVariant::sorted
                                                             : CsrVariant::hash;
  cfg.redistribute = *m.get("config.redistribute") == "sorted" ? RedistMode::sorted
                                                               : RedistMode::unordered;
  cfg.jitter_ms = static_cast<std::uint32_t>(m.get_u64("config.jitter_ms"));
  return cfg;
}

RunManifest run_pipeline(const ClusterConfig& cfg, PhaseSelection phases,
                         const std::filesystem::path& dump_permutation) {
  cfg.validate();
  if (cfg.kernels == KernelChoice::automatic)
    kernels::select(kernels::best_supported());
  else
    kernels::select(cfg.kernels == KernelChoice::avx2 ? kernels::Level::avx2
                                                      : kernels::Level::scalar);

  for (std::uint32_t i = 0; i < cfg.nb; ++i)
    for (std::uint32_t j = 0; j < cfg.nc; ++j)
      std::filesystem::create_directories(cfg.core_dir(i, j));

  auto outcomes = run_cluster(cfg, [&](NodeCtx& ctx) {
    NodeOutcome out;
    auto timed = [&](const char* name, bool enabled, auto&& fn) {
      if (!enabled) return;
      const IoStats before = ctx.io_snapshot();
      const auto t0 = std::chrono::steady_clock::now();
      fn();
      const auto t1 = std::chrono::steady_clock::now();
      out.phase_io[name] = ctx.io_snapshot() - before;
      out.phase_wall_ms[name] = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    };

    timed("shuffle", phases.shuffle, [&] {
      distributed_shuffle(ctx);
      write_pv_slice(ctx);
    });
    timed("generate", phases.generate, [&] { generate_phase(ctx); });
    timed("relabel", phases.relabel, [&] { relabel_phase(ctx); });
    timed("redistribute", phases.redistribute, [&] { redistribute_phase(ctx); });
    timed("csr", phases.csr, [&] { csr_phase(ctx); });

    out.metrics = ctx.metrics;
    out.mem_peaks = ctx.mem.peaks();
    return out;
  });

  // Conservation: no edge lost or duplicated across the exchange.
  if (phases.redistribute) {
    std::uint64_t owned_total = 0;
    for (const auto& o : outcomes) owned_total += o.metrics.at("owned.count");
    const std::uint64_t expect =
        cfg.total_edges() * (cfg.emit_both_orientations ? 2 : 1);
    if (owned_total != expect)
      throw PipelineError("redistribute",
                          "edge conservation violated: owned " + std::to_string(owned_total) +
                              " != generated " + std::to_string(expect));
  }

  if (!dump_permutation.empty() && phases.shuffle) {
    const auto pv = gather_permutation(cfg);
    std::ofstream out(dump_permutation, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("shuffle", "cannot write " + dump_permutation.string());
    out.write(reinterpret_cast<const char*>(pv.data()),
              static_cast<std::streamsize>(pv.size() * 8));
  }

  RunManifest m;
  m.set("manifest_version", std::uint64_t(1));
  m.set("software", kSoftwareVersion);
  m.set("rng", kRngName);
  m.set("kernels", kernels::level_name(kernels::active()));
  manifest_set_config(m, cfg);
  {
    std::string run;
    const char* names[] = {"shuffle", "generate", "relabel", "redistribute", "csr"};
    const bool on[] = {phases.shuffle, phases.generate, phases.relabel, phases.redistribute,
                       phases.csr};
    for (int i = 0; i < 5; ++i)
      if (on[i]) run += (run.empty() ? "" : ",") + std::string(names[i]);
    m.set("phases_run", run);
  }
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    const auto& o = outcomes[i];
    const std::string np = "node." + std::to_string(i) + ".";
    for (const auto& [k, v] : o.metrics) m.set(np + k, v);
    for (const auto& [k, v] : o.mem_peaks) m.set(np + "mem." + k + ".peak", v);
  }
  // Per-phase aggregates across nodes.
  for (const char* name : {"shuffle", "generate", "relabel", "redistribute", "csr"}) {
    IoStats io;
    std::uint64_t wall = 0;
    bool present = false;
    for (const auto& o : outcomes) {
      auto it = o.phase_io.find(name);
      if (it == o.phase_io.end()) continue;
      present = true;
      io += it->second;
      wall = std::max(wall, o.phase_wall_ms.at(name));
    }
    if (!present) continue;
    const std::string pp = std::string("phase.") + name + ".";
    m.set(pp + "seq_reads", io.seq_reads);
    m.set(pp + "seq_writes", io.seq_writes);
    m.set(pp + "rand_reads", io.rand_reads);
    m.set(pp + "rand_writes", io.rand_writes);
    m.set(pp + "wall_ms", wall);
  }
  m.set("checksum.algorithm", "fnv1a64");
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    const auto pv_path = cfg.node_dir(i) / "pv.bin";
    const auto csr_path = csr_file(cfg, i);
    char buf[24];
    if (std::filesystem::exists(pv_path)) {
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(fnv1a64_file(pv_path)));
      m.set("checksum.n" + std::to_string(i) + ".pv", buf);
    }
    if (std::filesystem::exists(csr_path)) {
      std::snprintf(buf, sizeof(buf), "%016llx",
                    static_cast<unsigned long long>(fnv1a64_file(csr_path)));
      m.set("checksum.n" + std::to_string(i) + ".csr", buf);
    }
  }
  m.save_atomic(std::filesystem::path(cfg.workdir) / kManifestName);
  return m;
}

}  // namespace emg
