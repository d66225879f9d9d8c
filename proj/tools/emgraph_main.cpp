// emgraph: external-memory distributed R-MAT graph generation on a simulated
// cluster, with oracle validation and I/O statistics.
#include <cinttypes>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "emgraph/csr.hpp"
#include "emgraph/pipeline.hpp"
#include "emgraph/validate.hpp"

namespace {

using namespace emg;

constexpr int kExitOk = 0;
constexpr int kExitPipeline = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIncomplete = 3;

struct GenerateArgs {
  ClusterConfig cfg;
  std::string config_file;
  std::string csr_variant = "sorted";
  std::string redistribute = "sorted";
  std::string kernels = "auto";
  std::string dump_permutation;
  std::vector<std::string> phase_names;
};

PhaseSelection parse_phases(const std::vector<std::string>& names) {
  if (names.empty()) return PhaseSelection::all();
  PhaseSelection sel = PhaseSelection::none();
  for (const auto& p : names) {
    if (p == "shuffle") sel.shuffle = true;
    else if (p == "generate") sel.generate = true;
    else if (p == "relabel") sel.relabel = true;
    else if (p == "redistribute") sel.redistribute = true;
    else if (p == "csr") sel.csr = true;
    else throw ConfigError("unknown phase: " + p);
  }
  return sel;
}

int cmd_generate(GenerateArgs& a, const CLI::App* gen) {
  if (!a.config_file.empty()) {
    // config file first, explicit flags override
    ClusterConfig base = load_config_file(a.config_file, ClusterConfig{});
    if (gen->count("--scale")) base.scale = a.cfg.scale;
    if (gen->count("--edge-factor")) base.edge_factor = a.cfg.edge_factor;
    if (gen->count("--nodes")) base.nb = a.cfg.nb;
    if (gen->count("--cores")) base.nc = a.cfg.nc;
    if (gen->count("--mem-per-core")) base.mem_per_core = a.cfg.mem_per_core;
    if (gen->count("--block-edges")) base.block_edges = a.cfg.block_edges;
    if (gen->count("--packet-bytes")) base.packet_bytes = a.cfg.packet_bytes;
    if (gen->count("--seed")) base.seed = a.cfg.seed;
    if (gen->count("--rmat-a")) base.rmat.a = a.cfg.rmat.a;
    if (gen->count("--rmat-b")) base.rmat.b = a.cfg.rmat.b;
    if (gen->count("--rmat-c")) base.rmat.c = a.cfg.rmat.c;
    if (gen->count("--rmat-d")) base.rmat.d = a.cfg.rmat.d;
    if (gen->count("--workdir")) base.workdir = a.cfg.workdir;
    if (gen->count("--jitter")) base.jitter_ms = a.cfg.jitter_ms;
    if (gen->count("--watchdog-ms")) base.watchdog_ms = a.cfg.watchdog_ms;
    if (gen->count("--emit-both-orientations"))
      base.emit_both_orientations = a.cfg.emit_both_orientations;
    const CsrVariant file_variant = base.csr_variant;
    const RedistMode file_mode = base.redistribute;
    const KernelChoice file_kernels = base.kernels;
    a.cfg = base;
    a.cfg.csr_variant = file_variant;
    a.cfg.redistribute = file_mode;
    a.cfg.kernels = file_kernels;
  }
  if (a.config_file.empty() || gen->count("--csr-variant"))
    apply_config_kv(a.cfg, "csr_variant", a.csr_variant);
  if (a.config_file.empty() || gen->count("--redistribute"))
    apply_config_kv(a.cfg, "redistribute", a.redistribute);
  if (a.config_file.empty() || gen->count("--kernels"))
    apply_config_kv(a.cfg, "kernels", a.kernels);
  a.cfg.validate();
  const RunManifest m =
      run_pipeline(a.cfg, parse_phases(a.phase_names),
                   a.dump_permutation.empty() ? std::filesystem::path{}
                                              : std::filesystem::path(a.dump_permutation));
  std::printf("run complete: %s/%s (n=%" PRIu64 ", edges=%" PRIu64 ")\n",
              a.cfg.workdir.c_str(), kManifestName, a.cfg.n(), a.cfg.total_edges());
  return kExitOk;
}

RunManifest load_workdir_manifest(const std::string& workdir) {
  const auto path = std::filesystem::path(workdir) / kManifestName;
  if (!std::filesystem::exists(path))
    throw std::filesystem::filesystem_error(
        "missing manifest", path, std::make_error_code(std::errc::no_such_file_or_directory));
  return RunManifest::load(path);
}

int cmd_validate(const std::string& workdir) {
  RunManifest m = load_workdir_manifest(workdir);
  ClusterConfig cfg = config_from_manifest(m);
  cfg.workdir = workdir;
  const ValidationReport rep = validate_run(cfg);
  if (rep.ok) {
    std::printf("validate: OK — permutation, relabeled multiset, owned multisets and "
                "CSR slices all match the oracle\n");
    return kExitOk;
  }
  std::printf("validate: MISMATCH (%zu difference%s)\n", rep.diffs.size(),
              rep.diffs.size() == 1 ? "" : "s");
  for (const auto& d : rep.diffs) std::printf("  - %s\n", d.c_str());
  return kExitPipeline;
}

int cmd_stats(const std::string& workdir, bool csv_only) {
  RunManifest m = load_workdir_manifest(workdir);
  ClusterConfig cfg = config_from_manifest(m);
  cfg.workdir = workdir;

  struct Row {
    std::string phase, counter;
    std::uint64_t value;
  };
  std::vector<Row> io_rows;
  for (const char* phase : {"shuffle", "generate", "relabel", "redistribute", "csr"})
    for (const char* counter : {"seq_reads", "seq_writes", "rand_reads", "rand_writes",
                                "wall_ms"}) {
      const std::string key = std::string("phase.") + phase + "." + counter;
      if (const std::string* v = m.get(key)) io_rows.push_back({phase, counter, std::stoull(*v)});
    }

  std::vector<DegreeStats> per_node;
  std::vector<std::uint64_t> all_deg_offv;  // global degrees via concatenated slices
  std::vector<std::uint64_t> global_deg;
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    const auto path = csr_file(cfg, i);
    if (!std::filesystem::exists(path))
      throw std::filesystem::filesystem_error(
          "missing csr", path, std::make_error_code(std::errc::no_such_file_or_directory));
    CsrGraph g = CsrGraph::load(path);
    per_node.push_back(degree_stats(g.offv));
    for (std::uint64_t v = 0; v < g.bucket; ++v)
      global_deg.push_back(g.offv[v + 1] - g.offv[v]);
  }
  std::vector<std::uint64_t> global_offv(global_deg.size() + 1, 0);
  for (std::size_t i = 0; i < global_deg.size(); ++i)
    global_offv[i + 1] = global_offv[i] + global_deg[i];
  const DegreeStats global = degree_stats(global_offv);

  if (!csv_only) {
    std::printf("degree statistics\n");
    std::printf("  %-8s %10s %10s %10s %10s %12s\n", "node", "min", "max", "mean", "median",
                "max/mean");
    for (std::uint32_t i = 0; i < cfg.nb; ++i) {
      const auto& s = per_node[i];
      std::printf("  n%-7u %10" PRIu64 " %10" PRIu64 " %10.3f %10.1f %12.2f\n", i, s.min, s.max,
                  s.mean, s.median, s.max_mean_ratio);
    }
    std::printf("  %-8s %10" PRIu64 " %10" PRIu64 " %10.3f %10.1f %12.2f\n", "global",
                global.min, global.max, global.mean, global.median, global.max_mean_ratio);
    std::printf("\nglobal degree histogram (log2 bins)\n");
    for (std::size_t b = 0; b < global.histogram.size(); ++b) {
      if (b == 0)
        std::printf("  deg 0        %12" PRIu64 "\n", global.histogram[b]);
      else
        std::printf("  deg [%llu,%llu) %10" PRIu64 "\n", 1ull << (b - 1), 1ull << b,
                    global.histogram[b]);
    }
    std::printf("\nper-phase block I/O\n");
    std::printf("  %-14s %-12s %12s\n", "phase", "counter", "value");
    for (const auto& r : io_rows)
      std::printf("  %-14s %-12s %12" PRIu64 "\n", r.phase.c_str(), r.counter.c_str(), r.value);
    std::printf("\nplot-ready rows (phase,counter,value)\n");
  }
  for (const auto& r : io_rows)
    std::printf("%s,%s,%" PRIu64 "\n", r.phase.c_str(), r.counter.c_str(), r.value);
  for (std::uint32_t i = 0; i < cfg.nb; ++i)
    std::printf("degree,n%u_max_mean_ratio,%.4f\n", i, per_node[i].max_mean_ratio);
  std::printf("degree,global_max_mean_ratio,%.4f\n", global.max_mean_ratio);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"external-memory distributed R-MAT graph generator"};
  app.require_subcommand(1);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "run the generation pipeline");
  gen->add_option("--config", ga.config_file, "key = value config file");
  gen->add_option("--scale", ga.cfg.scale, "log2 of vertex count");
  gen->add_option("--edge-factor", ga.cfg.edge_factor, "edges per vertex");
  gen->add_option("--nodes", ga.cfg.nb, "compute nodes (power of two)");
  gen->add_option("--cores", ga.cfg.nc, "cores per node (power of two)");
  gen->add_option("--mem-per-core", ga.cfg.mem_per_core, "mmc bytes");
  gen->add_option("--block-edges", ga.cfg.block_edges, "edges per disk block (C_e)");
  gen->add_option("--packet-bytes", ga.cfg.packet_bytes, "redistribution packet bytes (mblk)");
  gen->add_option("--seed", ga.cfg.seed, "master RNG seed");
  gen->add_option("--rmat-a", ga.cfg.rmat.a, "R-MAT quadrant a");
  gen->add_option("--rmat-b", ga.cfg.rmat.b, "R-MAT quadrant b");
  gen->add_option("--rmat-c", ga.cfg.rmat.c, "R-MAT quadrant c");
  gen->add_option("--rmat-d", ga.cfg.rmat.d, "R-MAT quadrant d");
  gen->add_option("--csr-variant", ga.csr_variant, "csr builder: sorted|hash");
  gen->add_option("--redistribute", ga.redistribute, "redistribute mode: sorted|unordered");
  gen->add_option("--workdir", ga.cfg.workdir, "external storage directory");
  gen->add_option("--jitter", ga.cfg.jitter_ms, "random delivery delay upper bound (ms)");
  gen->add_option("--watchdog-ms", ga.cfg.watchdog_ms, "deadlock watchdog base timeout");
  gen->add_option("--kernels", ga.kernels, "kernel variants: auto|scalar|avx2");
  gen->add_flag("--emit-both-orientations", ga.cfg.emit_both_orientations,
                "append (v,u) for every generated (u,v)");
  gen->add_option("--dump-permutation", ga.dump_permutation,
                  "write the gathered permutation to this path");
  gen->add_option("--phase", ga.phase_names,
                  "run only these phases (shuffle|generate|relabel|redistribute|csr)");

  std::string workdir;
  bool csv_only = false;
  auto* val = app.add_subcommand("validate", "compare a finished run against the oracle");
  val->add_option("--workdir", workdir, "workdir of a completed run")->required();
  auto* st = app.add_subcommand("stats", "degree and per-phase I/O statistics");
  st->add_option("--workdir", workdir, "workdir of a completed run")->required();
  st->add_flag("--csv", csv_only, "emit only the plot-ready rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(ga, gen);
    if (val->parsed()) return cmd_validate(workdir);
    if (st->parsed()) return cmd_stats(workdir, csv_only);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PipelineError& e) {
    std::cerr << "pipeline fault in phase '" << e.phase << "': " << e.what() << "\n";
    return kExitPipeline;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "workdir incomplete: " << e.what() << "\n";
    return kExitIncomplete;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitOk;
}
