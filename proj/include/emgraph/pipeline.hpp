// Phase orchestration for the full run: shuffle -> generate -> relabel ->
// redistribute -> csr, with per-phase timing, I/O deltas, memory peaks,
// conservation checks, and the run manifest.
#pragma once

#include "emgraph/cluster.hpp"
#include "emgraph/manifest.hpp"

namespace emg {

struct PhaseSelection {
  bool shuffle = true;
  bool generate = true;
  bool relabel = true;
  bool redistribute = true;
  bool csr = true;

  static PhaseSelection all() { return {}; }
  static PhaseSelection none() { return {false, false, false, false, false}; }
  bool any() const { return shuffle || generate || relabel || redistribute || csr; }
};

constexpr const char* kSoftwareVersion = "emgraph 0.1.0";
constexpr const char* kRngName = "splitmix64";
constexpr const char* kManifestName = "manifest.txt";

void manifest_set_config(RunManifest& m, const ClusterConfig& cfg);
ClusterConfig config_from_manifest(const RunManifest& m);

// Runs the selected phases on the simulated cluster and writes the manifest.
// dump_permutation, when non-empty, receives the gathered pv as little-endian
// u64s after the shuffle phase.
RunManifest run_pipeline(const ClusterConfig& cfg, PhaseSelection phases = PhaseSelection::all(),
                         const std::filesystem::path& dump_permutation = {});

}  // namespace emg
