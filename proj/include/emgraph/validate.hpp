// In-memory oracle pipeline and structural/statistical verification. The
// oracle replays the distributed run's exact RNG stream layout, so agreement
// is bit-exact rather than distributional.
#pragma once

#include <string>

#include "emgraph/config.hpp"
#include "emgraph/core.hpp"
#include "emgraph/csr.hpp"

namespace emg {

struct OracleGraph {
  std::vector<std::uint64_t> pv;   // full permutation, pv[old] = new
  std::vector<Edge> generated;     // node-major, core-major generation order
  std::vector<Edge> relabeled;     // same order, both endpoints mapped
  std::vector<std::uint64_t> offv; // global CSR, length n+1
  std::vector<std::uint64_t> adjv; // grouped by relabeled src, stream order

  std::vector<Edge> owned_of(std::uint32_t bid, const ClusterConfig& cfg) const;
  CsrGraph csr_slice(std::uint32_t bid, const ClusterConfig& cfg) const;
};

// Ground truth for a configuration. Guarded to n <= 2^22.
OracleGraph oracle_generate(const ClusterConfig& cfg);

struct PermReport {
  bool bijective = false;
  std::uint64_t fixed_points = 0;
  std::vector<std::string> violations;
};
PermReport verify_permutation(std::span<const std::uint64_t> pv, std::uint64_t n);

struct CsrReport {
  bool ok = false;
  std::vector<std::string> diffs;
};
// Checks offv shape and multiset equality between owned edges and the
// (base+v, adjv slice) pairs.
CsrReport verify_csr(const CsrGraph& csr, std::vector<Edge> owned);

struct DegreeStats {
  std::uint64_t min = 0;
  std::uint64_t max = 0;
  double mean = 0;
  double median = 0;
  double max_mean_ratio = 0;
  std::vector<std::uint64_t> histogram;  // log2 bins; [0] holds degree 0
};
DegreeStats degree_stats(std::span<const std::uint64_t> offv);

// --- run-level comparison against a finished workdir -----------------------

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> diffs;
  void fail(std::string msg) {
    ok = false;
    diffs.push_back(std::move(msg));
  }
};

// Reads pv slices, relabeled chunk files, owned stores and CSR files from
// the workdir and compares each against the oracle (criterion set: gathered
// permutation, relabeled multiset, per-node owned multisets, canonicalized
// per-node CSRs).
ValidationReport validate_run(const ClusterConfig& cfg);

// Gathered permutation from the per-node pv.bin slices.
std::vector<std::uint64_t> gather_permutation(const ClusterConfig& cfg);

}  // namespace emg
