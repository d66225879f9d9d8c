#include "emgraph/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace emg {

namespace {

bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

}  // namespace

void ClusterConfig::validate() const {
  if (scale < 1 || scale > 40) bad("scale must be in [1, 40]");
  if (edge_factor < 1) bad("edge-factor must be positive");
  if (!is_pow2(nb)) bad("nodes (nb) must be a power of two");
  if (!is_pow2(nc)) bad("cores (nc) must be a power of two");
  if (std::uint64_t(nb) * nc > n()) bad("nb*nc must not exceed n");
  if (nb > bucket()) bad("nb must divide the bucket size B = n/nb (shuffle sub-blocks)");
  if (nc > bucket()) bad("nc must divide the bucket size B = n/nb");
  if (!is_pow2(block_edges)) bad("block-edges (C_e) must be a power of two");
  if (mem_per_core < 2 * block_bytes())
    bad("mem-per-core must hold at least two blocks of edges (2 * C_e * 16 bytes)");
  if (mem_per_core % (2 * block_bytes()) != 0)
    bad("mem-per-core must be a multiple of twice the block size for exact block accounting");
  if (packet_bytes < sizeof(Edge)) bad("packet-bytes must hold at least one edge");
  if (bucket() * 8 > std::uint64_t(nc) * mem_per_core)
    bad("permutation slice (B*8 bytes) must fit in node memory nc*mmc");
  // Relabel keeps one block buffer per resident chunk; the per-core chunk
  // count must fit the mmc + one block ceiling.
  const std::uint64_t per_core_bytes = bin() * edge_factor * sizeof(Edge) *
                                       (emit_both_orientations ? 2 : 1);
  const std::uint64_t chunks_per_core = (per_core_bytes + chunk_bytes() - 1) / chunk_bytes();
  if (chunks_per_core > mem_per_core / block_bytes() + 1)
    bad("too many relabel chunks per core for mmc; raise mem-per-core or cores");
  const double psum = rmat.a + rmat.b + rmat.c + rmat.d;
  if (std::fabs(psum - 1.0) > 1e-12) bad("rmat probabilities must sum to 1");
  if (rmat.a < 0 || rmat.b < 0 || rmat.c < 0 || rmat.d < 0)
    bad("rmat probabilities must be non-negative");
  if (workdir.empty()) bad("workdir must be set");
  if (watchdog_ms == 0) bad("watchdog-ms must be positive");
  if (csr_variant == CsrVariant::sorted && redistribute != RedistMode::sorted)
    bad("csr_variant=sorted needs redistribute=sorted (src-sorted owned stream)");
}

namespace {

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    unsigned long long r = std::stoull(v, &pos, 0);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    bad("invalid integer for '" + key + "': " + v);
  }
}

double parse_f64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    bad("invalid number for '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  bad("invalid boolean for '" + key + "': " + v);
}

}  // namespace

bool apply_config_kv(ClusterConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "scale") cfg.scale = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "edge_factor") cfg.edge_factor = parse_u64(key, value);
  else if (key == "nodes") cfg.nb = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "cores") cfg.nc = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "block_edges") cfg.block_edges = parse_u64(key, value);
  else if (key == "mem_per_core") cfg.mem_per_core = parse_u64(key, value);
  else if (key == "packet_bytes") cfg.packet_bytes = parse_u64(key, value);
  else if (key == "seed") cfg.seed = parse_u64(key, value);
  else if (key == "rmat_a") cfg.rmat.a = parse_f64(key, value);
  else if (key == "rmat_b") cfg.rmat.b = parse_f64(key, value);
  else if (key == "rmat_c") cfg.rmat.c = parse_f64(key, value);
  else if (key == "rmat_d") cfg.rmat.d = parse_f64(key, value);
  else if (key == "workdir") cfg.workdir = value;
  else if (key == "emit_both_orientations") cfg.emit_both_orientations = parse_bool(key, value);
  else if (key == "jitter_ms") cfg.jitter_ms = static_cast<std::uint32_t>(parse_u64(key, value));
  else if (key == "watchdog_ms") cfg.watchdog_ms = parse_u64(key, value);
  else if (key == "csr_variant") {
    if (value == "sorted") cfg.csr_variant = CsrVariant::sorted;
    else if (value == "hash") cfg.csr_variant = CsrVariant::hash;
    else bad("csr_variant must be 'sorted' or 'hash'");
  } else if (key == "redistribute") {
    if (value == "sorted") cfg.redistribute = RedistMode::sorted;
    else if (value == "unordered") cfg.redistribute = RedistMode::unordered;
    else bad("redistribute must be 'sorted' or 'unordered'");
  } else if (key == "kernels") {
    if (value == "auto") cfg.kernels = KernelChoice::automatic;
    else if (value == "scalar") cfg.kernels = KernelChoice::scalar;
    else if (value == "avx2") cfg.kernels = KernelChoice::avx2;
    else bad("kernels must be 'auto', 'scalar' or 'avx2'");
  } else {
    return false;
  }
  return true;
}

ClusterConfig load_config_file(const std::filesystem::path& path, ClusterConfig base) {
  std::ifstream in(path);
  if (!in) bad("cannot open config file: " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        bad(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) bad(path.string() + ":" + std::to_string(lineno) + ": empty key");
    if (!apply_config_kv(base, key, value))
      bad(path.string() + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return base;
}

}  // namespace emg
