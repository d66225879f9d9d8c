#include "emgraph/validate.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>

#include "emgraph/kernels.hpp"
#include "emgraph/redistribute.hpp"
#include "emgraph/rmat.hpp"
#include "emgraph/rng.hpp"
#include "emgraph/shuffle.hpp"

namespace emg {

namespace {

bool edge_less(const Edge& a, const Edge& b) {
  return a.src != b.src ? a.src < b.src : a.des < b.des;
}

}  // namespace

OracleGraph oracle_generate(const ClusterConfig& cfg) {
  if (cfg.n() > (1ull << 22))
    throw ConfigError("oracle_generate: n above the in-memory guard (2^22)");
  const std::uint64_t n = cfg.n();
  const std::uint64_t B = cfg.bucket();
  const std::uint64_t sub = B / cfg.nb;
  OracleGraph g;

  // Permutation: replay the per-node round sub-streams and exchanges.
  std::vector<std::vector<std::uint64_t>> sb(cfg.nb), rb(cfg.nb);
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    sb[i].resize(B);
    rb[i].resize(B);
    std::iota(sb[i].begin(), sb[i].end(), std::uint64_t(i) * B);
  }
  const RngStream shuffle_root = RngStream::seeded(cfg.seed).derive(stream_tag::shuffle);
  const std::uint32_t rounds = shuffle_rounds(cfg);
  for (std::uint32_t r = 0; r < rounds; ++r) {
    for (std::uint32_t i = 0; i < cfg.nb; ++i) {
      RngStream rng = shuffle_root.derive(i).derive(r);
      local_shuffle(sb[i], rng);
    }
    if (cfg.nb > 1) {
      for (std::uint32_t i = 0; i < cfg.nb; ++i)
        for (std::uint32_t j = 0; j < cfg.nb; ++j)
          std::copy_n(sb[i].data() + j * sub, sub, rb[j].data() + i * sub);
      std::swap(sb, rb);
    }
  }
  g.pv.reserve(n);
  for (std::uint32_t i = 0; i < cfg.nb; ++i)
    g.pv.insert(g.pv.end(), sb[i].begin(), sb[i].end());

  // Edges: per (node, core) streams in order, scalar reference kernels.
  const auto t = thresholds_for(cfg.rmat);
  const std::uint64_t per_core = cfg.bin() * cfg.edge_factor;
  std::vector<Edge> batch(per_core);
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    for (std::uint32_t j = 0; j < cfg.nc; ++j) {
      const RngStream rng = generate_stream(cfg, i, j);
      kernels::ref::rmat_fill(rng.key, rng.ctr, cfg.scale, t, batch.data(), per_core);
      for (const Edge& e : batch) {
        g.generated.push_back(e);
        if (cfg.emit_both_orientations) g.generated.push_back({e.des, e.src});
      }
    }
  }

  g.relabeled.reserve(g.generated.size());
  for (const Edge& e : g.generated) g.relabeled.push_back({g.pv[e.src], g.pv[e.des]});

  // Global CSR by counting sort; per-vertex adjacency in stream order.
  std::vector<std::uint64_t> deg(n, 0);
  for (const Edge& e : g.relabeled) ++deg[e.src];
  g.offv.resize(n + 1);
  kernels::ref::prefix_sum(deg.data(), g.offv.data(), n);
  g.adjv.resize(g.relabeled.size());
  std::vector<std::uint64_t> cur(n, 0);
  for (const Edge& e : g.relabeled) g.adjv[g.offv[e.src] + cur[e.src]++] = e.des;
  return g;
}

std::vector<Edge> OracleGraph::owned_of(std::uint32_t bid, const ClusterConfig& cfg) const {
  std::vector<Edge> out;
  for (const Edge& e : relabeled)
    if (owner_of(e.src, cfg) == bid) out.push_back(e);
  return out;
}

CsrGraph OracleGraph::csr_slice(std::uint32_t bid, const ClusterConfig& cfg) const {
  const std::uint64_t B = cfg.bucket();
  const std::uint64_t base = std::uint64_t(bid) * B;
  CsrGraph s;
  s.n = cfg.n();
  s.bucket = B;
  s.base = base;
  s.offv.resize(B + 1);
  const std::uint64_t lo = offv[base];
  for (std::uint64_t v = 0; v <= B; ++v) s.offv[v] = offv[base + v] - lo;
  s.adjv.assign(adjv.begin() + lo, adjv.begin() + offv[base + B]);
  return s;
}

PermReport verify_permutation(std::span<const std::uint64_t> pv, std::uint64_t n) {
  PermReport rep;
  if (pv.size() != n) {
    rep.violations.push_back("length " + std::to_string(pv.size()) + " != n");
    return rep;
  }
  std::vector<std::uint8_t> seen(n, 0);
  rep.bijective = true;
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t v = pv[i];
    if (v >= n) {
      rep.bijective = false;
      if (rep.violations.size() < 8)
        rep.violations.push_back("pv[" + std::to_string(i) + "] = " + std::to_string(v) +
                                 " out of range");
      continue;
    }
    if (seen[v]) {
      rep.bijective = false;
      if (rep.violations.size() < 8)
        rep.violations.push_back("duplicate value " + std::to_string(v));
    }
    seen[v] = 1;
    if (v == i) ++rep.fixed_points;
  }
  for (std::uint64_t v = 0; rep.violations.size() < 8 && v < n; ++v)
    if (!seen[v]) {
      rep.bijective = false;
      rep.violations.push_back("missing value " + std::to_string(v));
    }
  return rep;
}

CsrReport verify_csr(const CsrGraph& csr, std::vector<Edge> owned) {
  CsrReport rep;
  rep.ok = true;
  auto fail = [&](std::string m) {
    rep.ok = false;
    rep.diffs.push_back(std::move(m));
  };
  if (csr.offv.size() != csr.bucket + 1) fail("offv length != B+1");
  if (!csr.offv.empty() && csr.offv[0] != 0) fail("offv[0] != 0");
  for (std::uint64_t v = 0; v + 1 < csr.offv.size(); ++v)
    if (csr.offv[v] > csr.offv[v + 1]) {
      fail("offv not monotone at " + std::to_string(v));
      break;
    }
  if (csr.offv.back() != csr.adjv.size()) fail("offv[B] != |adjv|");
  if (!rep.ok) return rep;

  std::vector<Edge> flat;
  flat.reserve(csr.adjv.size());
  for (std::uint64_t v = 0; v < csr.bucket; ++v)
    for (std::uint64_t k = csr.offv[v]; k < csr.offv[v + 1]; ++k)
      flat.push_back({csr.base + v, csr.adjv[k]});
  std::sort(flat.begin(), flat.end(), edge_less);
  std::sort(owned.begin(), owned.end(), edge_less);
  if (flat != owned) {
    fail("edge multiset mismatch: csr has " + std::to_string(flat.size()) + ", owned has " +
         std::to_string(owned.size()));
    for (std::size_t i = 0; i < flat.size() && i < owned.size(); ++i)
      if (!(flat[i] == owned[i])) {
        fail("first differing edge at rank " + std::to_string(i) + ": csr (" +
             std::to_string(flat[i].src) + "," + std::to_string(flat[i].des) + ") vs owned (" +
             std::to_string(owned[i].src) + "," + std::to_string(owned[i].des) + ")");
        break;
      }
  }
  return rep;
}

DegreeStats degree_stats(std::span<const std::uint64_t> offv) {
  DegreeStats st;
  if (offv.size() < 2) return st;
  const std::uint64_t nv = offv.size() - 1;
  std::vector<std::uint64_t> deg(nv);
  for (std::uint64_t v = 0; v < nv; ++v) deg[v] = offv[v + 1] - offv[v];

  const auto mms = kernels::reduce_minmax_sum(deg.data(), deg.size());
  st.min = mms.min;
  st.max = mms.max;
  st.mean = double(mms.sum) / double(nv);
  st.max_mean_ratio = st.mean > 0 ? double(st.max) / st.mean : 0.0;

  std::vector<std::uint64_t> sorted = deg;
  std::sort(sorted.begin(), sorted.end());
  st.median = nv % 2 ? double(sorted[nv / 2])
                     : 0.5 * (double(sorted[nv / 2 - 1]) + double(sorted[nv / 2]));

  st.histogram.assign(1, 0);
  for (const std::uint64_t d : deg) {
    std::size_t bin = 0;
    if (d > 0) bin = 1 + static_cast<std::size_t>(std::bit_width(d) - 1);
    if (st.histogram.size() <= bin) st.histogram.resize(bin + 1, 0);
    ++st.histogram[bin];
  }
  return st;
}

std::vector<std::uint64_t> gather_permutation(const ClusterConfig& cfg) {
  std::vector<std::uint64_t> pv;
  pv.reserve(cfg.n());
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    const auto path = cfg.node_dir(i) / "pv.bin";
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing permutation slice: " + path.string());
    std::vector<std::uint64_t> slice(cfg.bucket());
    in.read(reinterpret_cast<char*>(slice.data()),
            static_cast<std::streamsize>(slice.size() * 8));
    if (!in) throw std::runtime_error("short permutation slice: " + path.string());
    pv.insert(pv.end(), slice.begin(), slice.end());
  }
  return pv;
}

ValidationReport validate_run(const ClusterConfig& cfg) {
  ValidationReport rep;
  const OracleGraph oracle = oracle_generate(cfg);

  // 1. gathered permutation
  const auto pv = gather_permutation(cfg);
  if (pv != oracle.pv) rep.fail("gathered permutation differs from oracle");

  // 2. relabeled edge multiset (post-relabel chunk files)
  std::vector<Edge> relabeled;
  for (std::uint32_t i = 0; i < cfg.nb; ++i)
    for (std::uint32_t j = 0; j < cfg.nc; ++j) {
      ExtEdgeList el(gen_file(cfg, i, j), cfg.block_edges, cfg.chunk_edges(), nullptr, false);
      auto s = el.scan(nullptr);
      Edge e;
      while (s->next(e)) relabeled.push_back(e);
    }
  std::vector<Edge> oracle_rel = oracle.relabeled;
  std::sort(relabeled.begin(), relabeled.end(), edge_less);
  std::sort(oracle_rel.begin(), oracle_rel.end(), edge_less);
  if (relabeled != oracle_rel) rep.fail("relabeled edge multiset differs from oracle");

  // 3. per-node owned multisets; 4. canonicalized per-node CSRs
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    OwnedStore store = OwnedStore::open(cfg, i, nullptr);
    std::vector<Edge> owned;
    {
      auto s = store.scan(nullptr);
      Edge e;
      while (s->next(e)) owned.push_back(e);
    }
    std::vector<Edge> expect = oracle.owned_of(i, cfg);
    std::sort(owned.begin(), owned.end(), edge_less);
    std::sort(expect.begin(), expect.end(), edge_less);
    if (owned != expect) rep.fail("node " + std::to_string(i) + ": owned multiset differs");

    CsrGraph got = CsrGraph::load(csr_file(cfg, i));
    CsrGraph want = oracle.csr_slice(i, cfg);
    if (got.offv != want.offv) {
      rep.fail("node " + std::to_string(i) + ": offv differs");
      continue;
    }
    for (std::uint64_t v = 0; v < got.bucket; ++v) {
      std::sort(got.adjv.begin() + got.offv[v], got.adjv.begin() + got.offv[v + 1]);
      std::sort(want.adjv.begin() + want.offv[v], want.adjv.begin() + want.offv[v + 1]);
    }
    if (got.adjv != want.adjv)
      rep.fail("node " + std::to_string(i) + ": canonicalized adjacency differs");
  }
  return rep;
}

}  // namespace emg
