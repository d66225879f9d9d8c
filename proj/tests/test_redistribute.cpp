#include <doctest.h>

#include <algorithm>

#include "emgraph/pipeline.hpp"
#include "emgraph/redistribute.hpp"
#include "emgraph/rmat.hpp"
#include "emgraph/validate.hpp"
#include "support.hpp"

using namespace emg;
using emg::test::TempDir;

namespace {

std::vector<Edge> owned_contents(const ClusterConfig& cfg, std::uint32_t bid) {
  OwnedStore st = OwnedStore::open(cfg, bid, nullptr);
  std::vector<Edge> out;
  auto s = st.scan(nullptr);
  Edge e;
  while (s->next(e)) out.push_back(e);
  return out;
}

bool edge_lt(const Edge& a, const Edge& b) {
  return a.src != b.src ? a.src < b.src : a.des < b.des;
}

// Plant per-core "relabeled" edge files and run just the redistribute phase.
void run_redistribute_with(const ClusterConfig& cfg,
                           const std::vector<std::vector<Edge>>& per_node_edges) {
  run_cluster(cfg, [&](NodeCtx& ctx) {
    for (std::uint32_t j = 0; j < cfg.nc; ++j) {
      std::filesystem::create_directories(ctx.core_dir(j));
      ExtEdgeList el(gen_file(cfg, ctx.bid, j), cfg.block_edges, cfg.chunk_edges(),
                     ctx.core_io[j].get(), true);
      // split the node's list across cores round-robin
      for (std::size_t k = j; k < per_node_edges[ctx.bid].size(); k += cfg.nc)
        el.append(per_node_edges[ctx.bid][k]);
      el.flush();
    }
    redistribute_phase(ctx);
    return ctx.metrics.at("owned.count");
  });
}

}  // namespace

TEST_CASE("owner rule: tiny hand example") {
  TempDir dir("redist");
  auto cfg = emg::test::small_config(dir, 2, 2, 1, 1);  // n=4, B=2
  cfg.redistribute = RedistMode::unordered;
  cfg.csr_variant = CsrVariant::hash;
  run_redistribute_with(cfg, {{{0, 3}, {3, 1}}, {}});

  CHECK(owned_contents(cfg, 0) == std::vector<Edge>{{0, 3}});
  CHECK(owned_contents(cfg, 1) == std::vector<Edge>{{3, 1}});
}

TEST_CASE("nb=1 self-delivers everything") {
  TempDir dir("redist");
  auto cfg = emg::test::small_config(dir, 4, 1, 1, 1);
  cfg.redistribute = RedistMode::unordered;
  cfg.csr_variant = CsrVariant::hash;
  const auto edges = emg::test::random_edges(1000, cfg.n(), 9);
  run_redistribute_with(cfg, {edges});
  auto got = owned_contents(cfg, 0);
  CHECK(got == edges);
}

TEST_CASE("sorted mode merges per-sender runs into one src-sorted stream") {
  TempDir dir("redist");
  auto cfg = emg::test::small_config(dir, 10, 4, 2, 21);
  run_pipeline(cfg, {true, true, true, true, false});
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    const auto owned = owned_contents(cfg, i);
    for (std::size_t k = 1; k < owned.size(); ++k) CHECK(owned[k - 1].src <= owned[k].src);
    const std::uint64_t lo = std::uint64_t(i) * cfg.bucket();
    for (const auto& e : owned) {
      CHECK(e.src >= lo);
      CHECK(e.src < lo + cfg.bucket());
    }
  }
}

TEST_CASE("unordered and sorted modes collect identical multisets") {
  TempDir d1("redist"), d2("redist");
  auto c1 = emg::test::small_config(d1, 10, 2, 2, 5);
  c1.redistribute = RedistMode::unordered;
  c1.csr_variant = CsrVariant::hash;
  auto c2 = emg::test::small_config(d2, 10, 2, 2, 5);

  run_pipeline(c1, {true, true, true, true, false});
  run_pipeline(c2, {true, true, true, true, false});

  for (std::uint32_t i = 0; i < c1.nb; ++i) {
    auto a = owned_contents(c1, i);
    auto b = owned_contents(c2, i);
    std::sort(a.begin(), a.end(), edge_lt);
    std::sort(b.begin(), b.end(), edge_lt);
    CHECK(a == b);
  }
}

TEST_CASE("owned lists equal the oracle partition by owner (scale 10, nb=4)") {
  TempDir dir("redist");
  auto cfg = emg::test::small_config(dir, 10, 4, 1, 31);
  run_pipeline(cfg, {true, true, true, true, false});
  const OracleGraph oracle = oracle_generate(cfg);
  std::uint64_t total = 0;
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    auto got = owned_contents(cfg, i);
    auto expect = oracle.owned_of(i, cfg);
    total += got.size();
    std::sort(got.begin(), got.end(), edge_lt);
    std::sort(expect.begin(), expect.end(), edge_lt);
    CHECK(got == expect);
  }
  CHECK(total == cfg.total_edges());
}

TEST_CASE("an edge with src >= n is fatal") {
  TempDir dir("redist");
  auto cfg = emg::test::small_config(dir, 2, 1, 1, 1);
  cfg.redistribute = RedistMode::unordered;
  cfg.csr_variant = CsrVariant::hash;
  CHECK_THROWS_AS(run_redistribute_with(cfg, {{{999, 0}}}), PipelineError);
}
