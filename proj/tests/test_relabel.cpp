#include <doctest.h>

#include <algorithm>
#include <map>

#include "emgraph/pipeline.hpp"
#include "emgraph/relabel.hpp"
#include "emgraph/rmat.hpp"
#include "emgraph/shuffle.hpp"
#include "emgraph/validate.hpp"
#include "support.hpp"

using namespace emg;
using emg::test::TempDir;

TEST_CASE("label_chunk rewrites the equal run and returns the cursor") {
  std::vector<Edge> elc = {{10, 3}, {11, 3}, {12, 5}};
  const std::uint64_t done = label_chunk(3, 7, elc, 0, EdgeField::des);
  CHECK(done == 2);
  CHECK(elc == std::vector<Edge>{{10, 7}, {11, 7}, {12, 5}});

  // empty run: cursor unchanged
  CHECK(label_chunk(4, 9, elc, 2, EdgeField::des) == 2);
  CHECK(elc[2].des == 5);
}

TEST_CASE("full id sweep equals direct map-lookup relabeling") {
  const std::uint64_t n = 512;
  auto edges = emg::test::random_edges(4096, n, 17);
  std::vector<std::uint64_t> pv(n);
  for (std::uint64_t i = 0; i < n; ++i) pv[i] = (i * 37 + 11) % n;  // a bijection

  for (const EdgeField field : {EdgeField::src, EdgeField::des}) {
    std::vector<Edge> chunk = edges;
    std::stable_sort(chunk.begin(), chunk.end(), [&](const Edge& a, const Edge& b) {
      return edge_key(a, field) < edge_key(b, field);
    });
    std::vector<Edge> expect = chunk;
    for (auto& e : expect)
      (field == EdgeField::src ? e.src : e.des) = pv[edge_key(e, field)];

    std::uint64_t elci = 0;
    for (std::uint64_t id = 0; id < n; ++id)
      elci = label_chunk(id, pv[id], chunk, elci, field);
    CHECK(elci == chunk.size());
    CHECK(chunk == expect);
  }
}

namespace {

// Sweep all cursors of one on-disk list against a full permutation.
void disk_sweep(ExtEdgeList& el, std::span<const std::uint64_t> pv, EdgeField field,
                IoSink* sink) {
  std::vector<ChunkCursor> cursors;
  const auto cl = el.chunks();
  for (const auto& c : cl) cursors.emplace_back(el, c, field, nullptr, sink);
  for (std::uint64_t id = 0; id < pv.size(); ++id)
    for (auto& cur : cursors) cur.relabel_run(id, pv[id]);
  for (std::size_t i = 0; i < cursors.size(); ++i) {
    cursors[i].finish();
    REQUIRE(cursors[i].position() == cl[i].len);
  }
}

std::vector<Edge> list_contents(ExtEdgeList& el, IoSink* sink) {
  std::vector<Edge> out;
  auto s = el.scan(sink);
  Edge e;
  while (s->next(e)) out.push_back(e);
  return out;
}

}  // namespace

TEST_CASE("identity permutation leaves sorted chunks byte-identical") {
  TempDir dir("rel");
  IoSink sink;
  const std::uint64_t n = 256;
  ExtEdgeList el(dir.path() / "c.bin", 64, 512, &sink, true);
  for (const auto& e : emg::test::random_edges(3000, n, 5)) el.append(e);
  el.flush();
  for (const auto& c : el.chunks()) el.sort_chunk(c, EdgeField::des);
  const auto before = list_contents(el, &sink);

  std::vector<std::uint64_t> identity(n);
  for (std::uint64_t i = 0; i < n; ++i) identity[i] = i;
  disk_sweep(el, identity, EdgeField::des, &sink);
  CHECK(list_contents(el, &sink) == before);
}

TEST_CASE("reversal permutation on both fields, hand-checkable") {
  TempDir dir("rel");
  IoSink sink;
  const std::uint64_t n = 8;
  std::vector<std::uint64_t> rev(n);
  for (std::uint64_t i = 0; i < n; ++i) rev[i] = 7 - i;

  ExtEdgeList el(dir.path() / "h.bin", 64, 512, &sink, true);
  el.append({0, 1});
  el.append({2, 5});
  el.flush();

  for (const auto& c : el.chunks()) el.sort_chunk(c, EdgeField::des);
  disk_sweep(el, rev, EdgeField::des, &sink);
  for (const auto& c : el.chunks()) el.sort_chunk(c, EdgeField::src);
  disk_sweep(el, rev, EdgeField::src, &sink);

  auto got = list_contents(el, &sink);
  std::sort(got.begin(), got.end(), [](const Edge& a, const Edge& b) { return a.src < b.src; });
  CHECK(got == std::vector<Edge>{{5, 2}, {7, 6}});
}

TEST_CASE("unsorted chunk aborts the sweep") {
  TempDir dir("rel");
  IoSink sink;
  ExtEdgeList el(dir.path() / "u.bin", 64, 512, &sink, true);
  el.append({5, 9});
  el.append({1, 9});  // decreasing src, never sorted
  el.flush();
  std::vector<std::uint64_t> identity(16);
  for (std::uint64_t i = 0; i < 16; ++i) identity[i] = i;
  CHECK_THROWS_AS(disk_sweep(el, identity, EdgeField::src, &sink), SortednessError);
}

TEST_CASE("pipeline relabel matches oracle pv lookup (scale 10, nb=2, nc=2)") {
  TempDir dir("rel");
  auto cfg = emg::test::small_config(dir, 10, 2, 2, 99);
  run_pipeline(cfg, {true, true, true, false, false});

  const OracleGraph oracle = oracle_generate(cfg);
  std::vector<Edge> got;
  for (std::uint32_t i = 0; i < cfg.nb; ++i)
    for (std::uint32_t j = 0; j < cfg.nc; ++j) {
      ExtEdgeList el(gen_file(cfg, i, j), cfg.block_edges, cfg.chunk_edges(), nullptr, false);
      IoSink sink;
      auto s = el.scan(&sink);
      Edge e;
      while (s->next(e)) got.push_back(e);
    }
  auto expect = oracle.relabeled;
  auto cmp = [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.des < b.des;
  };
  std::sort(got.begin(), got.end(), cmp);
  std::sort(expect.begin(), expect.end(), cmp);
  CHECK(got.size() == expect.size());
  CHECK(got == expect);
}

TEST_CASE("relabel sweep I/O: sequential within bound, zero random") {
  TempDir dir("rel");
  auto cfg = emg::test::small_config(dir, 12, 2, 2, 3);
  const RunManifest m = run_pipeline(cfg, {true, true, true, false, false});

  const std::uint64_t bf_blocks =
      (cfg.bin() * cfg.edge_factor + cfg.block_edges - 1) / cfg.block_edges;
  const double bound = 1.25 * 2.0 * double(bf_blocks);
  for (std::uint32_t i = 0; i < cfg.nb; ++i)
    for (std::uint32_t j = 0; j < cfg.nc; ++j)
      for (int pass = 0; pass < 2; ++pass) {
        const std::string key = "node." + std::to_string(i) + ".relabel.pass" +
                                std::to_string(pass) + ".c" + std::to_string(j);
        CHECK(m.get_u64(key + ".sweep_seq") <= bound);
        CHECK(m.get_u64(key + ".sweep_rand") == 0);
      }
}
