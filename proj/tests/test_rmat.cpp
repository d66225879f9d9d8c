#include <doctest.h>

#include <vector>

#include "emgraph/emstore.hpp"
#include "emgraph/rmat.hpp"
#include "support.hpp"

using namespace emg;
using emg::test::TempDir;

TEST_CASE("degenerate quadrants pin the output corner") {
  SUBCASE("all mass on a -> (0,0)") {
    const auto t = kernels::quadrant_thresholds(1.0, 0.0, 0.0);
    RngStream rng = RngStream::seeded(3);
    for (int i = 0; i < 200; ++i) {
      const Edge e = gen_rmat_edge(rng, 4, t);
      CHECK(e.src == 0);
      CHECK(e.des == 0);
    }
  }
  SUBCASE("all mass on d -> (15,15)") {
    const auto t = kernels::quadrant_thresholds(0.0, 0.0, 0.0);
    RngStream rng = RngStream::seeded(3);
    for (int i = 0; i < 200; ++i) {
      const Edge e = gen_rmat_edge(rng, 4, t);
      CHECK(e.src == 15);
      CHECK(e.des == 15);
    }
  }
}

TEST_CASE("gen_rmat_edge consumes exactly scale draws") {
  const auto t = thresholds_for(RmatParams{});
  RngStream rng = RngStream::seeded(11);
  gen_rmat_edge(rng, 13, t);
  CHECK(rng.ctr == 13);
  gen_rmat_edge(rng, 13, t);
  CHECK(rng.ctr == 26);
}

TEST_CASE("all endpoints below 2^scale") {
  const auto t = thresholds_for(RmatParams{});
  for (std::uint32_t scale : {1u, 5u, 20u}) {
    RngStream rng = RngStream::seeded(scale);
    for (int i = 0; i < 1000; ++i) {
      const Edge e = gen_rmat_edge(rng, scale, t);
      CHECK(e.src < (1ull << scale));
      CHECK(e.des < (1ull << scale));
    }
  }
}

TEST_CASE("uniform quadrants pass chi-square over the 2^8 x 2^8 grid") {
  // 10^5 draws over 65536 cells; chi2 crit at 0.001 for dof 65535 = 66659.48
  const auto t = kernels::quadrant_thresholds(0.25, 0.25, 0.25);
  RngStream rng = RngStream::seeded(20240809);
  constexpr int kDraws = 100000;
  std::vector<std::uint32_t> cells(1 << 16, 0);
  std::vector<Edge> batch(kDraws);
  kernels::ref::rmat_fill(rng.key, rng.ctr, 8, t, batch.data(), kDraws);
  for (const Edge& e : batch) ++cells[(e.src << 8) | e.des];
  const double expect = double(kDraws) / 65536.0;
  double chi2 = 0;
  for (const auto c : cells) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 66659.477);
}

TEST_CASE("generate_edgelist block accounting") {
  TempDir dir("rmat");
  IoSink sink;
  const auto t = thresholds_for(RmatParams{});

  SUBCASE("count=0 leaves the store unchanged") {
    ExtEdgeList el(dir.path() / "e0.bin", 256, 2048, &sink, true);
    RngStream rng = RngStream::seeded(1);
    generate_edgelist(el, 0, rng, 10, t);
    CHECK(el.count() == 0);
    CHECK(sink.snapshot().writes() == 0);
  }

  SUBCASE("count=C_e records exactly one block write") {
    IoSink s2;
    ExtEdgeList el(dir.path() / "e1.bin", 256, 2048, &s2, true);
    RngStream rng = RngStream::seeded(1);
    generate_edgelist(el, 256, rng, 10, t);
    CHECK(el.count() == 256);
    CHECK(s2.snapshot().seq_writes == 1);
    CHECK(s2.snapshot().randoms() == 0);
  }

  SUBCASE("ceiling rule across many blocks") {
    IoSink s3;
    ExtEdgeList el(dir.path() / "e2.bin", 256, 2048, &s3, true);
    RngStream rng = RngStream::seeded(1);
    generate_edgelist(el, 10 * 256 + 1, rng, 10, t);
    CHECK(s3.snapshot().seq_writes == 11);
  }
}

TEST_CASE("fixed seed gives byte-identical edge files across runs") {
  TempDir dir("rmat");
  IoSink sink;
  const auto t = thresholds_for(RmatParams{});
  const std::uint64_t count = (1 << 10) * 16;  // scale 10, f 16
  for (int run = 0; run < 2; ++run) {
    ExtEdgeList el(dir.path() / ("run" + std::to_string(run) + ".bin"), 256, 2048, &sink, true);
    RngStream rng = RngStream::seeded(77).derive(stream_tag::generate).derive(0).derive(0);
    generate_edgelist(el, count, rng, 10, t);
  }
  CHECK(emg::test::files_equal(dir.path() / "run0.bin", dir.path() / "run1.bin"));
}

TEST_CASE("emit-both-orientations appends the reversed pair") {
  TempDir dir("rmat");
  IoSink sink;
  const auto t = thresholds_for(RmatParams{});
  ExtEdgeList el(dir.path() / "both.bin", 256, 2048, &sink, true);
  RngStream rng = RngStream::seeded(5);
  generate_edgelist(el, 10, rng, 8, t, /*both=*/true);
  CHECK(el.count() == 20);
  auto s = el.scan(&sink);
  std::vector<Edge> edges;
  Edge e;
  while (s->next(e)) edges.push_back(e);
  for (std::size_t i = 0; i < edges.size(); i += 2) {
    CHECK(edges[i].src == edges[i + 1].des);
    CHECK(edges[i].des == edges[i + 1].src);
  }
}

TEST_CASE("skew: max total degree well above the mean at scale 14") {
  const auto t = thresholds_for(RmatParams{});  // Graph500 defaults
  const std::uint32_t scale = 14;
  const std::uint64_t n = 1ull << scale, m = n * 16;
  std::vector<Edge> batch(m);
  const RngStream rng = RngStream::seeded(1).derive(stream_tag::generate).derive(0).derive(0);
  kernels::ref::rmat_fill(rng.key, rng.ctr, scale, t, batch.data(), m);
  std::vector<std::uint64_t> deg(n, 0);
  for (const Edge& e : batch) {
    ++deg[e.src];
    ++deg[e.des];
  }
  const auto mms = kernels::ref::reduce_minmax_sum(deg.data(), n);
  const double mean = double(mms.sum) / double(n);  // 2m/n = 32
  CHECK(double(mms.max) / mean >= 50.0);
}
