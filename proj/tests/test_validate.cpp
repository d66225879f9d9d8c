#include <doctest.h>

#include <fstream>

#include "emgraph/pipeline.hpp"
#include "emgraph/validate.hpp"
#include "support.hpp"

using namespace emg;
using emg::test::TempDir;

TEST_CASE("verify_permutation classifies identity and broken inputs") {
  const std::vector<std::uint64_t> id = {0, 1, 2, 3};
  auto rep = verify_permutation(id, 4);
  CHECK(rep.bijective);
  CHECK(rep.fixed_points == 4);

  const std::vector<std::uint64_t> bad = {1, 1, 2};
  rep = verify_permutation(bad, 3);
  CHECK_FALSE(rep.bijective);
  REQUIRE(!rep.violations.empty());
}

TEST_CASE("shuffle output is bijective across seeds (property run)") {
  TempDir dir("val");
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto cfg = emg::test::small_config(dir, 12, 4, 1, seed);
    const OracleGraph g = oracle_generate(cfg);
    const auto rep = verify_permutation(g.pv, cfg.n());
    CHECK(rep.bijective);
  }
}

TEST_CASE("degree_stats on a worked example") {
  const std::vector<std::uint64_t> offv = {0, 2, 2, 3};
  const DegreeStats st = degree_stats(offv);
  CHECK(st.min == 0);
  CHECK(st.max == 2);
  CHECK(st.mean == doctest::Approx(1.0));
  CHECK(st.max_mean_ratio == doctest::Approx(2.0));
  CHECK(st.median == doctest::Approx(1.0));
  std::uint64_t total = 0;
  for (const auto h : st.histogram) total += h;
  CHECK(total == 3);
}

TEST_CASE("degree_stats on a regular graph gives ratio 1") {
  std::vector<std::uint64_t> offv(17);
  for (std::uint64_t i = 0; i < offv.size(); ++i) offv[i] = 4 * i;
  const DegreeStats st = degree_stats(offv);
  CHECK(st.min == 4);
  CHECK(st.max == 4);
  CHECK(st.max_mean_ratio == doctest::Approx(1.0));
}

TEST_CASE("verify_csr accepts the worked example and flags truncation") {
  CsrGraph g;
  g.n = 8;
  g.bucket = 3;
  g.base = 0;
  g.offv = {0, 2, 2, 3};
  g.adjv = {1, 2, 0};
  const std::vector<Edge> owned = {{0, 1}, {0, 2}, {2, 0}};
  CHECK(verify_csr(g, owned).ok);

  CsrGraph trunc = g;
  trunc.adjv.pop_back();
  const auto rep = verify_csr(trunc, owned);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("oracle guard rejects huge n") {
  TempDir dir("val");
  auto cfg = emg::test::small_config(dir, 10, 1, 1);
  cfg.scale = 23;
  CHECK_THROWS_AS(oracle_generate(cfg), ConfigError);
}

TEST_CASE("validate_run agrees end-to-end (scale 10, nb=2, nc=2, both variants)") {
  for (const CsrVariant variant : {CsrVariant::sorted, CsrVariant::hash}) {
    TempDir dir("val");
    auto cfg = emg::test::small_config(dir, 10, 2, 2, 77);
    cfg.csr_variant = variant;
    run_pipeline(cfg);
    const auto rep = validate_run(cfg);
    const std::string first_diff = rep.diffs.empty() ? std::string() : rep.diffs.front();
    INFO(first_diff);
    CHECK(rep.ok);
  }
}

TEST_CASE("validate_run localizes a corrupted adjacency byte") {
  TempDir dir("val");
  auto cfg = emg::test::small_config(dir, 10, 2, 1, 78);
  run_pipeline(cfg);
  // flip one byte inside node 0's adjacency region
  const auto path = csr_file(cfg, 0);
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekp(48 + (cfg.bucket() + 1) * 8 + 5);
  char b;
  f.seekg(f.tellp());
  f.read(&b, 1);
  b = static_cast<char>(b ^ 0xFF);
  f.seekp(-1, std::ios::cur);
  f.write(&b, 1);
  f.close();
  const auto rep = validate_run(cfg);
  CHECK_FALSE(rep.ok);
}

TEST_CASE("oracle replay is self-consistent at nb=1 nc=1") {
  TempDir dir("val");
  auto cfg = emg::test::small_config(dir, 8, 1, 1, 5);
  const OracleGraph g = oracle_generate(cfg);
  CHECK(g.generated.size() == cfg.total_edges());
  CHECK(g.relabeled.size() == cfg.total_edges());
  CHECK(g.offv.back() == cfg.total_edges());
  for (const Edge& e : g.generated) {
    CHECK(e.src < cfg.n());
    CHECK(e.des < cfg.n());
  }
}
