// Drives the installed binary and checks exit codes and output shape.
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "emgraph/csr.hpp"
#include "emgraph/manifest.hpp"
#include "support.hpp"

using emg::test::TempDir;

namespace {

struct CmdResult {
  int code;
  std::string output;
};

CmdResult run_cmd(const std::string& args, const TempDir& dir) {
  const std::string log = (dir.path() / "cmd.log").string();
  const std::string cmd = std::string(EMGRAPH_BIN) + " " + args + " > " + log + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(raw), ss.str()};
}

std::string base_flags(const TempDir& dir) {
  return "--scale 10 --nodes 2 --cores 2 --seed 7 --mem-per-core 65536 --block-edges 256 "
         "--packet-bytes 4096 --workdir " +
         (dir.path() / "w").string();
}

}  // namespace

TEST_CASE("generate / validate / stats round trip") {
  TempDir dir("cli");
  auto g = run_cmd("generate " + base_flags(dir), dir);
  INFO(g.output);
  REQUIRE(g.code == 0);
  CHECK(std::filesystem::exists(dir.path() / "w" / "manifest.txt"));

  auto v = run_cmd("validate --workdir " + (dir.path() / "w").string(), dir);
  INFO(v.output);
  CHECK(v.code == 0);
  CHECK(v.output.find("OK") != std::string::npos);

  auto s = run_cmd("stats --workdir " + (dir.path() / "w").string(), dir);
  INFO(s.output);
  CHECK(s.code == 0);
  CHECK(s.output.find("max/mean") != std::string::npos);
  CHECK(s.output.find("seq_reads") != std::string::npos);
  CHECK(s.output.find("generate,seq_writes,") != std::string::npos);  // plot-ready rows
}

TEST_CASE("config validation failures exit 2") {
  TempDir dir("cli");
  CHECK(run_cmd("generate --scale 10 --nodes 3 --workdir " + dir.str(), dir).code == 2);
  CHECK(run_cmd("generate --scale 10 --rmat-a 0.9 --workdir " + dir.str(), dir).code == 2);
  CHECK(run_cmd("generate --csr-variant sorted --redistribute unordered --workdir " +
                    dir.str(),
                dir)
            .code == 2);
}

TEST_CASE("validate on a missing workdir exits 3") {
  TempDir dir("cli");
  CHECK(run_cmd("validate --workdir " + (dir.path() / "nothing-here").string(), dir).code == 3);
  CHECK(run_cmd("stats --workdir " + (dir.path() / "nothing-here").string(), dir).code == 3);
}

TEST_CASE("corrupting an output byte flips validate to exit 1") {
  TempDir dir("cli");
  REQUIRE(run_cmd("generate " + base_flags(dir), dir).code == 0);
  const auto csr = dir.path() / "w" / "n0" / "csr.bin";
  {
    std::fstream f(csr, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    char b = 'X';
    f.write(&b, 1);
  }
  auto v = run_cmd("validate --workdir " + (dir.path() / "w").string(), dir);
  CHECK(v.code == 1);
  CHECK(v.output.find("MISMATCH") != std::string::npos);
}

TEST_CASE("rerun with the same seed reproduces manifest checksums") {
  TempDir d1("cli"), d2("cli");
  REQUIRE(run_cmd("generate " + base_flags(d1), d1).code == 0);
  REQUIRE(run_cmd("generate " + base_flags(d2), d2).code == 0);
  const auto m1 = emg::RunManifest::load(d1.path() / "w" / "manifest.txt");
  const auto m2 = emg::RunManifest::load(d2.path() / "w" / "manifest.txt");
  for (const auto& [k, v] : m1.kv) {
    if (k.rfind("checksum.", 0) == 0) {
      REQUIRE(m2.get(k) != nullptr);
      CHECK(*m2.get(k) == v);
    }
  }
}

TEST_CASE("phases can run one at a time against the same workdir") {
  TempDir dir("cli");
  const std::string flags = base_flags(dir);
  for (const char* phase : {"shuffle", "generate", "relabel", "redistribute", "csr"}) {
    auto r = run_cmd("generate " + flags + " --phase " + phase, dir);
    INFO(phase, ": ", r.output);
    REQUIRE(r.code == 0);
  }
  auto v = run_cmd("validate --workdir " + (dir.path() / "w").string(), dir);
  INFO(v.output);
  CHECK(v.code == 0);
}

TEST_CASE("dump-permutation writes n little-endian u64 forming a bijection") {
  TempDir dir("cli");
  const auto dump = dir.path() / "pv.dump";
  REQUIRE(run_cmd("generate " + base_flags(dir) + " --phase shuffle --dump-permutation " +
                      dump.string(),
                  dir)
              .code == 0);
  const auto bytes = emg::test::read_all(dump);
  REQUIRE(bytes.size() == (1 << 10) * 8);
  std::vector<std::uint64_t> pv(1 << 10);
  std::memcpy(pv.data(), bytes.data(), bytes.size());
  std::sort(pv.begin(), pv.end());
  for (std::uint64_t i = 0; i < pv.size(); ++i) CHECK(pv[i] == i);
}
