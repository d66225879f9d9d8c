#include <doctest.h>

#include <atomic>
#include <thread>

#include "emgraph/bytes.hpp"
#include "emgraph/cluster.hpp"
#include "support.hpp"

using namespace emg;
using emg::test::TempDir;

TEST_CASE("run_cluster collects per-node results") {
  TempDir dir("cluster");
  auto cfg = emg::test::small_config(dir, 8, 4, 1);
  const auto out = run_cluster(cfg, [](NodeCtx& ctx) { return ctx.bid; });
  REQUIRE(out.size() == 4);
  for (std::uint32_t i = 0; i < 4; ++i) CHECK(out[i] == i);
}

TEST_CASE("run_cluster surfaces the first fatal error") {
  TempDir dir("cluster");
  auto cfg = emg::test::small_config(dir, 8, 2, 1);
  cfg.watchdog_ms = 2000;
  CHECK_THROWS_AS(run_cluster(cfg,
                              [](NodeCtx& ctx) {
                                if (ctx.bid == 1)
                                  throw PipelineError("generate", "injected failure");
                                // node 0 blocks on a message that never comes;
                                // the abort must wake it
                                ctx.recv_any({MsgKind::edge_packet});
                                return 0;
                              }),
                  PipelineError);
}

TEST_CASE("send/recv round-trips payload bytes, self-send included") {
  TempDir dir("cluster");
  auto cfg = emg::test::small_config(dir, 8, 2, 1);
  run_cluster(cfg, [](NodeCtx& ctx) {
    const std::vector<std::uint64_t> data = {1, 2, 3, ctx.bid};
    ctx.send(ctx.bid, MsgKind::edge_packet, to_bytes(std::span<const std::uint64_t>(data)));
    const Message m = ctx.recv_any({MsgKind::edge_packet});
    CHECK(m.source == ctx.bid);
    CHECK(from_bytes<std::uint64_t>(m.payload) == data);
    return 0;
  });
}

TEST_CASE("all-to-all of one block each delivers nb-1 remote messages") {
  TempDir dir("cluster");
  auto cfg = emg::test::small_config(dir, 8, 4, 1);
  run_cluster(cfg, [&](NodeCtx& ctx) {
    std::thread sender([&] {
      for (std::uint32_t j = 0; j < ctx.cfg.nb; ++j)
        if (j != ctx.bid) ctx.send(j, MsgKind::shuffle_block, {std::uint8_t(ctx.bid)});
    });
    std::uint32_t got = 0;
    std::vector<bool> seen(ctx.cfg.nb, false);
    for (std::uint32_t k = 0; k + 1 < ctx.cfg.nb; ++k) {
      const Message m = ctx.recv_any({MsgKind::shuffle_block});
      CHECK(!seen[m.source]);
      seen[m.source] = true;
      ++got;
    }
    sender.join();
    CHECK(got == ctx.cfg.nb - 1);
    return 0;
  });
}

TEST_CASE("per-channel FIFO under stress (sequence-numbered)") {
  TempDir dir("cluster");
  auto cfg = emg::test::small_config(dir, 8, 4, 1);
  cfg.watchdog_ms = 60000;
  constexpr std::uint64_t kPerChannel = 8000;  // 4*3 channels -> ~10^5 messages
  run_cluster(cfg, [&](NodeCtx& ctx) {
    std::thread sender([&] {
      for (std::uint64_t s = 0; s < kPerChannel; ++s)
        for (std::uint32_t j = 0; j < ctx.cfg.nb; ++j) {
          if (j == ctx.bid) continue;
          const std::uint64_t v[1] = {s};
          ctx.send(j, MsgKind::edge_packet, to_bytes(std::span<const std::uint64_t>(v)));
        }
    });
    std::vector<std::uint64_t> next(ctx.cfg.nb, 0);
    bool fifo_ok = true;
    for (std::uint64_t k = 0; k < kPerChannel * (ctx.cfg.nb - 1); ++k) {
      const Message m = ctx.recv_any({MsgKind::edge_packet});
      const auto v = from_bytes<std::uint64_t>(m.payload);
      // strictly in send order per channel
      if (v.size() != 1 || v[0] != next[m.source]) fifo_ok = false;
      ++next[m.source];
    }
    sender.join();
    CHECK(fifo_ok);
    return 0;
  });
}

TEST_CASE("barrier: one participant returns immediately") {
  CancelState cancel;
  WatchBarrier b(1, std::chrono::milliseconds(100), cancel);
  b.arrive_and_wait("solo");  // must not block
}

TEST_CASE("barrier: writes before are visible after, 100 randomized trials") {
  TempDir dir("cluster");
  auto cfg = emg::test::small_config(dir, 8, 1, 8);
  std::atomic<bool> ok{true};
  run_cluster(cfg, [&](NodeCtx& ctx) {
    std::atomic<std::uint32_t> counter{0};
    ctx.parallel_cores([&](std::uint32_t tid) {
      RngStream rng = RngStream::seeded(123).derive(tid);
      for (int trial = 0; trial < 100; ++trial) {
        if (tid == 0) counter.store(0);
        ctx.core_barrier.arrive_and_wait("reset");
        std::this_thread::sleep_for(std::chrono::microseconds(rng.bounded(200)));
        counter.fetch_add(1);
        ctx.core_barrier.arrive_and_wait("trial");
        if (counter.load() != ctx.cfg.nc) ok = false;
        ctx.core_barrier.arrive_and_wait("checked");
      }
    });
    return 0;
  });
  CHECK(ok.load());
}

TEST_CASE("watchdog converts silent deadlock into a diagnosable failure") {
  TempDir dir("cluster");
  auto cfg = emg::test::small_config(dir, 8, 2, 1);
  cfg.watchdog_ms = 300;
  CHECK_THROWS_AS(run_cluster(cfg,
                              [](NodeCtx& ctx) {
                                if (ctx.bid == 0) ctx.global_barrier.arrive_and_wait("lonely");
                                // node 1 never arrives
                                return 0;
                              }),
                  TimeoutError);
  CHECK_THROWS_AS(run_cluster(cfg,
                              [](NodeCtx& ctx) {
                                if (ctx.bid == 0) ctx.recv_any({MsgKind::edge_packet});
                                return 0;
                              }),
                  TimeoutError);
}
