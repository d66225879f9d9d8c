// Simulated cluster runtime: nb node workers over a blocking in-process
// transport with per-channel FIFO and bounded buffering, global and
// per-node barriers with deadlock watchdogs, and on-demand core workers.
#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "emgraph/config.hpp"
#include "emgraph/error.hpp"
#include "emgraph/iostats.hpp"
#include "emgraph/memacct.hpp"
#include "emgraph/rng.hpp"

namespace emg {

enum class MsgKind : std::uint8_t {
  shuffle_block,
  edge_packet,
  permute_request,
  permute_range,
  end_of_stream,
};

struct Message {
  MsgKind kind;
  std::uint32_t source;
  std::vector<std::uint8_t> payload;
};

// Run-wide cancel flag; every blocking wait observes it.
struct CancelState {
  std::mutex m;
  bool cancelled = false;
  std::string reason;

  void cancel(const std::string& why) {
    std::lock_guard lk(m);
    if (!cancelled) {
      cancelled = true;
      reason = why;
    }
  }
  void check() {
    std::lock_guard lk(m);
    if (cancelled) throw CancelledError(reason);
  }
};

class Transport {
 public:
  Transport(std::uint32_t nb, std::uint32_t channel_capacity, std::chrono::milliseconds watchdog,
            std::uint32_t jitter_ms, std::uint64_t jitter_key, CancelState& cancel);

  // Blocks until accepted for ordered delivery; FIFO per (src, dst, kind).
  // Self-sends are a local enqueue.
  void send(std::uint32_t src, std::uint32_t dst, MsgKind kind, std::vector<std::uint8_t> payload);

  // Next message of any of the given kinds, in arrival order.
  Message recv_any(std::uint32_t dst, std::initializer_list<MsgKind> kinds);

  // Next message of the given kind from one specific sender.
  Message recv_from(std::uint32_t dst, std::uint32_t src, MsgKind kind);

  void abort(const std::string& reason);

 private:
  struct Inbox {
    std::mutex m;
    std::condition_variable cv_recv, cv_send;
    std::deque<Message> q;
    std::map<std::pair<std::uint32_t, MsgKind>, std::uint32_t> in_flight;
  };

  std::vector<std::unique_ptr<Inbox>> inboxes_;
  std::uint32_t capacity_;
  std::chrono::milliseconds watchdog_;
  std::uint32_t jitter_ms_;
  std::uint64_t jitter_key_;
  std::atomic<std::uint64_t> jitter_ctr_{0};
  CancelState& cancel_;
};

// Reusable counted barrier; a missing participant surfaces as TimeoutError.
class WatchBarrier {
 public:
  WatchBarrier(std::uint32_t parties, std::chrono::milliseconds timeout, CancelState& cancel)
      : parties_(parties), timeout_(timeout), cancel_(&cancel) {}

  void arrive_and_wait(const char* tag);

 private:
  std::mutex m_;
  std::condition_variable cv_;
  std::uint32_t parties_;
  std::uint32_t arrived_ = 0;
  std::uint64_t generation_ = 0;
  std::chrono::milliseconds timeout_;
  CancelState* cancel_;
};

struct PhaseIo {
  IoStats stats;
  std::uint64_t wall_ms = 0;
};

// Per-node state handed to the phase procedures.
struct NodeCtx {
  const ClusterConfig& cfg;
  std::uint32_t bid;
  Transport& net;
  WatchBarrier& global_barrier;
  CancelState& cancel;
  WatchBarrier core_barrier;

  std::vector<std::uint64_t> pv;  // this node's permutation slice after shuffle

  // I/O sinks: one per core plus one for node-level files.
  std::vector<std::unique_ptr<IoSink>> core_io;
  IoSink node_io;
  MemRegistry mem;
  std::map<std::string, std::uint64_t> metrics;
  std::mutex metrics_mutex;

  NodeCtx(const ClusterConfig& c, std::uint32_t id, Transport& t, WatchBarrier& g,
          CancelState& cx)
      : cfg(c), bid(id), net(t), global_barrier(g), cancel(cx),
        core_barrier(c.nc, std::chrono::milliseconds(c.effective_watchdog_ms()), cx) {
    for (std::uint32_t j = 0; j < cfg.nc; ++j) core_io.push_back(std::make_unique<IoSink>());
  }

  std::filesystem::path node_dir() const { return cfg.node_dir(bid); }
  std::filesystem::path core_dir(std::uint32_t cid) const { return cfg.core_dir(bid, cid); }

  void send(std::uint32_t dst, MsgKind kind, std::vector<std::uint8_t> payload) {
    net.send(bid, dst, kind, std::move(payload));
  }
  Message recv_any(std::initializer_list<MsgKind> kinds) { return net.recv_any(bid, kinds); }
  Message recv_from(std::uint32_t src, MsgKind kind) { return net.recv_from(bid, src, kind); }

  void record(const std::string& key, std::uint64_t value) {
    std::lock_guard lk(metrics_mutex);
    metrics[key] = value;
  }

  // Runs f(tid) on nc worker threads and joins; first exception wins.
  void parallel_cores(const std::function<void(std::uint32_t)>& f);

  // Sum of all core sinks plus the node sink.
  IoStats io_snapshot() const {
    IoStats total = node_io.snapshot();
    for (const auto& s : core_io) total += s->snapshot();
    return total;
  }
};

// Spawns nb node workers, runs `program` on each, collects results or the
// first fatal error (other workers are cancelled).
template <class F>
auto run_cluster(const ClusterConfig& cfg, F program)
    -> std::vector<decltype(program(std::declval<NodeCtx&>()))>;

// Non-template core used by the template below.
void run_cluster_raw(const ClusterConfig& cfg,
                     const std::function<void(NodeCtx&)>& per_node);

template <class F>
auto run_cluster(const ClusterConfig& cfg, F program)
    -> std::vector<decltype(program(std::declval<NodeCtx&>()))> {
  using R = decltype(program(std::declval<NodeCtx&>()));
  std::vector<R> results(cfg.nb);
  run_cluster_raw(cfg, [&](NodeCtx& ctx) { results[ctx.bid] = program(ctx); });
  return results;
}

}  // namespace emg
