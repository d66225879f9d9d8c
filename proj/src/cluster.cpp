#include "emgraph/cluster.hpp"

#include <algorithm>
#include <atomic>

namespace emg {

Transport::Transport(std::uint32_t nb, std::uint32_t channel_capacity,
                     std::chrono::milliseconds watchdog, std::uint32_t jitter_ms,
                     std::uint64_t jitter_key, CancelState& cancel)
    : capacity_(channel_capacity), watchdog_(watchdog), jitter_ms_(jitter_ms),
      jitter_key_(jitter_key), cancel_(cancel) {
  for (std::uint32_t i = 0; i < nb; ++i) inboxes_.push_back(std::make_unique<Inbox>());
}

void Transport::send(std::uint32_t src, std::uint32_t dst, MsgKind kind,
                     std::vector<std::uint8_t> payload) {
  if (dst >= inboxes_.size())
    throw PipelineError("transport", "send to unknown node " + std::to_string(dst));
  if (jitter_ms_ > 0) {
    // Randomized delivery delay; perturbs cross-channel interleaving only.
    const std::uint64_t draw = mix64(jitter_key_ + (jitter_ctr_.fetch_add(1) + 1) * kSplitmixGamma);
    std::this_thread::sleep_for(std::chrono::microseconds((draw % (jitter_ms_ * 1000ull)) + 1));
  }
  Inbox& box = *inboxes_[dst];
  std::unique_lock lk(box.m);
  const auto chan = std::make_pair(src, kind);
  while (box.in_flight[chan] >= capacity_) {
    cancel_.check();
    if (box.cv_send.wait_for(lk, watchdog_) == std::cv_status::timeout) {
      cancel_.check();
      throw TimeoutError("transport send watchdog: channel " + std::to_string(src) + "->" +
                         std::to_string(dst) + " blocked; receiver likely gone");
    }
  }
  box.in_flight[chan]++;
  box.q.push_back(Message{kind, src, std::move(payload)});
  box.cv_recv.notify_all();
}

Message Transport::recv_any(std::uint32_t dst, std::initializer_list<MsgKind> kinds) {
  Inbox& box = *inboxes_[dst];
  std::unique_lock lk(box.m);
  for (;;) {
    cancel_.check();
    auto it = std::find_if(box.q.begin(), box.q.end(), [&](const Message& m) {
      return std::find(kinds.begin(), kinds.end(), m.kind) != kinds.end();
    });
    if (it != box.q.end()) {
      Message m = std::move(*it);
      box.q.erase(it);
      box.in_flight[{m.source, m.kind}]--;
      box.cv_send.notify_all();
      return m;
    }
    if (box.cv_recv.wait_for(lk, watchdog_) == std::cv_status::timeout) {
      cancel_.check();
      throw TimeoutError("transport recv watchdog on node " + std::to_string(dst) +
                         ": expected message never arrived (deadlock or lost sender)");
    }
  }
}

Message Transport::recv_from(std::uint32_t dst, std::uint32_t src, MsgKind kind) {
  Inbox& box = *inboxes_[dst];
  std::unique_lock lk(box.m);
  for (;;) {
    cancel_.check();
    auto it = std::find_if(box.q.begin(), box.q.end(), [&](const Message& m) {
      return m.kind == kind && m.source == src;
    });
    if (it != box.q.end()) {
      Message m = std::move(*it);
      box.q.erase(it);
      box.in_flight[{m.source, m.kind}]--;
      box.cv_send.notify_all();
      return m;
    }
    if (box.cv_recv.wait_for(lk, watchdog_) == std::cv_status::timeout) {
      cancel_.check();
      throw TimeoutError("transport recv watchdog on node " + std::to_string(dst) +
                         ": message from node " + std::to_string(src) + " never arrived");
    }
  }
}

void Transport::abort(const std::string& reason) {
  cancel_.cancel(reason);
  for (auto& box : inboxes_) {
    std::lock_guard lk(box->m);
    box->cv_recv.notify_all();
    box->cv_send.notify_all();
  }
}

void WatchBarrier::arrive_and_wait(const char* tag) {
  std::unique_lock lk(m_);
  const std::uint64_t gen = generation_;
  if (++arrived_ == parties_) {
    arrived_ = 0;
    ++generation_;
    cv_.notify_all();
    return;
  }
  while (generation_ == gen) {
    if (cancel_) cancel_->check();
    if (cv_.wait_for(lk, timeout_) == std::cv_status::timeout) {
      if (cancel_) cancel_->check();
      if (generation_ != gen) return;
      throw TimeoutError(std::string("barrier '") + tag +
                         "': participant missing (deadlock watchdog)");
    }
  }
}

void NodeCtx::parallel_cores(const std::function<void(std::uint32_t)>& f) {
  if (cfg.nc == 1) {
    f(0);
    return;
  }
  std::vector<std::thread> workers;
  std::mutex err_m;
  std::exception_ptr first_err;
  for (std::uint32_t tid = 0; tid < cfg.nc; ++tid) {
    workers.emplace_back([&, tid] {
      try {
        f(tid);
      } catch (...) {
        {
          std::lock_guard lk(err_m);
          if (!first_err) first_err = std::current_exception();
        }
        // Unblock siblings stuck on the core barrier or transport.
        net.abort("core worker failed on node " + std::to_string(bid));
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_err) std::rethrow_exception(first_err);
}

void run_cluster_raw(const ClusterConfig& cfg, const std::function<void(NodeCtx&)>& per_node) {
  CancelState cancel;
  const auto watchdog = std::chrono::milliseconds(cfg.effective_watchdog_ms());
  Transport net(cfg.nb, /*channel_capacity=*/2, watchdog, cfg.jitter_ms,
                RngStream::seeded(cfg.seed).derive(stream_tag::jitter).key, cancel);
  WatchBarrier global(cfg.nb, watchdog, cancel);

  std::vector<std::unique_ptr<NodeCtx>> ctxs;
  for (std::uint32_t i = 0; i < cfg.nb; ++i)
    ctxs.push_back(std::make_unique<NodeCtx>(cfg, i, net, global, cancel));

  std::vector<std::thread> nodes;
  std::mutex err_m;
  std::exception_ptr first_err;
  for (std::uint32_t i = 0; i < cfg.nb; ++i) {
    nodes.emplace_back([&, i] {
      try {
        per_node(*ctxs[i]);
      } catch (const CancelledError&) {
        // somebody else failed first; their error is reported
      } catch (...) {
        {
          std::lock_guard lk(err_m);
          if (!first_err) first_err = std::current_exception();
        }
        net.abort("node " + std::to_string(i) + " failed");
      }
    });
  }
  for (auto& t : nodes) t.join();
  if (first_err) std::rethrow_exception(first_err);
}

}  // namespace emg
