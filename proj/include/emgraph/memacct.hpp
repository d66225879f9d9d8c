// Cooperative allocation accounting. Buffer-owning structures lease their
// bytes from a named gauge; tests and the manifest read current/peak values.
#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace emg {

class MemGauge {
 public:
  explicit MemGauge(std::string name) : name_(std::move(name)) {}

  void add(std::uint64_t bytes) {
    const std::uint64_t now = current_.fetch_add(bytes) + bytes;
    std::uint64_t peak = peak_.load();
    while (now > peak && !peak_.compare_exchange_weak(peak, now)) {
    }
  }
  void sub(std::uint64_t bytes) { current_.fetch_sub(bytes); }

  std::uint64_t current() const { return current_.load(); }
  std::uint64_t peak() const { return peak_.load(); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::atomic<std::uint64_t> current_{0};
  std::atomic<std::uint64_t> peak_{0};
};

class MemRegistry {
 public:
  MemGauge& gauge(const std::string& name) {
    std::lock_guard lk(m_);
    auto it = gauges_.find(name);
    if (it == gauges_.end())
      it = gauges_.emplace(name, std::make_unique<MemGauge>(name)).first;
    return *it->second;
  }

  std::map<std::string, std::uint64_t> peaks() const {
    std::lock_guard lk(m_);
    std::map<std::string, std::uint64_t> out;
    for (const auto& [k, g] : gauges_) out[k] = g->peak();
    return out;
  }

 private:
  mutable std::mutex m_;
  std::map<std::string, std::unique_ptr<MemGauge>> gauges_;
};

// RAII lease; bytes may be grown while held.
class MemLease {
 public:
  MemLease() = default;
  MemLease(MemGauge& g, std::uint64_t bytes) : gauge_(&g), bytes_(bytes) { g.add(bytes); }
  MemLease(MemLease&& o) noexcept : gauge_(o.gauge_), bytes_(o.bytes_) {
    o.gauge_ = nullptr;
    o.bytes_ = 0;
  }
  MemLease& operator=(MemLease&& o) noexcept {
    release();
    gauge_ = o.gauge_;
    bytes_ = o.bytes_;
    o.gauge_ = nullptr;
    o.bytes_ = 0;
    return *this;
  }
  ~MemLease() { release(); }

  void grow(std::uint64_t more) {
    if (gauge_) gauge_->add(more);
    bytes_ += more;
  }
  void release() {
    if (gauge_) gauge_->sub(bytes_);
    gauge_ = nullptr;
    bytes_ = 0;
  }
  std::uint64_t bytes() const { return bytes_; }

 private:
  MemGauge* gauge_ = nullptr;
  std::uint64_t bytes_ = 0;
};

}  // namespace emg
