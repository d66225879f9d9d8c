// Block-level I/O accounting.
//
// All counters are in blocks of C_e edges (block_bytes = C_e * 16). An
// access is sequential iff its byte offset immediately follows the previous
// access on the same channel; the first access of a fresh channel counts as
// sequential (a stream has to start somewhere). Accesses spanning several
// blocks charge the adjacency rule to the first block only; the rest are
// sequential by construction.
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

namespace emg {

struct IoStats {
  std::uint64_t seq_reads = 0;
  std::uint64_t seq_writes = 0;
  std::uint64_t rand_reads = 0;
  std::uint64_t rand_writes = 0;

  std::uint64_t reads() const { return seq_reads + rand_reads; }
  std::uint64_t writes() const { return seq_writes + rand_writes; }
  std::uint64_t randoms() const { return rand_reads + rand_writes; }
  std::uint64_t total() const { return reads() + writes(); }

  IoStats& operator+=(const IoStats& o) {
    seq_reads += o.seq_reads;
    seq_writes += o.seq_writes;
    rand_reads += o.rand_reads;
    rand_writes += o.rand_writes;
    return *this;
  }
  IoStats operator-(const IoStats& o) const {
    return {seq_reads - o.seq_reads, seq_writes - o.seq_writes,
            rand_reads - o.rand_reads, rand_writes - o.rand_writes};
  }
  friend bool operator==(const IoStats&, const IoStats&) = default;
};

// Thread-safe counter sink shared by the channels of one owner (core/node).
class IoSink {
 public:
  void add(const IoStats& d) {
    seq_reads_ += d.seq_reads;
    seq_writes_ += d.seq_writes;
    rand_reads_ += d.rand_reads;
    rand_writes_ += d.rand_writes;
  }
  IoStats snapshot() const {
    return {seq_reads_.load(), seq_writes_.load(), rand_reads_.load(), rand_writes_.load()};
  }

 private:
  std::atomic<std::uint64_t> seq_reads_{0}, seq_writes_{0}, rand_reads_{0}, rand_writes_{0};
};

// Shared file descriptor with positioned raw I/O.
class BlockDevice {
 public:
  BlockDevice(std::filesystem::path path, std::uint64_t block_bytes, bool truncate);
  ~BlockDevice();
  BlockDevice(const BlockDevice&) = delete;
  BlockDevice& operator=(const BlockDevice&) = delete;

  void pread(std::uint64_t off, void* dst, std::size_t len) const;
  void pwrite(std::uint64_t off, const void* src, std::size_t len);
  void resize(std::uint64_t bytes);
  std::uint64_t size() const;
  std::uint64_t block_bytes() const { return block_bytes_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::uint64_t block_bytes_;
  int fd_ = -1;
};

// One logical sequential stream over a device. Owns its adjacency cursor;
// separate channels over the same device are independent streams, the way a
// real implementation keeps one descriptor per scan.
class FileChannel {
 public:
  FileChannel(std::shared_ptr<BlockDevice> dev, IoSink* sink)
      : dev_(std::move(dev)), sink_(sink) {}

  void read(std::uint64_t off, void* dst, std::size_t len);
  void write(std::uint64_t off, const void* src, std::size_t len);
  BlockDevice& device() { return *dev_; }

 private:
  void account(std::uint64_t off, std::size_t len, bool is_write);

  static constexpr std::uint64_t kFresh = ~std::uint64_t(0);
  std::shared_ptr<BlockDevice> dev_;
  IoSink* sink_;
  std::uint64_t next_off_ = kFresh;
};

}  // namespace emg
