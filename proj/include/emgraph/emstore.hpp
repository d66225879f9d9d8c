// External-memory edgelist: append-only chunked storage with bounded-memory
// chunk sort, k-way sorted merge, block-buffered scan streams and I/O
// accounting. There is deliberately no delete operation.
#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "emgraph/core.hpp"
#include "emgraph/iostats.hpp"
#include "emgraph/memacct.hpp"

namespace emg {

enum class SortTag : std::uint8_t { none, by_src, by_des };

inline SortTag tag_for(EdgeField f) {
  return f == EdgeField::src ? SortTag::by_src : SortTag::by_des;
}

// Pull interface shared by plain scans and merges.
class EdgeSource {
 public:
  virtual ~EdgeSource() = default;
  virtual const Edge* peek() = 0;  // nullptr at end of stream
  virtual void advance() = 0;

  bool next(Edge& out) {
    const Edge* e = peek();
    if (!e) return false;
    out = *e;
    advance();
    return true;
  }
};

class ExtEdgeList;

// Block-buffered scan over an element range of a list's device. Reading n
// elements costs ceil(n / C_e) block reads on its own channel.
class EdgeStream final : public EdgeSource {
 public:
  EdgeStream(std::shared_ptr<BlockDevice> dev, std::uint64_t first, std::uint64_t len,
             std::uint64_t block_edges, IoSink* sink);

  const Edge* peek() override;
  void advance() override;
  std::uint64_t remaining() const { return end_ - pos_; }

 private:
  void refill();

  FileChannel ch_;
  std::vector<Edge> buf_;
  std::uint64_t block_edges_;
  std::uint64_t pos_, end_;   // absolute element indices
  std::uint64_t buf_first_ = 0;
};

class ExtEdgeList {
 public:
  ExtEdgeList(std::filesystem::path path, std::uint64_t block_edges, std::uint64_t chunk_edges,
              IoSink* sink, bool truncate);

  void append(const Edge& e);
  void flush();

  std::uint64_t count() const { return file_edges_ + wbuf_.size(); }
  std::uint64_t chunk_edges() const { return chunk_edges_; }
  std::uint64_t block_edges() const { return block_edges_; }
  std::vector<ChunkDescriptor> chunks() const { return chunk_partition(count(), chunk_edges_); }
  SortTag tag(std::uint64_t chunk_index) const;

  std::vector<Edge> read_chunk(const ChunkDescriptor& c);
  void write_chunk(const ChunkDescriptor& c, std::span<const Edge> data);

  // Stable in-memory sort of one chunk; ceil(len/C_e) block reads + the same
  // writes; working memory = 2 * chunk bytes, leased from `gauge`.
  void sort_chunk(const ChunkDescriptor& c, EdgeField key, MemGauge* gauge = nullptr);

  std::unique_ptr<EdgeStream> scan(IoSink* sink) const;
  std::unique_ptr<EdgeStream> scan_range(std::uint64_t first, std::uint64_t len,
                                         IoSink* sink) const;

  std::shared_ptr<BlockDevice> device() const { return dev_; }
  const std::filesystem::path& path() const { return dev_->path(); }

 private:
  void set_tag(std::uint64_t chunk_index, SortTag t);

  std::shared_ptr<BlockDevice> dev_;
  FileChannel append_ch_, read_ch_, write_ch_;
  std::vector<Edge> wbuf_;
  std::uint64_t file_edges_ = 0;
  std::uint64_t block_edges_, chunk_edges_;
  std::vector<SortTag> tags_;
};

// K-way merge of individually sorted inputs; non-decreasing on `key`, ties
// broken by input index. Aborts if an input turns out unsorted mid-merge.
std::unique_ptr<EdgeSource> sorted_merge(std::vector<std::unique_ptr<EdgeSource>> inputs,
                                         EdgeField key);

// Concatenation of sources, in order.
class ChainStream final : public EdgeSource {
 public:
  explicit ChainStream(std::vector<std::unique_ptr<EdgeSource>> inputs)
      : inputs_(std::move(inputs)) {}

  const Edge* peek() override {
    while (cur_ < inputs_.size()) {
      if (const Edge* e = inputs_[cur_]->peek()) return e;
      ++cur_;
    }
    return nullptr;
  }
  void advance() override { inputs_[cur_]->advance(); }

 private:
  std::vector<std::unique_ptr<EdgeSource>> inputs_;
  std::size_t cur_ = 0;
};

// Stable bottom-up merge sort with an explicit ping-pong buffer.
void stable_sort_edges(std::span<Edge> data, EdgeField key);

}  // namespace emg
