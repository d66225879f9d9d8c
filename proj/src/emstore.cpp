#include "emgraph/emstore.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <queue>

#include "emgraph/error.hpp"

namespace emg {

static_assert(std::endian::native == std::endian::little,
              "edge files are little-endian; big-endian hosts are unsupported");

// ---------------------------------------------------------------- EdgeStream

EdgeStream::EdgeStream(std::shared_ptr<BlockDevice> dev, std::uint64_t first, std::uint64_t len,
                       std::uint64_t block_edges, IoSink* sink)
    : ch_(std::move(dev), sink), block_edges_(block_edges), pos_(first), end_(first + len) {
  buf_.reserve(block_edges_);
}

const Edge* EdgeStream::peek() {
  if (pos_ >= end_) return nullptr;
  if (pos_ - buf_first_ >= buf_.size() || buf_.empty()) refill();
  return &buf_[pos_ - buf_first_];
}

void EdgeStream::advance() { ++pos_; }

void EdgeStream::refill() {
  buf_first_ = pos_;
  const std::uint64_t take = std::min<std::uint64_t>(block_edges_, end_ - pos_);
  buf_.resize(take);
  ch_.read(pos_ * sizeof(Edge), buf_.data(), take * sizeof(Edge));
}

// --------------------------------------------------------------- ExtEdgeList

ExtEdgeList::ExtEdgeList(std::filesystem::path path, std::uint64_t block_edges,
                         std::uint64_t chunk_edges, IoSink* sink, bool truncate)
    : dev_(std::make_shared<BlockDevice>(std::move(path), block_edges * sizeof(Edge), truncate)),
      append_ch_(dev_, sink),
      read_ch_(dev_, sink),
      write_ch_(dev_, sink),
      block_edges_(block_edges),
      chunk_edges_(chunk_edges) {
  wbuf_.reserve(block_edges_);
  if (!truncate) {
    const std::uint64_t bytes = dev_->size();
    if (bytes % sizeof(Edge) != 0)
      throw PipelineError("emstore", "edge file has partial record: " + dev_->path().string());
    file_edges_ = bytes / sizeof(Edge);
  }
  tags_.assign(chunks().size(), SortTag::none);
}

void ExtEdgeList::append(const Edge& e) {
  wbuf_.push_back(e);
  if (wbuf_.size() == block_edges_) flush();
}

void ExtEdgeList::flush() {
  if (wbuf_.empty()) return;
  append_ch_.write(file_edges_ * sizeof(Edge), wbuf_.data(), wbuf_.size() * sizeof(Edge));
  file_edges_ += wbuf_.size();
  wbuf_.clear();
  tags_.resize(chunks().size(), SortTag::none);
  if (!tags_.empty()) tags_.back() = SortTag::none;  // tail chunk grew
}

SortTag ExtEdgeList::tag(std::uint64_t chunk_index) const {
  return chunk_index < tags_.size() ? tags_[chunk_index] : SortTag::none;
}

void ExtEdgeList::set_tag(std::uint64_t chunk_index, SortTag t) {
  if (tags_.size() < chunks().size()) tags_.resize(chunks().size(), SortTag::none);
  tags_[chunk_index] = t;
}

std::vector<Edge> ExtEdgeList::read_chunk(const ChunkDescriptor& c) {
  std::vector<Edge> out(c.len);
  read_ch_.read(c.offset * sizeof(Edge), out.data(), c.len * sizeof(Edge));
  return out;
}

void ExtEdgeList::write_chunk(const ChunkDescriptor& c, std::span<const Edge> data) {
  if (data.size() != c.len)
    throw PipelineError("emstore", "write_chunk: length mismatch");
  write_ch_.write(c.offset * sizeof(Edge), data.data(), data.size() * sizeof(Edge));
  set_tag(c.index, SortTag::none);
}

void ExtEdgeList::sort_chunk(const ChunkDescriptor& c, EdgeField key, MemGauge* gauge) {
  if (c.len * sizeof(Edge) > 2 * chunk_edges_ * sizeof(Edge))
    throw ConfigError("sort_chunk: chunk exceeds the per-core memory budget");
  MemLease lease;
  if (gauge) lease = MemLease(*gauge, 2 * c.len * sizeof(Edge));
  std::vector<Edge> buf = read_chunk(c);
  stable_sort_edges(buf, key);
  write_chunk(c, buf);
  set_tag(c.index, tag_for(key));
}

std::unique_ptr<EdgeStream> ExtEdgeList::scan(IoSink* sink) const {
  return std::make_unique<EdgeStream>(dev_, 0, file_edges_, block_edges_, sink);
}

std::unique_ptr<EdgeStream> ExtEdgeList::scan_range(std::uint64_t first, std::uint64_t len,
                                                    IoSink* sink) const {
  return std::make_unique<EdgeStream>(dev_, first, len, block_edges_, sink);
}

// -------------------------------------------------------------- sorted merge

namespace {

class MergeStream final : public EdgeSource {
 public:
  MergeStream(std::vector<std::unique_ptr<EdgeSource>> inputs, EdgeField key)
      : inputs_(std::move(inputs)), key_(key), last_key_(inputs_.size(), 0),
        started_(inputs_.size(), false) {
    for (std::uint32_t i = 0; i < inputs_.size(); ++i) push_head(i);
  }

  const Edge* peek() override {
    if (heap_.empty()) return nullptr;
    return inputs_[heap_.top().second]->peek();
  }

  void advance() override {
    const std::uint32_t i = heap_.top().second;
    heap_.pop();
    inputs_[i]->advance();
    push_head(i);
  }

 private:
  void push_head(std::uint32_t i) {
    const Edge* e = inputs_[i]->peek();
    if (!e) return;
    const std::uint64_t k = edge_key(*e, key_);
    if (started_[i] && k < last_key_[i])
      throw SortednessError("sorted_merge: input " + std::to_string(i) +
                            " is not non-decreasing");
    started_[i] = true;
    last_key_[i] = k;
    heap_.push({k, i});
  }

  using Entry = std::pair<std::uint64_t, std::uint32_t>;  // (key, input idx)
  std::vector<std::unique_ptr<EdgeSource>> inputs_;
  EdgeField key_;
  std::vector<std::uint64_t> last_key_;
  std::vector<bool> started_;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
};

}  // namespace

std::unique_ptr<EdgeSource> sorted_merge(std::vector<std::unique_ptr<EdgeSource>> inputs,
                                         EdgeField key) {
  return std::make_unique<MergeStream>(std::move(inputs), key);
}

void stable_sort_edges(std::span<Edge> data, EdgeField key) {
  const std::size_t n = data.size();
  if (n < 2) return;
  std::vector<Edge> tmp(n);
  Edge* src = data.data();
  Edge* dst = tmp.data();
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t a = lo, b = mid, o = lo;
      while (a < mid && b < hi)
        dst[o++] = edge_key(src[b], key) < edge_key(src[a], key) ? src[b++] : src[a++];
      while (a < mid) dst[o++] = src[a++];
      while (b < hi) dst[o++] = src[b++];
    }
    std::swap(src, dst);
  }
  if (src != data.data()) std::memcpy(data.data(), src, n * sizeof(Edge));
}

}  // namespace emg
