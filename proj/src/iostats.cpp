#include "emgraph/iostats.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <stdexcept>
#include <system_error>

namespace emg {

namespace {

[[noreturn]] void io_fail(const std::string& what, const std::filesystem::path& p) {
  throw std::system_error(errno, std::generic_category(), what + ": " + p.string());
}

}  // namespace

BlockDevice::BlockDevice(std::filesystem::path path, std::uint64_t block_bytes, bool truncate)
    : path_(std::move(path)), block_bytes_(block_bytes) {
  int flags = O_RDWR | O_CREAT | (truncate ? O_TRUNC : 0);
  fd_ = ::open(path_.c_str(), flags, 0644);
  if (fd_ < 0) io_fail("open", path_);
}

BlockDevice::~BlockDevice() {
  if (fd_ >= 0) ::close(fd_);
}

void BlockDevice::pread(std::uint64_t off, void* dst, std::size_t len) const {
  std::size_t done = 0;
  while (done < len) {
    const ssize_t r = ::pread(fd_, static_cast<char*>(dst) + done, len - done,
                              static_cast<off_t>(off + done));
    if (r < 0) io_fail("pread", path_);
    if (r == 0) throw std::runtime_error("pread: short read past eof: " + path_.string());
    done += static_cast<std::size_t>(r);
  }
}

void BlockDevice::pwrite(std::uint64_t off, const void* src, std::size_t len) {
  std::size_t done = 0;
  while (done < len) {
    const ssize_t r = ::pwrite(fd_, static_cast<const char*>(src) + done, len - done,
                               static_cast<off_t>(off + done));
    if (r < 0) io_fail("pwrite", path_);
    done += static_cast<std::size_t>(r);
  }
}

void BlockDevice::resize(std::uint64_t bytes) {
  if (::ftruncate(fd_, static_cast<off_t>(bytes)) != 0) io_fail("ftruncate", path_);
}

std::uint64_t BlockDevice::size() const {
  const off_t end = ::lseek(fd_, 0, SEEK_END);
  if (end < 0) io_fail("lseek", path_);
  return static_cast<std::uint64_t>(end);
}

void FileChannel::account(std::uint64_t off, std::size_t len, bool is_write) {
  if (len == 0) return;
  const std::uint64_t bs = dev_->block_bytes();
  const std::uint64_t nblocks = (off + len - 1) / bs - off / bs + 1;
  const bool adjacent = next_off_ == kFresh || off == next_off_;
  IoStats d;
  if (is_write) {
    d.seq_writes = adjacent ? nblocks : nblocks - 1;
    d.rand_writes = adjacent ? 0 : 1;
  } else {
    d.seq_reads = adjacent ? nblocks : nblocks - 1;
    d.rand_reads = adjacent ? 0 : 1;
  }
  if (sink_) sink_->add(d);
  next_off_ = off + len;
}

void FileChannel::read(std::uint64_t off, void* dst, std::size_t len) {
  account(off, len, false);
  dev_->pread(off, dst, len);
}

void FileChannel::write(std::uint64_t off, const void* src, std::size_t len) {
  account(off, len, true);
  dev_->pwrite(off, src, len);
}

}  // namespace emg
