#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace emg {

template <class T>
std::vector<std::uint8_t> to_bytes(std::span<const T> v) {
  std::vector<std::uint8_t> out(v.size_bytes());
  std::memcpy(out.data(), v.data(), v.size_bytes());
  return out;
}

template <class T>
std::vector<T> from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % sizeof(T) != 0) throw std::runtime_error("payload size mismatch");
  std::vector<T> out(bytes.size() / sizeof(T));
  std::memcpy(out.data(), bytes.data(), bytes.size());
  return out;
}

}  // namespace emg
