#include "emgraph/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace emg {

void RunManifest::set(const std::string& key, double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  kv[key] = buf;
}

std::uint64_t RunManifest::get_u64(const std::string& key) const {
  const std::string* v = get(key);
  if (!v) throw std::runtime_error("manifest: missing key " + key);
  return std::stoull(*v);
}

void RunManifest::save_atomic(const std::filesystem::path& path) const {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write manifest: " + tmp.string());
    for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  }
  std::filesystem::rename(tmp, path);
}

RunManifest RunManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
  RunManifest m;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    m.kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return m;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot checksum: " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace emg
