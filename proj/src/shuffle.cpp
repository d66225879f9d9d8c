#include "emgraph/shuffle.hpp"

#include <numeric>
#include <thread>

#include "emgraph/bytes.hpp"

namespace emg {

void local_shuffle(std::span<std::uint64_t> buf, RngStream& rng) {
  for (std::uint64_t i = buf.size(); i > 1; --i) {
    const std::uint64_t j = rng.bounded(i);
    std::swap(buf[i - 1], buf[j]);
  }
}

std::uint32_t shuffle_rounds(const ClusterConfig& cfg) {
  if (cfg.nb == 1) return 1;
  std::uint32_t log_nb = 0;
  for (std::uint32_t v = cfg.nb; v > 1; v >>= 1) ++log_nb;
  return (cfg.scale + log_nb - 1) / log_nb;  // ceil(log_nb(n)), n = 2^scale
}

std::vector<std::uint64_t> distributed_shuffle(NodeCtx& ctx, const ShuffleObserver& observer) {
  const ClusterConfig& cfg = ctx.cfg;
  const std::uint64_t B = cfg.bucket();
  const std::uint64_t sub = B / cfg.nb;  // exchange stride; Alg. send indexes nb equal parts

  MemLease lease(ctx.mem.gauge("shuffle.bufs"), 2 * B * sizeof(std::uint64_t));
  std::vector<std::uint64_t> sbuf(B), rbuf(cfg.nb == 1 ? 0 : B);
  std::iota(sbuf.begin(), sbuf.end(), ctx.bid * B);

  const RngStream node_root =
      RngStream::seeded(cfg.seed).derive(stream_tag::shuffle).derive(ctx.bid);
  const std::uint32_t rounds = shuffle_rounds(cfg);

  for (std::uint32_t r = 0; r < rounds; ++r) {
    RngStream rng = node_root.derive(r);
    local_shuffle(sbuf, rng);

    if (cfg.nb > 1) {
      // k:1 pattern: a send worker feeds the peers while this worker gathers.
      std::thread sender([&] {
        for (std::uint32_t j = 0; j < cfg.nb; ++j) {
          if (j == ctx.bid) continue;
          ctx.send(j, MsgKind::shuffle_block,
                   to_bytes(std::span<const std::uint64_t>(sbuf.data() + j * sub, sub)));
        }
      });
      std::copy_n(sbuf.data() + ctx.bid * sub, sub, rbuf.data() + ctx.bid * sub);
      for (std::uint32_t j = 0; j < cfg.nb; ++j) {
        if (j == ctx.bid) continue;
        Message m = ctx.recv_from(j, MsgKind::shuffle_block);
        auto block = from_bytes<std::uint64_t>(m.payload);
        if (block.size() != sub)
          throw PipelineError("shuffle", "sub-block size mismatch from node " +
                                             std::to_string(m.source));
        std::copy(block.begin(), block.end(), rbuf.begin() + j * sub);
      }
      sender.join();
      std::swap(sbuf, rbuf);
    }
    if (observer) observer(r, ctx.bid, sbuf);
  }

  ctx.global_barrier.arrive_and_wait("shuffle");
  ctx.pv = sbuf;
  return sbuf;
}

}  // namespace emg
