// Distributed random shuffle (the one main-memory phase). Produces this
// node's slice of the distributed permutation vector.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "emgraph/cluster.hpp"
#include "emgraph/rng.hpp"

namespace emg {

// In-place Fisher-Yates. Every order equally likely under an ideal source.
void local_shuffle(std::span<std::uint64_t> buf, RngStream& rng);

// ceil(log_nb(n)) rounds, minimum 1.
std::uint32_t shuffle_rounds(const ClusterConfig& cfg);

// Test hook: called after each round with this node's current sbuf.
using ShuffleObserver =
    std::function<void(std::uint32_t round, std::uint32_t bid, std::span<const std::uint64_t>)>;

// Runs the round loop {shuffle sbuf; all-to-all exchange of nb sub-blocks,
// own sub-block kept by local copy; swap}. Ends with a global barrier and
// stores the slice into ctx.pv.
std::vector<std::uint64_t> distributed_shuffle(NodeCtx& ctx,
                                               const ShuffleObserver& observer = {});

}  // namespace emg
