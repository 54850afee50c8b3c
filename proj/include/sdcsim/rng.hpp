#pragma once
#include <cstdint>

// Deterministic random streams (SplitMix64 family).
//
// Every random decision in the simulator is drawn from a stream whose seed is
// derived as  mix(mix(mix(root, kind), node), period) , so:
//   - a run is a pure function of the root seed,
//   - adding or removing observers/trace output never shifts any draw,
//   - per-(node, period) draws are independent of event processing order.
//
// Draw order inside a node-period stream is fixed: first the event offset,
// then (only if the node is awake and inactive at its event) the spontaneous
// wake-up draw, then one loss draw per awake in-range candidate in ascending
// node id, consumed at send time from the *sender's* stream.

namespace sdc::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t finalize(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seed combiner (boost-style hash fold followed by the SplitMix64 finalizer).
inline constexpr std::uint64_t mix(std::uint64_t h, std::uint64_t w) noexcept {
  h ^= w + kGolden + (h << 6) + (h >> 2);
  return finalize(h);
}

class Stream {
 public:
  constexpr explicit Stream(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next_u64() noexcept {
    state_ += kGolden;
    return finalize(state_);
  }

  // Uniform double in [0, 1), 53 mantissa bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

inline constexpr std::uint64_t kKindTopology = 0;
inline constexpr std::uint64_t kKindNodePeriod = 1;

inline constexpr Stream topology_stream(std::uint64_t root, std::uint64_t node) noexcept {
  return Stream(mix(mix(mix(root, kKindTopology), node), 0));
}

inline constexpr Stream node_period_stream(std::uint64_t root, std::uint64_t node,
                                           std::uint64_t period) noexcept {
  return Stream(mix(mix(mix(root, kKindNodePeriod), node), period));
}

}  // namespace sdc::rng
