#pragma once

#include <array>
#include <cstdint>

namespace fracdir {

/// Philox4x32-10 counter-based block function.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key);
};

/// Deterministic generator state: a 64-bit seed (the Philox key), a 64-bit
/// stream id and a 64-bit block counter. Two states with equal fields produce
/// identical sequences.
class RngState {
 public:
  explicit RngState(std::uint64_t seed, std::uint64_t stream = 0,
                    std::uint64_t counter = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  /// Next block to be generated.
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0,1) with 53 random bits.
  double uniform();

  /// State positioned `blocks` blocks further along the same stream, with an
  /// empty buffer.
  RngState advanced(std::uint64_t blocks) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_;
  Philox4x32::Counter buffer_{};
  int buffered_ = 0;
};

}  // namespace fracdir
