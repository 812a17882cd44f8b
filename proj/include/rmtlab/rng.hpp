// Philox4x32-10 counter-based generator (Salmon et al., Random123).
//
// Stream layout: key = master_seed (two 32-bit words); counter words
// {0,1} = block index within the stream, {2,3} = replicate index. The map
// (master_seed, replicate_index) -> (key, counter high half) is therefore
// injective, and replicate r's draws never depend on how replicates were
// scheduled.
#pragma once

#include <array>
#include <cstdint>

namespace rmtlab {

struct StreamSeed {
  std::uint64_t master_seed = 0;
  std::uint64_t replicate_index = 0;
  auto operator<=>(const StreamSeed&) const = default;
};

class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Block bijection(Block ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += 0x9E3779B9u;
        key[1] += 0xBB67AE85u;
      }
      const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

/// Sequential view over one replicate's Philox stream.
class ReplicateStream {
 public:
  explicit ReplicateStream(StreamSeed seed)
      : key_{static_cast<std::uint32_t>(seed.master_seed), static_cast<std::uint32_t>(seed.master_seed >> 32)},
        replicate_(seed.replicate_index) {}

  std::uint64_t next_u64() {
    if (lane_ == 2) refill();
    const std::uint64_t out = (std::uint64_t{buffer_[2 * lane_]} << 32) | buffer_[2 * lane_ + 1];
    ++lane_;
    return out;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double next_open_closed() { return 1.0 - next_double(); }

  std::uint64_t blocks_used() const { return block_; }

 private:
  void refill() {
    buffer_ = Philox4x32::bijection({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                                     static_cast<std::uint32_t>(replicate_),
                                     static_cast<std::uint32_t>(replicate_ >> 32)},
                                    key_);
    ++block_;
    lane_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t replicate_;
  std::uint64_t block_ = 0;
  Philox4x32::Block buffer_{};
  int lane_ = 2;
};

}  // namespace rmtlab
