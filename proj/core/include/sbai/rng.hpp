#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sbai {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Maps a 128-bit counter and a 64-bit key to 128 bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// Reproducible random stream identified by (seed, stream id). The seed is
// the Philox key and the stream id occupies the upper half of the counter,
// so stream r is available without generating streams 0..r-1 and any
// position can be reached with seek(). Satisfies UniformRandomBitGenerator.
class SeededStream {
 public:
  using result_type = std::uint64_t;

  SeededStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open_zero();
  // Standard normal via Box-Muller, cosine branch only: every call consumes
  // exactly two 64-bit words, so call k depends only on (seed, stream, k).
  double gaussian();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  // Number of 64-bit words consumed so far.
  std::uint64_t position() const { return position_; }
  void seek(std::uint64_t position);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
};

}  // namespace sbai
