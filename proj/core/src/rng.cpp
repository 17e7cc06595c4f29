#include "sbai/rng.hpp"

#include <cmath>
#include <numbers>

namespace sbai {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kWeyl0;
      k[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

SeededStream::result_type SeededStream::operator()() {
  // Each block yields two words; recomputing the block per word keeps the
  // object stateless apart from the position.
  const std::uint64_t block = position_ >> 1;
  const PhiloxCounter out = philox4x32_10(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  const unsigned half = static_cast<unsigned>(position_ & 1u) * 2;
  ++position_;
  return static_cast<std::uint64_t>(out[half]) | (static_cast<std::uint64_t>(out[half + 1]) << 32);
}

double SeededStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double SeededStream::uniform_open_zero() {
  return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
}

double SeededStream::gaussian() {
  const double u1 = uniform_open_zero();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SeededStream::seek(std::uint64_t position) { position_ = position; }

}  // namespace sbai
