#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace hgconc {

// Philox4x32-10 block function (Salmon et al., Random123). Stateless: the
// output is a pure function of (counter, key), which is what makes every
// random decision in this library independent of iteration order and of the
// number of worker threads.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Independent families of draws derived from the same master seed.
enum class StreamDomain : std::uint64_t {
  kVertexOutcome = 1,  // percolation and exposure rounds share this on purpose
  kHypergraph = 2,
  kRootEmbedding = 3,
  kAudit = 4,
  kContinuation = 5,
  kSampling = 6,
};

// Counter-based stream addressed by (seed, domain, stream, round, index).
// `stream` is normally the trial index; `round`/`index` are the exposure
// round and the vertex id. Every coordinate maps to its own Philox block.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamDomain domain, std::uint64_t stream)
      : stream_(stream) {
    const std::uint64_t k =
        splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(domain)));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  }

  std::uint64_t bits(std::uint32_t round, std::uint32_t index) const {
    const auto out = Philox4x32::generate(
        {index, round, static_cast<std::uint32_t>(stream_),
         static_cast<std::uint32_t>(stream_ >> 32)},
        key_);
    return (std::uint64_t{out[1]} << 32) | out[0];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint32_t round, std::uint32_t index) const {
    return static_cast<double>(bits(round, index) >> 11) * 0x1.0p-53;
  }

  std::uint64_t stream() const { return stream_; }

 private:
  Philox4x32::Key key_{};
  std::uint64_t stream_;
};

// Sequential view over a CounterRng: walks the (round, index) plane in order.
// Satisfies UniformRandomBitGenerator.
class SequentialRng {
 public:
  using result_type = std::uint64_t;

  explicit SequentialRng(CounterRng base) : base_(base) {}
  SequentialRng(std::uint64_t seed, StreamDomain domain, std::uint64_t stream)
      : base_(seed, domain, stream) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    const auto v = base_.bits(static_cast<std::uint32_t>(position_ >> 32),
                              static_cast<std::uint32_t>(position_));
    ++position_;
    return v;
  }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 prod = static_cast<unsigned __int128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(prod);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        prod = static_cast<unsigned __int128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(prod);
      }
    }
    return static_cast<std::uint64_t>(prod >> 64);
  }

 private:
  CounterRng base_;
  std::uint64_t position_ = 0;
};

}  // namespace hgconc
