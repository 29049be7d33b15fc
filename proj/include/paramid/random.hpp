#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace paramid {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_stream(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  return splitmix64(h);
}

}  // namespace detail

namespace detail {
// Stream tags keep the sampling domains of the library components disjoint.
inline constexpr std::uint64_t kGainTag = 0x6761696eULL;
inline constexpr std::uint64_t kPairTag = 0x70616972ULL;
inline constexpr std::uint64_t kSobolTag = 0x736f626cULL;
inline constexpr std::uint64_t kDataTag = 0x64617461ULL;
}  // namespace detail

// Deterministic id for a (tag, i, j, k) work item. Estimators derive one
// stream per outer sample from this so that parallel and sequential
// execution draw identical numbers.
inline std::uint64_t stream_id(std::uint64_t tag, std::uint64_t i,
                               std::uint64_t j, std::uint64_t k) {
  std::uint64_t h = detail::splitmix64(tag);
  h = detail::mix_stream(h, i);
  h = detail::mix_stream(h, j);
  h = detail::mix_stream(h, k);
  return h;
}

// Counter-addressed random stream: identical (seed, stream) reproduces the
// identical draw sequence, distinct stream ids give statistically
// independent sequences. Not shareable across threads; fork per task.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {
    const std::uint64_t a = detail::mix_stream(detail::splitmix64(seed), stream);
    engine_.seed(a);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  RandomStream fork(std::uint64_t a) const {
    return RandomStream(seed_, detail::mix_stream(stream_, a));
  }
  RandomStream fork(std::uint64_t a, std::uint64_t b) const {
    return RandomStream(seed_, detail::mix_stream(detail::mix_stream(stream_, a), b));
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  void normal(Eigen::Ref<Eigen::VectorXd> out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal();
  }

  Eigen::VectorXd normal(Eigen::Index n) {
    Eigen::VectorXd out(n);
    normal(out);
    return out;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace paramid
