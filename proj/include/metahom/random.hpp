#pragma once

#include <cstdint>
#include <random>

namespace metahom {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// A seeded generator stream. The pair (seed, stream_id) fully determines the
// sequence; streams are derived by hashing so no two ids share state and the
// result does not depend on the order in which streams are created.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

inline RngStream derive_substream(std::uint64_t seed, std::uint64_t index) {
  return RngStream(seed, index);
}

double sample_normal(RngStream& s, double mean, double sd);
std::int64_t sample_poisson(RngStream& s, double lambda);
std::int64_t sample_binomial(RngStream& s, std::int64_t n, double p);

}  // namespace metahom
