#include "metahom/random.hpp"

#include <cmath>
#include <string>

#include "metahom/errors.hpp"
#include "metahom/special_functions.hpp"

namespace metahom {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(splitmix64(splitmix64(seed) ^ splitmix64(~stream_id))) {}

double RngStream::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_normal(RngStream& s, double mean, double sd) {
  if (!(sd >= 0.0) || !std::isfinite(mean) || !std::isfinite(sd))
    throw DomainError("sample_normal: sd must be finite and >= 0");
  const double z = normal_quantile(s.uniform());
  return sd == 0.0 ? mean : mean + sd * z;
}

namespace {

// Inversion from the mode outward: F(mode) is evaluated once, then the pmf is
// walked down or up until the uniform is covered.
std::int64_t poisson_from_mode(double u, double lambda) {
  const auto mode = static_cast<std::int64_t>(std::floor(lambda));
  const double log_pmf_mode =
      mode * std::log(lambda) - lambda - log_gamma(mode + 1.0);
  const double pmf_mode = std::exp(log_pmf_mode);
  // P(X <= k) = Q(k + 1, lambda)
  double cdf = reg_gamma_q(mode + 1.0, lambda);
  if (u <= cdf) {
    std::int64_t k = mode;
    double pmf = pmf_mode;
    while (k > 0) {
      const double below = cdf - pmf;
      if (u > below) break;
      cdf = below;
      pmf *= static_cast<double>(k) / lambda;
      --k;
    }
    return k;
  }
  std::int64_t k = mode;
  double pmf = pmf_mode;
  while (u > cdf && pmf > 0.0) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

}  // namespace

std::int64_t sample_poisson(RngStream& s, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("sample_poisson: lambda must be positive and finite");
  const double u = s.uniform();
  if (lambda > 60.0) return poisson_from_mode(u, lambda);
  double pmf = std::exp(-lambda);
  double cdf = pmf;
  std::int64_t k = 0;
  while (u > cdf) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    if (pmf <= 0.0) break;  // cdf rounding shortfall in the far tail
    cdf += pmf;
  }
  return k;
}

std::int64_t sample_binomial(RngStream& s, std::int64_t n, double p) {
  if (n < 0 || !(p >= 0.0 && p <= 1.0))
    throw DomainError("sample_binomial: need n >= 0 and p in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(s, n, 1.0 - p);

  const double q = 1.0 - p;
  const double log_p0 = static_cast<double>(n) * std::log1p(-p);
  if (log_p0 < -700.0) {
    // pmf(0) underflows; fall back to summing Bernoulli trials.
    std::int64_t k = 0;
    for (std::int64_t i = 0; i < n; ++i) k += s.uniform() < p ? 1 : 0;
    return k;
  }
  const double u = s.uniform();
  const double ratio = p / q;
  double pmf = std::exp(log_p0);
  double cdf = pmf;
  std::int64_t k = 0;
  while (u > cdf && k < n) {
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
    cdf += pmf;
  }
  return k;
}

}  // namespace metahom
