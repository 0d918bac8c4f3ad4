#pragma once

// Seeded sampling primitives. Everything here is built on std::mt19937_64,
// whose output sequence is fixed by the standard, and on hand-written
// transforms, so a (seed, stream_id) pair gives the same draws on every
// platform. The std:: distributions are deliberately not used: their
// algorithms are implementation-defined.
//
// Conventions: Gamma is parametrized by (shape, rate); InverseGamma by
// (shape, scale) with density proportional to x^{-shape-1} exp(-scale/x).

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace dpvs {

/// splitmix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stable key for a child stream. Used for per-chain, per-replicate and
/// per-gene streams so that results never depend on scheduling.
constexpr std::uint64_t derive_stream_id(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Independent stream keyed by (seed, derive_stream_id(stream_id, index)).
  RngStream substream(std::uint64_t index) const {
    return RngStream(seed_, derive_stream_id(stream_id_, index));
  }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via the Marsaglia polar method (the spare is cached).
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  /// Gamma(shape, 1) via Marsaglia & Tsang; shape < 1 uses the boost
  /// G(shape + 1) * U^{1/shape}.
  double standard_gamma(double shape) {
    if (shape < 1.0) {
      const double g = standard_gamma(shape + 1.0);
      return std::exp(std::log(g) + std::log(uniform()) / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = standard_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    const std::uint64_t a = mix64(seed);
    const std::uint64_t b = mix64(a ^ mix64(stream_id ^ 0x6a09e667f3bcc909ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace detail {

inline void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::domain_error(std::string(what) + " must be positive and finite, got " +
                            std::to_string(value));
}

}  // namespace detail

inline double sample_normal(double mean, double variance, RngStream& rng) {
  detail::require_positive(variance, "normal variance");
  return mean + std::sqrt(variance) * rng.standard_normal();
}

inline double sample_gamma(double shape, double rate, RngStream& rng) {
  detail::require_positive(shape, "gamma shape");
  detail::require_positive(rate, "gamma rate");
  return rng.standard_gamma(shape) / rate;
}

inline double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  detail::require_positive(shape, "inverse-gamma shape");
  detail::require_positive(scale, "inverse-gamma scale");
  return scale / rng.standard_gamma(shape);
}

inline double sample_beta_dist(double a, double b, RngStream& rng) {
  detail::require_positive(a, "beta a");
  detail::require_positive(b, "beta b");
  const double x = rng.standard_gamma(a);
  const double y = rng.standard_gamma(b);
  return x / (x + y);
}

inline int sample_bernoulli(double p, RngStream& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("bernoulli probability outside [0,1]: " + std::to_string(p));
  return rng.uniform() < p ? 1 : 0;
}

/// Index drawn with probability proportional to `weights` (unnormalized).
inline std::size_t sample_categorical(std::span<const double> weights, RngStream& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw std::domain_error("categorical weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw std::domain_error("categorical weights sum to zero");
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    acc += weights[k];
    last_positive = k;
    if (target < acc) return k;
  }
  return last_positive;
}

/// Categorical draw from log-weights; the max is subtracted before exponentiating.
/// Entries equal to -inf are allowed (zero weight); +inf and NaN are not.
inline std::size_t sample_categorical_log(std::span<const double> log_weights, RngStream& rng,
                                          std::span<double> scratch) {
  double top = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) {
    if (std::isnan(lw) || lw == std::numeric_limits<double>::infinity())
      throw std::domain_error("categorical log-weights must be < +inf and not NaN");
    if (lw > top) top = lw;
  }
  if (top == -std::numeric_limits<double>::infinity())
    throw std::domain_error("categorical weights sum to zero");
  for (std::size_t k = 0; k < log_weights.size(); ++k) scratch[k] = std::exp(log_weights[k] - top);
  return sample_categorical(scratch.first(log_weights.size()), rng);
}

/// Student-t with location, squared scale and degrees of freedom; the
/// variance is scale2 * dof / (dof - 2) when dof > 2.
inline double sample_student_t(double location, double scale2, double dof, RngStream& rng) {
  detail::require_positive(scale2, "student-t scale2");
  detail::require_positive(dof, "student-t dof");
  const double z = rng.standard_normal();
  const double chi2 = 2.0 * rng.standard_gamma(0.5 * dof);
  return location + std::sqrt(scale2) * z / std::sqrt(chi2 / dof);
}

}  // namespace dpvs
