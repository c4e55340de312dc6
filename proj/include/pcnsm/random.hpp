#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace pcnsm {

/// Source of the random draws used by the learner and the simulators.
/// Tests substitute scripted sources to pin every draw.
class RandomSource {
public:
  virtual ~RandomSource() = default;

  /// Uniform real in [0, 1).
  virtual double uniform_real() = 0;
  /// Uniform integer in [lo, hi], both inclusive.
  virtual std::size_t uniform_int(std::size_t lo, std::size_t hi) = 0;
  virtual double normal(double mean, double sigma) = 0;
};

/// mt19937_64-backed source. Streams are reproducible for a given seed on a
/// given standard library.
class SeededRandom final : public RandomSource {
public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  double uniform_real() override {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }
  std::size_t uniform_int(std::size_t lo, std::size_t hi) override {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
  }
  double normal(double mean, double sigma) override {
    if (sigma <= 0.0)
      return mean;
    return std::normal_distribution<double>(mean, sigma)(engine_);
  }

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives independent stream seeds from a run seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

} // namespace pcnsm
