#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace arcscale {

struct SynthSpec {
  double target_h = 0.5;
  std::size_t length = 4096;  // power of two, >= 64
  std::uint64_t seed = 1;
};

/// Autocovariance of unit-variance fractional Gaussian noise at lag k.
double fgn_autocovariance(double h, std::size_t lag);

/// Fractional Gaussian noise by circulant embedding (Davies-Harte).
std::vector<double> fgn(const SynthSpec& spec);

/// Independent standard normal draws.
std::vector<double> white_noise(std::size_t n, std::uint64_t seed);

}  // namespace arcscale
