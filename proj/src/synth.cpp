#include "arcscale/synth.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <random>

#include <fftw3.h>
#include <fmt/format.h>

#include "arcscale/error.hpp"

namespace arcscale {
namespace {

constexpr double kEigenvalueTolerance = -1e-10;

struct PlanDeleter {
  void operator()(fftw_plan_s* plan) const noexcept { fftw_destroy_plan(plan); }
};
struct BufferDeleter {
  void operator()(fftw_complex* buffer) const noexcept { fftw_free(buffer); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;
using Buffer = std::unique_ptr<fftw_complex[], BufferDeleter>;

// Standard normal draws by the Box-Muller transform on mt19937_64 output.
// Spelled out instead of std::normal_distribution, whose algorithm varies
// between standard libraries.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : rng_(seed) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - unit();  // (0, 1], keeps log finite
    const double u2 = unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }  // [0, 1)

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Forward DFT (e^{-2 pi i jk/n}) of `buffer` in place.
void forward_dft(fftw_complex* buffer, std::size_t n) {
  Plan plan(fftw_plan_dft_1d(static_cast<int>(n), buffer, buffer, FFTW_FORWARD,
                             FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan.get());
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

double fgn_autocovariance(double h, std::size_t lag) {
  const double k = static_cast<double>(lag);
  const double two_h = 2.0 * h;
  return 0.5 * (std::pow(k + 1.0, two_h) - 2.0 * std::pow(k, two_h) +
                std::pow(std::abs(k - 1.0), two_h));
}

std::vector<double> fgn(const SynthSpec& spec) {
  if (!(spec.target_h > 0.0 && spec.target_h < 1.0)) {
    throw ParameterError(fmt::format("Hurst exponent {} is outside (0,1)", spec.target_h));
  }
  if (spec.length < 64 || !is_power_of_two(spec.length)) {
    throw ParameterError(
        fmt::format("fGn length {} must be a power of two and at least 64", spec.length));
  }
  const std::size_t n = spec.length;
  const std::size_t m = 2 * n;

  // First row of the 2n circulant embedding: g(0..n), then g(n-1..1).
  Buffer buf(fftw_alloc_complex(m));
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t lag = j <= n ? j : m - j;
    buf[j][0] = fgn_autocovariance(spec.target_h, lag);
    buf[j][1] = 0.0;
  }
  forward_dft(buf.get(), m);
  std::vector<double> eigen(m);
  for (std::size_t k = 0; k < m; ++k) {
    eigen[k] = buf[k][0];
    if (eigen[k] < kEigenvalueTolerance) {
      throw std::runtime_error(fmt::format(
          "circulant embedding has negative eigenvalue {} at index {}", eigen[k], k));
    }
    eigen[k] = std::max(eigen[k], 0.0);
  }

  NormalSource normal(spec.seed);
  const double md = static_cast<double>(m);
  buf[0][0] = std::sqrt(eigen[0] / md) * normal();
  buf[0][1] = 0.0;
  buf[n][0] = std::sqrt(eigen[n] / md) * normal();
  buf[n][1] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double scale = std::sqrt(eigen[k] / (2.0 * md));
    const double re = normal();
    const double im = normal();
    buf[k][0] = scale * re;
    buf[k][1] = scale * im;
    buf[m - k][0] = scale * re;
    buf[m - k][1] = -scale * im;
  }
  forward_dft(buf.get(), m);

  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = buf[t][0];
  return out;
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
  NormalSource normal(seed);
  std::vector<double> out(n);
  for (double& v : out) v = normal();
  return out;
}

}  // namespace arcscale
