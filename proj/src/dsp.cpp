#include <cmath>
#include <numbers>
#include <vector>

#include "afp/dsp.hpp"

namespace afp {

namespace {

bool is_power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

// One period of e^{-j 2 pi m / n} for m in [0, n). Both transforms index this
// table instead of calling sin/cos per element, which keeps the arguments
// small (better accuracy) and the inner loops cheap.
std::vector<std::complex<double>> twiddle_table(Eigen::Index n) {
  std::vector<std::complex<double>> w(static_cast<std::size_t>(n));
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (Eigen::Index m = 0; m < n; ++m)
    w[static_cast<std::size_t>(m)] = std::polar(1.0, step * static_cast<double>(m));
  return w;
}

}  // namespace

ComplexVector dft_naive(const ComplexVector& input) {
  const Eigen::Index n = input.size();
  if (n == 0) raise(Errc::empty_input, "transform input is empty");

  const auto w = twiddle_table(n);
  ComplexVector out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double sum_re = 0.0;
    double sum_im = 0.0;
    // Twiddle exponent k*i mod n, tracked incrementally.
    Eigen::Index m = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const std::complex<double>& x = input[i];
      const std::complex<double>& t = w[static_cast<std::size_t>(m)];
      sum_re += x.real() * t.real() - x.imag() * t.imag();
      sum_im += x.real() * t.imag() + x.imag() * t.real();
      m += k;
      if (m >= n) m -= n;
    }
    out[k] = {sum_re, sum_im};
  }
  return out;
}

ComplexVector fft(const ComplexVector& input) {
  const Eigen::Index n = input.size();
  if (n == 0) raise(Errc::empty_input, "transform input is empty");
  if (!is_power_of_two(n))
    raise(Errc::non_power_of_two_length, "fft length must be a power of two");

  // Bit-reversal permutation, then iterative decimation-in-time butterflies.
  ComplexVector out(n);
  for (Eigen::Index i = 0, rev = 0; i < n; ++i) {
    out[rev] = input[i];
    Eigen::Index bit = n >> 1;
    while (rev & bit) {
      rev ^= bit;
      bit >>= 1;
    }
    rev |= bit;
  }

  const auto w = twiddle_table(n);
  for (Eigen::Index len = 2; len <= n; len <<= 1) {
    const Eigen::Index stride = n / len;
    for (Eigen::Index start = 0; start < n; start += len) {
      for (Eigen::Index j = 0; j < len / 2; ++j) {
        const std::complex<double>& t = w[static_cast<std::size_t>(j * stride)];
        std::complex<double>& a = out[start + j];
        std::complex<double>& b = out[start + j + len / 2];
        const double prod_re = b.real() * t.real() - b.imag() * t.imag();
        const double prod_im = b.real() * t.imag() + b.imag() * t.real();
        b = {a.real() - prod_re, a.imag() - prod_im};
        a = {a.real() + prod_re, a.imag() + prod_im};
      }
    }
  }
  return out;
}

Spectrogram stft(const AudioClip& clip, int window_size, int hop_size) {
  if (window_size <= 0 || !is_power_of_two(window_size))
    raise(Errc::bad_window, "window size must be a positive power of two");
  if (hop_size <= 0 || hop_size > window_size)
    raise(Errc::bad_window, "hop size must lie in [1, window size]");
  const Eigen::Index n = clip.samples.size();
  if (n < window_size) raise(Errc::clip_too_short, "clip is shorter than one window");

  // Symmetric Hann window: 0.5 * (1 - cos(2 pi i / (N - 1))).
  Eigen::ArrayXd hann(window_size);
  for (int i = 0; i < window_size; ++i)
    hann[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (window_size - 1)));

  const Eigen::Index frames = (n - window_size) / hop_size + 1;
  const Eigen::Index bins = window_size / 2 + 1;
  Spectrogram spec;
  spec.amplitude_db.resize(frames, bins);
  spec.window_size = window_size;
  spec.hop_size = hop_size;
  spec.sample_rate_hz = clip.sample_rate_hz;

  ComplexVector frame(window_size);
  for (Eigen::Index f = 0; f < frames; ++f) {
    const Eigen::ArrayXd windowed = clip.samples.segment(f * hop_size, window_size) * hann;
    for (int i = 0; i < window_size; ++i) frame[i] = {windowed[i], 0.0};
    const ComplexVector bins_full = fft(frame);
    for (Eigen::Index b = 0; b < bins; ++b) {
      const double power = std::norm(bins_full[b]);
      // Exactly kDbFloor for silent cells instead of log10 of the floor.
      spec.amplitude_db(f, b) = power > kPowerFloor ? 10.0 * std::log10(power) : kDbFloor;
    }
  }
  return spec;
}

}  // namespace afp
