#pragma once

#include <Eigen/Core>
#include <complex>

#include "afp/audio.hpp"

namespace afp {

using ComplexVector = Eigen::VectorXcd;

// Power is clamped at kPowerFloor before the log, so silent cells sit at
// exactly kDbFloor instead of -inf.
inline constexpr double kPowerFloor = 1e-10;
inline constexpr double kDbFloor = -100.0;

/// Log-power time-frequency matrix. Row = frame (time), column = bin (frequency).
/// bins = window_size/2 + 1; frames = floor((N - window_size)/hop_size) + 1.
struct Spectrogram {
  Eigen::MatrixXd amplitude_db;
  int window_size = 0;
  int hop_size = 0;
  int sample_rate_hz = 0;

  Eigen::Index frames() const { return amplitude_db.rows(); }
  Eigen::Index bins() const { return amplitude_db.cols(); }
};

/// Direct O(N^2) discrete Fourier transform: X[k] = sum_n x[n] e^{-j2pi kn/N}.
/// Reference path for fft; any length >= 1.
ComplexVector dft_naive(const ComplexVector& x);

/// Radix-2 decimation-in-time FFT. Length must be a power of two.
ComplexVector fft(const ComplexVector& x);

/// Hann-windowed STFT; keeps bins 0..window/2 and converts to dB via
/// 10*log10(max(|X|^2, kPowerFloor)). Trailing samples shorter than one
/// window are dropped.
Spectrogram stft(const AudioClip& clip, int window_size, int hop_size);

}  // namespace afp
