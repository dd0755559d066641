#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "afp/error.hpp"

namespace afp {

/// Mono PCM signal. Samples are real amplitudes in [-1, 1].
struct AudioClip {
  Eigen::ArrayXd samples;
  int sample_rate_hz = 44100;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

struct SamplingPolicy {
  int required_rate_hz = 44100;
  int highest_frequency_hz = 20000;
};

/// Decode a RIFF/WAVE container holding 16-bit little-endian linear PCM.
/// Stereo is downmixed by per-sample channel averaging; int16 v maps to v / 32768.0.
AudioClip decode_wav(const std::uint8_t* data, std::size_t size);
AudioClip decode_wav(const std::vector<std::uint8_t>& bytes);
AudioClip read_wav(const std::filesystem::path& path);

/// Encode as mono 16-bit PCM WAV (the same layout decode_wav accepts).
std::vector<std::uint8_t> encode_wav(const AudioClip& clip);
void write_wav(const AudioClip& clip, const std::filesystem::path& path);

/// True iff the clip's rate satisfies the Nyquist criterion for the policy's
/// highest frequency of interest.
bool validate_sampling(const AudioClip& clip, const SamplingPolicy& policy);

/// Contiguous sub-clip; boundaries round to the nearest sample.
AudioClip slice_clip(const AudioClip& clip, double start_seconds, double duration_seconds);

/// samples[n] = amplitude * sin(2*pi * frequency_hz * n / rate_hz)
AudioClip synthesize_tone(double frequency_hz, double duration_seconds, int rate_hz,
                          double amplitude);

}  // namespace afp
