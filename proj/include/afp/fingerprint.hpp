#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <vector>

#include "afp/peaks.hpp"

namespace afp {

/// First 8 bytes of SHA-1 over the ASCII string "<f1>|<f2>|<delta_t>".
using Digest = std::array<std::uint8_t, 8>;

/// Digest reinterpreted as an integer key for hash maps. Equal digests give
/// equal keys regardless of endianness; ordering is not preserved.
inline std::uint64_t digest_key(const Digest& d) {
  std::uint64_t k;
  std::memcpy(&k, d.data(), sizeof k);
  return k;
}

struct ConstellationPair {
  int f1 = 0;            // anchor peak bin
  int f2 = 0;            // target peak bin
  int delta_t = 0;       // target frame - anchor frame
  int anchor_frame = 0;  // t1, carried so the stored hash keeps its offset

  friend bool operator==(const ConstellationPair&, const ConstellationPair&) = default;
};

struct Fingerprint {
  Digest digest{};
  std::uint32_t anchor_offset = 0;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct FingerprintConfig {
  int sample_rate_hz = 44100;
  int window_size = 4096;
  int hop_size = 2048;
  PeakParams peak;
  int fan_out = 15;
  int delta_t_min = 1;  // delta_t = 0 pairs co-temporal peaks, which carry no sequence information
  int delta_t_max = 200;

  friend bool operator==(const FingerprintConfig&, const FingerprintConfig&) = default;
};

/// Pair each anchor peak with at most fan_out later peaks (in sorted order)
/// whose frame distance lies in [delta_t_min, delta_t_max]. Input must be
/// sorted by (frame, bin), as extract_peaks returns it.
std::vector<ConstellationPair> pair_peaks(const std::vector<Peak>& peaks,
                                          const FingerprintConfig& config);

Digest hash_pair(int f1, int f2, int delta_t);

/// Full pipeline: stft -> extract_peaks -> pair_peaks -> hash_pair.
/// The clip's rate must equal config.sample_rate_hz.
std::vector<Fingerprint> fingerprint_clip(const AudioClip& clip, const FingerprintConfig& config);

}  // namespace afp
