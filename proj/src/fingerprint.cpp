#include <cstdio>

#include <openssl/evp.h>

#include "afp/fingerprint.hpp"

namespace afp {

std::vector<ConstellationPair> pair_peaks(const std::vector<Peak>& peaks,
                                          const FingerprintConfig& config) {
  if (config.fan_out < 1) raise(Errc::out_of_range, "fan_out must be >= 1");
  if (config.delta_t_min < 1 || config.delta_t_max < config.delta_t_min)
    raise(Errc::out_of_range, "need 1 <= delta_t_min <= delta_t_max");

  std::vector<ConstellationPair> pairs;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const Peak& anchor = peaks[i];
    int emitted = 0;
    for (std::size_t j = i + 1; j < peaks.size() && emitted < config.fan_out; ++j) {
      const int dt = peaks[j].frame - anchor.frame;
      if (dt > config.delta_t_max) break;  // peaks are frame-sorted
      if (dt < config.delta_t_min) continue;
      pairs.push_back({anchor.bin, peaks[j].bin, dt, anchor.frame});
      ++emitted;
    }
  }
  return pairs;
}

Digest hash_pair(int f1, int f2, int delta_t) {
  char text[64];
  const int len = std::snprintf(text, sizeof text, "%d|%d|%d", f1, f2, delta_t);

  unsigned char sha1[EVP_MAX_MD_SIZE];
  unsigned int sha1_len = 0;
  EVP_Digest(text, static_cast<std::size_t>(len), sha1, &sha1_len, EVP_sha1(), nullptr);

  Digest digest;
  std::memcpy(digest.data(), sha1, digest.size());
  return digest;
}

std::vector<Fingerprint> fingerprint_clip(const AudioClip& clip, const FingerprintConfig& config) {
  if (clip.sample_rate_hz != config.sample_rate_hz)
    raise(Errc::rate_mismatch, "clip rate does not match fingerprint config");

  const Spectrogram spec = stft(clip, config.window_size, config.hop_size);
  const std::vector<Peak> peaks = extract_peaks(spec, config.peak);
  const std::vector<ConstellationPair> pairs = pair_peaks(peaks, config);

  std::vector<Fingerprint> fingerprints;
  fingerprints.reserve(pairs.size());
  for (const ConstellationPair& pair : pairs)
    fingerprints.push_back({hash_pair(pair.f1, pair.f2, pair.delta_t),
                            static_cast<std::uint32_t>(pair.anchor_frame)});
  return fingerprints;
}

}  // namespace afp
