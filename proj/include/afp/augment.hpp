#pragma once

#include <cstdint>

#include "afp/audio.hpp"

namespace afp {

enum class AugmentKind { white_noise, mixed_clip, gain, hard_clip };

struct AugmentSpec {
  AugmentKind kind = AugmentKind::white_noise;
  double snr_db = 20.0;         // white_noise, mixed_clip
  double gain_factor = 1.0;     // gain
  double clip_threshold = 1.0;  // hard_clip, in (0, 1]
  std::uint64_t seed = 0;       // white_noise
};

/// i.i.d. uniform samples on [-0.5, 0.5] from a seeded deterministic generator.
AudioClip white_noise(double duration_seconds, int rate_hz, std::uint64_t seed);

/// output[n] = clamp(clip[n] + alpha * noise[n], -1, 1) with alpha chosen so
/// that 10*log10(P_clip / P_scaled_noise) = snr_db, P = mean square over the
/// clip length. The noise must be at least as long as the clip; excess is
/// dropped.
AudioClip mix_noise(const AudioClip& clip, const AudioClip& noise, double snr_db);

/// gain: scale then clamp to [-1, 1]. hard_clip: clamp to +-clip_threshold,
/// then rescale by 1/clip_threshold.
AudioClip distort(const AudioClip& clip, const AugmentSpec& spec);

/// Dispatch on spec.kind. mixed_clip needs a noise bed.
AudioClip apply_augment(const AudioClip& clip, const AugmentSpec& spec,
                        const AudioClip* noise_bed = nullptr);

/// Stable one-line description used in reports ("none" for nullptr).
std::string augment_descriptor(const AugmentSpec* spec);

}  // namespace afp
