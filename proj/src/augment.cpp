#include <cmath>
#include <cstdio>
#include <random>

#include "afp/augment.hpp"

namespace afp {

namespace {

// mt19937_64 output is pinned by the standard; mapping the top 53 bits onto
// [0, 1) by hand keeps the stream identical across standard libraries, which
// std::uniform_real_distribution does not guarantee.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

AudioClip white_noise_samples(Eigen::Index n, int rate_hz, std::uint64_t seed) {
  AudioClip clip{Eigen::ArrayXd(n), rate_hz};
  std::mt19937_64 rng(seed);
  for (Eigen::Index i = 0; i < n; ++i) clip.samples[i] = next_unit(rng) - 0.5;
  return clip;
}

}  // namespace

AudioClip white_noise(double duration_seconds, int rate_hz, std::uint64_t seed) {
  if (!(duration_seconds > 0.0) || rate_hz <= 0)
    raise(Errc::out_of_range, "noise needs duration > 0 and a positive rate");
  const auto n = static_cast<Eigen::Index>(std::llround(duration_seconds * rate_hz));
  return white_noise_samples(n, rate_hz, seed);
}

AudioClip mix_noise(const AudioClip& clip, const AudioClip& noise, double snr_db) {
  if (clip.sample_rate_hz != noise.sample_rate_hz)
    raise(Errc::rate_mismatch, "clip and noise sample rates differ");
  const Eigen::Index n = clip.samples.size();
  if (n == 0) raise(Errc::empty_audio, "cannot mix into an empty clip");
  if (noise.samples.size() < n) raise(Errc::out_of_range, "noise bed is shorter than the clip");

  const double signal_power = clip.samples.square().mean();
  if (signal_power <= 0.0) raise(Errc::silent_signal, "clip has no power to set an SNR against");
  const Eigen::ArrayXd bed = noise.samples.head(n);
  const double noise_power = bed.square().mean();
  if (noise_power <= 0.0) raise(Errc::silent_noise, "noise bed has no power");

  const double alpha = std::sqrt(signal_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  AudioClip out{(clip.samples + alpha * bed).min(1.0).max(-1.0), clip.sample_rate_hz};
  return out;
}

AudioClip distort(const AudioClip& clip, const AugmentSpec& spec) {
  switch (spec.kind) {
    case AugmentKind::gain:
      if (!(spec.gain_factor > 0.0)) raise(Errc::out_of_range, "gain factor must be positive");
      return {(clip.samples * spec.gain_factor).min(1.0).max(-1.0), clip.sample_rate_hz};
    case AugmentKind::hard_clip: {
      const double t = spec.clip_threshold;
      if (!(t > 0.0) || t > 1.0) raise(Errc::out_of_range, "clip threshold must lie in (0, 1]");
      return {clip.samples.min(t).max(-t) / t, clip.sample_rate_hz};
    }
    default:
      raise(Errc::bad_spec, "distort handles gain and hard_clip only");
  }
}

AudioClip apply_augment(const AudioClip& clip, const AugmentSpec& spec,
                        const AudioClip* noise_bed) {
  switch (spec.kind) {
    case AugmentKind::white_noise:
      return mix_noise(clip, white_noise_samples(clip.samples.size(), clip.sample_rate_hz,
                                                 spec.seed),
                       spec.snr_db);
    case AugmentKind::mixed_clip:
      if (noise_bed == nullptr) raise(Errc::bad_spec, "mixed_clip needs a noise bed");
      return mix_noise(clip, *noise_bed, spec.snr_db);
    case AugmentKind::gain:
    case AugmentKind::hard_clip:
      return distort(clip, spec);
  }
  raise(Errc::bad_spec, "unknown augmentation kind");
}

std::string augment_descriptor(const AugmentSpec* spec) {
  if (spec == nullptr) return "none";
  char text[96];
  switch (spec->kind) {
    case AugmentKind::white_noise:
      std::snprintf(text, sizeof text, "white_noise snr_db=%g seed=%llu", spec->snr_db,
                    static_cast<unsigned long long>(spec->seed));
      break;
    case AugmentKind::mixed_clip:
      std::snprintf(text, sizeof text, "mixed_clip snr_db=%g", spec->snr_db);
      break;
    case AugmentKind::gain:
      std::snprintf(text, sizeof text, "gain factor=%g", spec->gain_factor);
      break;
    case AugmentKind::hard_clip:
      std::snprintf(text, sizeof text, "hard_clip threshold=%g", spec->clip_threshold);
      break;
  }
  return text;
}

}  // namespace afp
