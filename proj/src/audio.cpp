#include "afp/audio.hpp"

#include <cmath>
#include <numbers>

namespace afp {

bool validate_sampling(const AudioClip& clip, const SamplingPolicy& policy) {
  return clip.sample_rate_hz >= 2 * policy.highest_frequency_hz;
}

AudioClip slice_clip(const AudioClip& clip, double start_seconds, double duration_seconds) {
  if (start_seconds < 0.0 || !(duration_seconds > 0.0))
    raise(Errc::out_of_range, "slice needs start >= 0 and duration > 0");
  const Eigen::Index n = clip.samples.size();
  const auto start = static_cast<Eigen::Index>(std::llround(start_seconds * clip.sample_rate_hz));
  auto count = static_cast<Eigen::Index>(std::llround(duration_seconds * clip.sample_rate_hz));
  if (start + count == n + 1) count -= 1;  // one sample of rounding slack at the tail
  if (count <= 0 || start >= n || start + count > n) raise(Errc::out_of_range, "slice exceeds clip");
  return {clip.samples.segment(start, count), clip.sample_rate_hz};
}

AudioClip synthesize_tone(double frequency_hz, double duration_seconds, int rate_hz,
                          double amplitude) {
  if (!(frequency_hz > 0.0) || frequency_hz >= rate_hz / 2.0)
    raise(Errc::nyquist_violation, "tone frequency must lie in (0, rate/2)");
  if (!(duration_seconds > 0.0) || !(amplitude > 0.0) || amplitude > 1.0)
    raise(Errc::out_of_range, "tone needs duration > 0 and amplitude in (0, 1]");
  const auto n = static_cast<Eigen::Index>(std::llround(duration_seconds * rate_hz));
  const double w = 2.0 * std::numbers::pi * frequency_hz / rate_hz;
  AudioClip clip{Eigen::ArrayXd(n), rate_hz};
  clip.samples =
      amplitude * (w * Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1))).sin();
  return clip;
}

}  // namespace afp
