#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "afp/augment.hpp"
#include "helpers.hpp"

using afp::AudioClip;
using afp::AugmentKind;
using afp::AugmentSpec;
using afp::Errc;
using testutil::thrown_code;

namespace {

double rms(const Eigen::ArrayXd& x) { return std::sqrt(x.square().mean()); }

// Recover the mixer's internal noise scale from one unclamped output sample.
double recover_alpha(const AudioClip& in, const AudioClip& noise, const AudioClip& out) {
  for (Eigen::Index i = 0; i < out.samples.size(); ++i)
    if (std::abs(out.samples[i]) < 1.0 - 1e-9 && std::abs(noise.samples[i]) > 1e-3)
      return (out.samples[i] - in.samples[i]) / noise.samples[i];
  FAIL("no unclamped sample to recover alpha from");
  return 0.0;
}

}  // namespace

TEST_CASE("white_noise is seeded, uniform on [-0.5, 0.5], and sized by duration") {
  const AudioClip a = afp::white_noise(10.0, 44100, 42);
  const AudioClip b = afp::white_noise(10.0, 44100, 42);
  const AudioClip c = afp::white_noise(10.0, 44100, 43);

  CHECK(a.samples.size() == 441000);
  CHECK((a.samples == b.samples).all());
  CHECK(!(a.samples == c.samples).all());
  CHECK(a.samples.minCoeff() >= -0.5);
  CHECK(a.samples.maxCoeff() <= 0.5);

  const AudioClip big = afp::white_noise(23.0, 44100, 7);  // > 1e6 samples
  CHECK(std::abs(big.samples.mean()) < 0.002);             // 3 sigma of sigma/sqrt(n)
}

TEST_CASE("mix_noise hits the requested SNR exactly") {
  const AudioClip noise = afp::white_noise(2.0, 44100, 11);

  SUBCASE("measured post-mix SNR equals the request when nothing clamps") {
    const AudioClip tone = afp::synthesize_tone(700.0, 2.0, 44100, 0.25);
    for (const double snr : {0.0, 10.0, 20.0}) {
      const AudioClip out = afp::mix_noise(tone, noise, snr);
      const Eigen::ArrayXd scaled_noise = out.samples - tone.samples;
      const double measured =
          10.0 * std::log10(tone.samples.square().mean() / scaled_noise.square().mean());
      CAPTURE(snr);
      CHECK(measured == doctest::Approx(snr).epsilon(1e-9));
      CHECK(out.samples.size() == tone.samples.size());
    }
  }
  SUBCASE("snr 0 dB scales the noise to the signal's RMS, clamping or not") {
    const AudioClip tone = afp::synthesize_tone(700.0, 2.0, 44100, 0.5 * std::numbers::sqrt2);
    REQUIRE(rms(tone.samples) == doctest::Approx(0.5).epsilon(1e-6));
    const AudioClip out = afp::mix_noise(tone, noise, 0.0);
    const double alpha = recover_alpha(tone, noise, out);
    CHECK(rms(alpha * noise.samples.head(tone.samples.size())) ==
          doctest::Approx(rms(tone.samples)).epsilon(1e-9));
    CHECK(out.samples.maxCoeff() <= 1.0);
    CHECK(out.samples.minCoeff() >= -1.0);
  }
  SUBCASE("+60 dB barely perturbs the waveform") {
    const AudioClip tone = afp::synthesize_tone(700.0, 2.0, 44100, 0.4);
    const AudioClip out = afp::mix_noise(tone, noise, 60.0);
    CHECK((out.samples - tone.samples).abs().maxCoeff() < 0.002);
  }
  SUBCASE("+120 dB is the identity for practical purposes") {
    const AudioClip tone = afp::synthesize_tone(700.0, 2.0, 44100, 0.4);
    const AudioClip out = afp::mix_noise(tone, noise, 120.0);
    CHECK((out.samples - tone.samples).abs().maxCoeff() < 1e-6);
  }
  SUBCASE("excess noise is truncated, shortage is an error") {
    const AudioClip tone = afp::synthesize_tone(700.0, 1.0, 44100, 0.3);
    CHECK(afp::mix_noise(tone, noise, 20.0).samples.size() == tone.samples.size());
    const AudioClip shorty = afp::white_noise(0.5, 44100, 3);
    CHECK(thrown_code([&] { afp::mix_noise(tone, shorty, 20.0); }) == Errc::out_of_range);
  }
  SUBCASE("degenerate inputs carry their own errors") {
    const AudioClip tone = afp::synthesize_tone(700.0, 1.0, 44100, 0.3);
    const AudioClip wrong_rate = afp::white_noise(1.0, 22050, 3);
    CHECK(thrown_code([&] { afp::mix_noise(tone, wrong_rate, 20.0); }) == Errc::rate_mismatch);
    const AudioClip silent{Eigen::ArrayXd::Zero(44100), 44100};
    CHECK(thrown_code([&] { afp::mix_noise(silent, noise, 20.0); }) == Errc::silent_signal);
    CHECK(thrown_code([&] { afp::mix_noise(tone, silent, 20.0); }) == Errc::silent_noise);
  }
}

TEST_CASE("distort covers gain and hard_clip") {
  const AudioClip tone = afp::synthesize_tone(500.0, 1.0, 44100, 0.5);

  SUBCASE("gain 1.0 is the identity") {
    AugmentSpec spec{AugmentKind::gain};
    spec.gain_factor = 1.0;
    CHECK((afp::distort(tone, spec).samples == tone.samples).all());
  }
  SUBCASE("hard_clip at threshold 1.0 is the identity for in-range input") {
    AugmentSpec spec{AugmentKind::hard_clip};
    spec.clip_threshold = 1.0;
    CHECK((afp::distort(tone, spec).samples == tone.samples).all());
  }
  SUBCASE("gain 4.0 saturates a 0.5 tone into flat tops") {
    AugmentSpec spec{AugmentKind::gain};
    spec.gain_factor = 4.0;
    const AudioClip out = afp::distort(tone, spec);
    CHECK(out.samples.maxCoeff() == 1.0);
    CHECK(out.samples.minCoeff() == -1.0);
    CHECK((out.samples.abs() == 1.0).count() > 1000);  // saturation plateaus
    CHECK(out.samples.size() == tone.samples.size());
  }
  SUBCASE("hard_clip flattens then rescales to full range") {
    AugmentSpec spec{AugmentKind::hard_clip};
    spec.clip_threshold = 0.5;
    const AudioClip loud = afp::synthesize_tone(500.0, 1.0, 44100, 0.8);
    const AudioClip out = afp::distort(loud, spec);
    CHECK(out.samples.maxCoeff() == 1.0);
    for (Eigen::Index i = 0; i < 100; ++i)
      if (std::abs(loud.samples[i]) < 0.5) CHECK(out.samples[i] == loud.samples[i] * 2.0);
  }
  SUBCASE("noise kinds do not belong in distort") {
    CHECK(thrown_code([&] { afp::distort(tone, {AugmentKind::white_noise}); }) == Errc::bad_spec);
  }
  SUBCASE("parameters are validated") {
    AugmentSpec spec{AugmentKind::gain};
    spec.gain_factor = 0.0;
    CHECK(thrown_code([&] { afp::distort(tone, spec); }) == Errc::out_of_range);
    spec = {AugmentKind::hard_clip};
    spec.clip_threshold = 1.5;
    CHECK(thrown_code([&] { afp::distort(tone, spec); }) == Errc::out_of_range);
  }
}

TEST_CASE("apply_augment dispatches on kind") {
  const AudioClip tone = afp::synthesize_tone(900.0, 1.0, 44100, 0.3);

  SUBCASE("white_noise is deterministic under a fixed seed") {
    AugmentSpec spec{AugmentKind::white_noise};
    spec.snr_db = 10.0;
    spec.seed = 77;
    const AudioClip a = afp::apply_augment(tone, spec);
    const AudioClip b = afp::apply_augment(tone, spec);
    CHECK((a.samples == b.samples).all());
    CHECK(a.samples.size() == tone.samples.size());
    CHECK(a.samples.abs().maxCoeff() <= 1.0);
    CHECK(!(a.samples == tone.samples).all());
  }
  SUBCASE("mixed_clip requires a bed and uses it") {
    AugmentSpec spec{AugmentKind::mixed_clip};
    spec.snr_db = 5.0;
    CHECK(thrown_code([&] { afp::apply_augment(tone, spec); }) == Errc::bad_spec);
    const AudioClip bed = afp::synthesize_tone(50.0, 1.0, 44100, 0.4);
    const AudioClip out = afp::apply_augment(tone, spec, &bed);
    CHECK(out.samples.size() == tone.samples.size());
    CHECK(!(out.samples == tone.samples).all());
  }
  SUBCASE("distortion kinds pass through") {
    AugmentSpec spec{AugmentKind::gain};
    spec.gain_factor = 0.5;
    CHECK((afp::apply_augment(tone, spec).samples == tone.samples * 0.5).all());
  }
}

TEST_CASE("augment_descriptor names each augmentation stably") {
  CHECK(afp::augment_descriptor(nullptr) == "none");
  AugmentSpec noise{AugmentKind::white_noise};
  noise.snr_db = 20.0;
  noise.seed = 9;
  CHECK(afp::augment_descriptor(&noise) == "white_noise snr_db=20 seed=9");
  AugmentSpec gain{AugmentKind::gain};
  gain.gain_factor = 1.5;
  CHECK(afp::augment_descriptor(&gain) == "gain factor=1.5");
  AugmentSpec clip{AugmentKind::hard_clip};
  clip.clip_threshold = 0.25;
  CHECK(afp::augment_descriptor(&clip) == "hard_clip threshold=0.25");
  AugmentSpec mixed{AugmentKind::mixed_clip};
  mixed.snr_db = 5.0;
  CHECK(afp::augment_descriptor(&mixed) == "mixed_clip snr_db=5");
}
