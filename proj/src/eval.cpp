#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include "afp/eval.hpp"

namespace afp {

namespace {

// Same pinned generator contract as the augment module: raw mt19937_64 with
// hand mappings, so evaluation runs replay bit-exactly everywhere.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::string format(const char* fmt, ...) {
  char text[256];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(text, sizeof text, fmt, args);
  va_end(args);
  return text;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

}  // namespace

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    raise(Errc::empty_input, "line fit needs two or more (x, y) points");
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

  Eigen::MatrixXd design(n, 2);
  design.col(0) = xv;
  design.col(1).setOnes();
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(yv);

  LinearFit fit;
  fit.slope = beta[0];
  fit.intercept = beta[1];
  const double ss_res = (yv - design * beta).squaredNorm();
  const double ss_tot = (yv.array() - yv.mean()).matrix().squaredNorm();
  if (ss_tot > 0.0) {
    fit.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  } else {
    // Constant y: R^2 is 0/0, so report 1 when the fit reproduces the data
    // (up to rounding) and 0 otherwise.
    fit.r_squared = ss_res <= 1e-18 * std::max(1.0, yv.squaredNorm()) ? 1.0 : 0.0;
  }
  return fit;
}

AudioClip synth_song(std::uint64_t seed, double duration_seconds, int rate_hz) {
  if (!(duration_seconds > 0.0) || rate_hz <= 0)
    raise(Errc::out_of_range, "song needs duration > 0 and a positive rate");

  const auto total = static_cast<Eigen::Index>(std::llround(duration_seconds * rate_hz));
  AudioClip song{Eigen::ArrayXd::Zero(total), rate_hz};
  std::mt19937_64 rng(seed);

  // Gapless run of harmonic notes; amplitudes sum to 0.71 so nothing clamps,
  // and short linear attack/release ramps avoid clicks at note boundaries.
  constexpr double kHarmonicAmps[] = {0.45, 0.18, 0.08};
  const auto ramp_max = static_cast<Eigen::Index>(std::llround(0.01 * rate_hz));

  Eigen::Index pos = 0;
  while (pos < total) {
    const double note_seconds = 0.2 + 0.6 * next_unit(rng);
    const double base_hz = 220.0 * std::pow(2.0, 4.0 * next_unit(rng));  // 220 Hz .. 3520 Hz
    double phases[3];
    for (double& phase : phases) phase = 2.0 * std::numbers::pi * next_unit(rng);
    const double decay_seconds = 0.15 + 0.25 * next_unit(rng);

    const Eigen::Index len = std::min(
        total - pos, static_cast<Eigen::Index>(std::llround(note_seconds * rate_hz)));
    if (len <= 0) break;

    const Eigen::ArrayXd t =
        Eigen::ArrayXd::LinSpaced(len, 0.0, static_cast<double>(len - 1)) / rate_hz;
    Eigen::ArrayXd note = Eigen::ArrayXd::Zero(len);
    for (int k = 0; k < 3; ++k) {
      const double hz = (k + 1) * base_hz;
      if (hz >= rate_hz / 2.0) continue;
      note += kHarmonicAmps[k] * (2.0 * std::numbers::pi * hz * t + phases[k]).sin();
    }
    // Plucked-string decay localizes each note's spectral peaks at its onset,
    // which is what makes real music's landmarks stable under added noise.
    note *= (-t / decay_seconds).exp();

    const Eigen::Index ramp = std::min(ramp_max, len / 2);
    for (Eigen::Index i = 0; i < ramp; ++i) {
      const double g = static_cast<double>(i + 1) / static_cast<double>(ramp);
      note[i] *= g;
      note[len - 1 - i] *= g;
    }

    song.samples.segment(pos, len) = note;
    pos += len;
  }
  return song;
}

AccuracyReport run_accuracy(const Store& store, const std::vector<CorpusSong>& corpus,
                            const std::vector<int>& durations, int trials_per_cell,
                            const std::optional<AugmentSpec>& augment, std::uint64_t seed,
                            const FingerprintConfig& config, int min_votes,
                            const AudioClip* noise_bed) {
  if (store.songs().empty()) raise(Errc::empty_store, "accuracy run needs a populated store");
  if (corpus.empty()) raise(Errc::empty_input, "accuracy run needs a corpus");
  if (durations.empty()) raise(Errc::out_of_range, "accuracy run needs at least one duration");
  if (trials_per_cell < 1) raise(Errc::out_of_range, "trials per cell must be >= 1");

  std::vector<int> sorted_durations = durations;
  std::sort(sorted_durations.begin(), sorted_durations.end());
  if (sorted_durations.front() < 1) raise(Errc::out_of_range, "durations must be >= 1 s");
  const int max_duration = sorted_durations.back();

  for (const CorpusSong& song : corpus) {
    const SongRecord* record = store.find_song(song.song_id);
    if (record == nullptr || record->name != song.name)
      raise(Errc::unknown_song, "corpus song is not in the store: " + song.name);
    if (song.clip.sample_rate_hz != config.sample_rate_hz)
      raise(Errc::rate_mismatch, "corpus song rate differs from the fingerprint config");
    if (song.clip.samples.size() <
        static_cast<Eigen::Index>(max_duration) * config.sample_rate_hz)
      raise(Errc::corpus_too_short, "corpus song shorter than the longest trial: " + song.name);
  }

  std::mt19937_64 rng(seed);
  std::uint64_t trial_counter = 0;

  AccuracyReport report;
  report.seed = seed;
  {
    double min_len = corpus.front().clip.duration_seconds();
    double max_len = min_len;
    for (const CorpusSong& song : corpus) {
      min_len = std::min(min_len, song.clip.duration_seconds());
      max_len = std::max(max_len, song.clip.duration_seconds());
    }
    report.corpus_descriptor =
        format("%zu songs, %.3f-%.3f s", corpus.size(), min_len, max_len);
  }
  report.augment_descriptor = augment_descriptor(augment ? &*augment : nullptr);

  for (const int duration : sorted_durations) {
    AccuracyCell cell;
    cell.duration_seconds = duration;
    cell.trials = trials_per_cell;
    const Eigen::Index dur_samples =
        static_cast<Eigen::Index>(duration) * config.sample_rate_hz;

    for (int trial = 0; trial < trials_per_cell; ++trial) {
      const CorpusSong& song = corpus[next_below(rng, corpus.size())];
      const Eigen::Index max_k =
          (song.clip.samples.size() - dur_samples) / config.hop_size;
      const Eigen::Index k =
          static_cast<Eigen::Index>(next_below(rng, static_cast<std::uint64_t>(max_k) + 1));

      AudioClip piece{song.clip.samples.segment(k * config.hop_size, dur_samples),
                      song.clip.sample_rate_hz};
      ++trial_counter;
      if (augment) {
        AugmentSpec per_trial = *augment;
        per_trial.seed = augment->seed ^ (0x9e3779b97f4a7c15ULL * trial_counter);
        piece = apply_augment(piece, per_trial, noise_bed);
      }

      const RecognitionResult result = recognize(piece, store, config, min_votes);
      if (result.matched && result.song_id == song.song_id) ++cell.correct;
    }
    cell.accuracy = static_cast<double>(cell.correct) / trials_per_cell;
    report.rows.push_back(cell);
  }
  return report;
}

TimingReport run_timing(const Store& store, const CorpusSong& song,
                        const std::vector<double>& record_times, int repeats,
                        const FingerprintConfig& config, int min_votes) {
  if (record_times.size() < 2) raise(Errc::out_of_range, "timing run needs >= 2 record times");
  if (repeats < 1) raise(Errc::out_of_range, "repeats must be >= 1");
  if (song.clip.sample_rate_hz != config.sample_rate_hz)
    raise(Errc::rate_mismatch, "timing song rate differs from the fingerprint config");

  TimingReport report;
  std::vector<double> match_times;
  for (const double record_seconds : record_times) {
    if (!(record_seconds > 0.0)) raise(Errc::out_of_range, "record times must be positive");
    const auto n = static_cast<Eigen::Index>(std::llround(record_seconds * config.sample_rate_hz));
    if (n > song.clip.samples.size())
      raise(Errc::song_too_short, "record time exceeds the song length");
    const AudioClip piece{song.clip.samples.head(n), song.clip.sample_rate_hz};

    std::vector<double> runs;
    runs.reserve(static_cast<std::size_t>(repeats));
    for (int rep = 0; rep < repeats; ++rep) {
      const auto begin = std::chrono::steady_clock::now();
      const RecognitionResult result = recognize(piece, store, config, min_votes);
      const auto end = std::chrono::steady_clock::now();
      static_cast<void>(result);
      runs.push_back(std::chrono::duration<double>(end - begin).count());
    }
    const double match_seconds = median(runs);
    report.samples.emplace_back(record_seconds, match_seconds);
    match_times.push_back(match_seconds);
  }
  report.fit = fit_line(record_times, match_times);
  return report;
}

StorageRatioReport run_storage_report(const Store& store, std::uint64_t corpus_wav_bytes) {
  const StorageReport stats = store.stats();
  StorageRatioReport report;
  report.wav_bytes = corpus_wav_bytes;
  report.index_bytes = stats.index_bytes;
  report.manifest_bytes = stats.manifest_bytes;
  // Without corpus bytes there is no ratio to take; the byte columns still report.
  report.ratio = corpus_wav_bytes > 0
                     ? static_cast<double>(stats.index_bytes) / static_cast<double>(corpus_wav_bytes)
                     : 0.0;
  return report;
}

std::string to_tsv(const AccuracyReport& report) {
  std::string tsv;
  tsv += format("# seed=%llu\n", static_cast<unsigned long long>(report.seed));
  tsv += "# corpus=" + report.corpus_descriptor + "\n";
  tsv += "# augment=" + report.augment_descriptor + "\n";
  tsv += "duration_seconds\ttrials\tcorrect\taccuracy\n";
  for (const AccuracyCell& row : report.rows)
    tsv += format("%d\t%d\t%d\t%.6f\n", row.duration_seconds, row.trials, row.correct,
                  row.accuracy);
  return tsv;
}

std::string to_tsv(const TimingReport& report) {
  std::string tsv;
  tsv += format("# fit slope=%.6f intercept=%.6f r_squared=%.6f\n", report.fit.slope,
                report.fit.intercept, report.fit.r_squared);
  tsv += "record_seconds\tmatch_seconds\n";
  for (const auto& [record_seconds, match_seconds] : report.samples)
    tsv += format("%.3f\t%.6f\n", record_seconds, match_seconds);
  return tsv;
}

std::string to_tsv(const StorageRatioReport& report) {
  std::string tsv = "wav_bytes\tindex_bytes\tmanifest_bytes\tratio\n";
  tsv += format("%llu\t%llu\t%llu\t%.6f\n", static_cast<unsigned long long>(report.wav_bytes),
                static_cast<unsigned long long>(report.index_bytes),
                static_cast<unsigned long long>(report.manifest_bytes), report.ratio);
  return tsv;
}

std::string summary_text(const AccuracyReport& report) {
  std::string text = "accuracy by clip duration (corpus: " + report.corpus_descriptor +
                     "; augment: " + report.augment_descriptor +
                     format("; seed: %llu)\n", static_cast<unsigned long long>(report.seed));
  for (const AccuracyCell& row : report.rows) {
    text += format("  %2d s: %2d/%2d = %5.1f%%", row.duration_seconds, row.correct, row.trials,
                   100.0 * row.accuracy);
    for (const ReferenceAccuracyRow& ref : kDejavuAccuracy) {
      if (ref.duration_seconds != row.duration_seconds) continue;
      text += format("   (dejavu: %d/%d = %5.1f%%)", ref.correct, ref.trials,
                     100.0 * ref.correct / ref.trials);
      break;
    }
    text += "\n";
  }
  return text;
}

std::string summary_text(const TimingReport& report) {
  std::string text =
      format("match time vs record time over %zu points: slope=%.6f s/s, intercept=%.6f s, "
             "r_squared=%.4f\n",
             report.samples.size(), report.fit.slope, report.fit.intercept,
             report.fit.r_squared);
  text += format("dejavu reference: slope=%.6f intercept=%.6f (hardware-bound, not a target)\n",
                 kDejavuTimingSlope, kDejavuTimingIntercept);
  return text;
}

std::string summary_text(const StorageRatioReport& report) {
  std::string text =
      format("storage: %llu index bytes for %llu WAV bytes, ratio %.4f (dejavu reference %.4f)\n",
             static_cast<unsigned long long>(report.index_bytes),
             static_cast<unsigned long long>(report.wav_bytes), report.ratio,
             kDejavuStorageRatio);
  text += format("manifest adds %llu bytes; every index entry is 16 bytes\n",
                 static_cast<unsigned long long>(report.manifest_bytes));
  return text;
}

}  // namespace afp
