#pragma once

#include <optional>
#include <utility>

#include "afp/augment.hpp"
#include "afp/matcher.hpp"

namespace afp {

/// A stored song together with the audio it was fingerprinted from.
struct CorpusSong {
  std::uint32_t song_id = 0;
  std::string name;
  AudioClip clip;
};

struct AccuracyCell {
  int duration_seconds = 0;
  int trials = 0;
  int correct = 0;
  double accuracy = 0.0;  // correct / trials
};

struct AccuracyReport {
  std::vector<AccuracyCell> rows;  // sorted by duration
  std::string corpus_descriptor;
  std::string augment_descriptor;
  std::uint64_t seed = 0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct TimingReport {
  std::vector<std::pair<double, double>> samples;  // (record_time_s, match_time_s)
  LinearFit fit;
};

struct StorageRatioReport {
  std::uint64_t wav_bytes = 0;
  std::uint64_t index_bytes = 0;
  std::uint64_t manifest_bytes = 0;
  double ratio = 0.0;  // index_bytes / wav_bytes
};

// Dejavu's published desk figures, printed alongside local results for
// comparison. The timing coefficients are hardware-bound and never a target.
inline constexpr double kDejavuTimingSlope = 1.364757;
inline constexpr double kDejavuTimingIntercept = -0.034373;
inline constexpr double kDejavuStorageRatio = 377.0 / 1885.0;
struct ReferenceAccuracyRow {
  int duration_seconds;
  int correct;
  int trials;
};
inline constexpr ReferenceAccuracyRow kDejavuAccuracy[] = {
    {1, 27, 45}, {2, 43, 45}, {3, 44, 45}, {4, 44, 45}, {5, 45, 45}, {6, 45, 45},
};

/// Ordinary least squares y = slope * x + intercept, plus R^2.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Deterministic synthetic song: a seeded melody of harmonic notes with
/// enveloped amplitudes, gapless so every slice has signal power.
AudioClip synth_song(std::uint64_t seed, double duration_seconds, int rate_hz);

/// Per (duration, trial): pick a corpus song and a hop-aligned start offset
/// uniformly at random (seeded), slice, optionally augment, recognize, and
/// count the trial correct iff the matched song_id is the true one. Every
/// corpus song must be stored and at least max(durations) long; a trial over
/// a song's full length uses the single offset 0.
AccuracyReport run_accuracy(const Store& store, const std::vector<CorpusSong>& corpus,
                            const std::vector<int>& durations, int trials_per_cell,
                            const std::optional<AugmentSpec>& augment, std::uint64_t seed,
                            const FingerprintConfig& config, int min_votes = kDefaultMinVotes,
                            const AudioClip* noise_bed = nullptr);

/// For each record time, slice the song from its start and time recognize
/// (median wall-clock of `repeats` runs), then least-squares fit
/// match_time = slope * record_time + intercept. Runs strictly sequentially.
TimingReport run_timing(const Store& store, const CorpusSong& song,
                        const std::vector<double>& record_times, int repeats,
                        const FingerprintConfig& config, int min_votes = kDefaultMinVotes);

StorageRatioReport run_storage_report(const Store& store, std::uint64_t corpus_wav_bytes);

// Plot-ready TSV (stable columns, LF endings, "." decimal point) and a
// human-readable summary block per report.
std::string to_tsv(const AccuracyReport& report);
std::string to_tsv(const TimingReport& report);
std::string to_tsv(const StorageRatioReport& report);
std::string summary_text(const AccuracyReport& report);
std::string summary_text(const TimingReport& report);
std::string summary_text(const StorageRatioReport& report);

}  // namespace afp
