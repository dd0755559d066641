#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "afp/eval.hpp"

namespace {

// Exit-code contract: 0 success/match, 1 no-match (recognize only),
// 2 I/O-or-input error, 3 domain conflict (duplicate song name).
constexpr int kExitMatch = 0;
constexpr int kExitNoMatch = 1;
constexpr int kExitError = 2;
constexpr int kExitConflict = 3;

struct Options {
  std::string store;
  bool create = false;
  std::string name;
  std::string wav;
  std::vector<std::string> wavs;
  double from = 0.0;
  double dur = 0.0;
  int min_votes = afp::kDefaultMinVotes;
  std::string format = "text";
  std::vector<int> durations{1, 2, 3, 4, 5, 6};
  int trials = 45;
  std::uint64_t seed = 0;
  std::string augment = "none";
  double snr_db = 20.0;
  double gain_factor = 1.0;
  double clip_threshold = 1.0;
  std::string noise_bed;
  std::vector<double> record_times{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  int repeats = 5;
  std::string out;
  afp::FingerprintConfig config;
};

void add_store_flag(CLI::App* cmd, Options& opt) {
  cmd->add_option("--store", opt.store, "Store directory")->required();
}

void add_config_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--rate", opt.config.sample_rate_hz, "Required sample rate (Hz)")
      ->capture_default_str();
  cmd->add_option("--window", opt.config.window_size, "STFT window size")->capture_default_str();
  cmd->add_option("--hop", opt.config.hop_size, "STFT hop size")->capture_default_str();
  cmd->add_option("--peak-radius", opt.config.peak.neighborhood_radius,
                  "Peak neighborhood Chebyshev radius")
      ->capture_default_str();
  cmd->add_option("--amp-min-db", opt.config.peak.amp_min_db, "Peak amplitude floor (dB)")
      ->capture_default_str();
  cmd->add_option("--fan-out", opt.config.fan_out, "Pairs per anchor peak")
      ->capture_default_str();
  cmd->add_option("--delta-t-min", opt.config.delta_t_min, "Minimum pair frame distance")
      ->capture_default_str();
  cmd->add_option("--delta-t-max", opt.config.delta_t_max, "Maximum pair frame distance")
      ->capture_default_str();
}

void warn_config_mismatch(const afp::Store& store, const afp::FingerprintConfig& config) {
  if (store.recorded_config() && !(*store.recorded_config() == config))
    std::cerr << "warning: fingerprint parameters differ from those recorded in " +
                     (store.path() / afp::kManifestFileName).string() + "\n";
}

std::string stem_of(const std::string& wav_path) {
  return std::filesystem::path(wav_path).stem().string();
}

void emit_report(const std::string& tsv, const std::string& summary, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << tsv;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) afp::raise(afp::Errc::out_of_range, "cannot write " + out_path);
    out << tsv;
    if (!out) afp::raise(afp::Errc::out_of_range, "short write to " + out_path);
  }
  std::cerr << summary;
}

// Corpus wavs are matched to stored songs by file stem.
std::vector<afp::CorpusSong> load_corpus(const afp::Store& store,
                                         const std::vector<std::string>& wav_paths) {
  std::vector<afp::CorpusSong> corpus;
  for (const std::string& path : wav_paths) {
    const std::string name = stem_of(path);
    const afp::SongRecord* record = store.find_song(name);
    if (record == nullptr)
      afp::raise(afp::Errc::unknown_song, "store has no song named '" + name + "' for " + path);
    corpus.push_back({record->song_id, name, afp::read_wav(path)});
  }
  return corpus;
}

int run_add(const Options& opt) {
  const afp::AudioClip clip = afp::read_wav(opt.wav);
  const std::string name = opt.name.empty() ? stem_of(opt.wav) : opt.name;

  const bool exists = std::filesystem::exists(std::filesystem::path(opt.store) /
                                              afp::kManifestFileName);
  afp::Store store = !exists && opt.create ? afp::create_store(opt.store, opt.config)
                                           : afp::open_store(opt.store);
  warn_config_mismatch(store, opt.config);

  const std::vector<afp::Fingerprint> fingerprints = afp::fingerprint_clip(clip, opt.config);
  const std::uint32_t song_id = store.insert_song(name, fingerprints, clip.duration_seconds());
  std::printf("song_id=%u fingerprints=%zu\n", song_id, fingerprints.size());
  return kExitMatch;
}

int run_recognize(const Options& opt) {
  afp::AudioClip clip = afp::read_wav(opt.wav);
  if (opt.from > 0.0 || opt.dur > 0.0) {
    const double dur = opt.dur > 0.0 ? opt.dur : clip.duration_seconds() - opt.from;
    clip = afp::slice_clip(clip, opt.from, dur);
  }

  const afp::Store store = afp::open_store(opt.store);
  warn_config_mismatch(store, opt.config);
  const afp::RecognitionResult result = afp::recognize(clip, store, opt.config, opt.min_votes);

  if (!result.matched) {
    std::cerr << "no match (" << result.total_query_fingerprints << " query fingerprints)\n";
    return kExitNoMatch;
  }
  if (opt.format == "tsv") {
    std::printf("%s\t%u\t%llu\t%llu\t%.6f\t%.3f\n", result.song_name.c_str(), result.song_id,
                static_cast<unsigned long long>(result.votes),
                static_cast<unsigned long long>(result.total_query_fingerprints),
                result.confidence, result.offset_seconds);
  } else {
    std::printf("song=%s\n", result.song_name.c_str());
    std::printf("song_id=%u\n", result.song_id);
    std::printf("votes=%llu\n", static_cast<unsigned long long>(result.votes));
    std::printf("total_query_fingerprints=%llu\n",
                static_cast<unsigned long long>(result.total_query_fingerprints));
    std::printf("confidence=%.6f\n", result.confidence);
    std::printf("offset_seconds=%.3f\n", result.offset_seconds);
  }
  return kExitMatch;
}

int run_eval_accuracy(const Options& opt) {
  const afp::Store store = afp::open_store(opt.store);
  warn_config_mismatch(store, opt.config);
  const std::vector<afp::CorpusSong> corpus = load_corpus(store, opt.wavs);

  std::optional<afp::AugmentSpec> augment;
  afp::AudioClip noise_bed;
  const afp::AudioClip* noise_bed_ptr = nullptr;
  if (opt.augment != "none") {
    afp::AugmentSpec spec;
    if (opt.augment == "white_noise") spec.kind = afp::AugmentKind::white_noise;
    else if (opt.augment == "mixed_clip") spec.kind = afp::AugmentKind::mixed_clip;
    else if (opt.augment == "gain") spec.kind = afp::AugmentKind::gain;
    else if (opt.augment == "hard_clip") spec.kind = afp::AugmentKind::hard_clip;
    else afp::raise(afp::Errc::bad_spec, "unknown augment kind: " + opt.augment);
    spec.snr_db = opt.snr_db;
    spec.gain_factor = opt.gain_factor;
    spec.clip_threshold = opt.clip_threshold;
    spec.seed = opt.seed;
    if (spec.kind == afp::AugmentKind::mixed_clip) {
      if (opt.noise_bed.empty())
        afp::raise(afp::Errc::bad_spec, "--augment mixed_clip needs --noise-bed");
      noise_bed = afp::read_wav(opt.noise_bed);
      noise_bed_ptr = &noise_bed;
    }
    augment = spec;
  }

  const afp::AccuracyReport report =
      afp::run_accuracy(store, corpus, opt.durations, opt.trials, augment, opt.seed, opt.config,
                        opt.min_votes, noise_bed_ptr);
  emit_report(afp::to_tsv(report), afp::summary_text(report), opt.out);
  return kExitMatch;
}

int run_eval_timing(const Options& opt) {
  const afp::Store store = afp::open_store(opt.store);
  warn_config_mismatch(store, opt.config);
  const std::vector<afp::CorpusSong> corpus = load_corpus(store, {opt.wav});

  const afp::TimingReport report = afp::run_timing(store, corpus.front(), opt.record_times,
                                                   opt.repeats, opt.config, opt.min_votes);
  emit_report(afp::to_tsv(report), afp::summary_text(report), opt.out);
  return kExitMatch;
}

int run_eval_storage(const Options& opt) {
  const afp::Store store = afp::open_store(opt.store);
  std::uint64_t wav_bytes = 0;
  for (const std::string& path : opt.wavs) wav_bytes += std::filesystem::file_size(path);

  const afp::StorageRatioReport report = afp::run_storage_report(store, wav_bytes);
  emit_report(afp::to_tsv(report), afp::summary_text(report), opt.out);
  return kExitMatch;
}

int run_stats(const Options& opt) {
  const afp::Store store = afp::open_store(opt.store);
  std::printf("song_id\tname\tfingerprints\tduration_seconds\n");
  for (const afp::SongRecord& song : store.songs())
    std::printf("%u\t%s\t%llu\t%.3f\n", song.song_id, song.name.c_str(),
                static_cast<unsigned long long>(song.fingerprint_count), song.duration_seconds);
  const afp::StorageReport stats = store.stats();
  std::printf("# songs=%llu entries=%llu index_bytes=%llu manifest_bytes=%llu\n",
              static_cast<unsigned long long>(stats.song_count),
              static_cast<unsigned long long>(stats.entry_count),
              static_cast<unsigned long long>(stats.index_bytes),
              static_cast<unsigned long long>(stats.manifest_bytes));
  return kExitMatch;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Landmark audio fingerprinting: ingest songs, recognize clips, run evaluations"};
  app.require_subcommand(1);

  CLI::App* add = app.add_subcommand("add", "Fingerprint a WAV file and insert it");
  add_store_flag(add, opt);
  add->add_flag("--create", opt.create, "Create the store if it does not exist");
  add->add_option("--name", opt.name, "Song name (default: file stem)");
  add_config_flags(add, opt);
  add->add_option("wav", opt.wav, "WAV file to ingest")->required();

  CLI::App* recognize = app.add_subcommand("recognize", "Match a WAV clip against the store");
  add_store_flag(recognize, opt);
  recognize->add_option("--from", opt.from, "Slice start (seconds)")->capture_default_str();
  recognize->add_option("--dur", opt.dur, "Slice duration (seconds, 0 = rest of clip)")
      ->capture_default_str();
  recognize->add_option("--min-votes", opt.min_votes, "Votes needed to declare a match")
      ->capture_default_str();
  recognize->add_option("--format", opt.format, "Output format")
      ->check(CLI::IsMember({"text", "tsv"}))
      ->capture_default_str();
  add_config_flags(recognize, opt);
  recognize->add_option("wav", opt.wav, "WAV clip to recognize")->required();

  CLI::App* eval = app.add_subcommand("eval", "Accuracy / timing / storage reports");
  eval->require_subcommand(1);

  CLI::App* accuracy = eval->add_subcommand(
      "accuracy", "Top-1 accuracy vs clip duration over random seeded trials");
  add_store_flag(accuracy, opt);
  accuracy->add_option("--durations", opt.durations, "Clip durations in seconds")
      ->delimiter(',')
      ->capture_default_str();
  accuracy->add_option("--trials", opt.trials, "Trials per duration")->capture_default_str();
  accuracy->add_option("--seed", opt.seed, "Trial RNG seed")->capture_default_str();
  accuracy->add_option("--augment", opt.augment, "none|white_noise|mixed_clip|gain|hard_clip")
      ->capture_default_str();
  accuracy->add_option("--snr-db", opt.snr_db, "SNR for noise augments (dB)")
      ->capture_default_str();
  accuracy->add_option("--gain-factor", opt.gain_factor, "Gain augment factor")
      ->capture_default_str();
  accuracy->add_option("--clip-threshold", opt.clip_threshold, "Hard-clip threshold")
      ->capture_default_str();
  accuracy->add_option("--noise-bed", opt.noise_bed, "WAV noise bed for mixed_clip");
  accuracy->add_option("--min-votes", opt.min_votes, "Votes needed to declare a match")
      ->capture_default_str();
  accuracy->add_option("--out", opt.out, "Write the TSV report here instead of stdout");
  add_config_flags(accuracy, opt);
  accuracy->add_option("wavs", opt.wavs, "Corpus WAV files (stems must match stored names)")
      ->required();

  CLI::App* timing = eval->add_subcommand("timing", "Match time vs record time with linear fit");
  add_store_flag(timing, opt);
  timing->add_option("--record-times", opt.record_times, "Record times in seconds")
      ->delimiter(',')
      ->capture_default_str();
  timing->add_option("--repeats", opt.repeats, "Timed runs per record time (median taken)")
      ->capture_default_str();
  timing->add_option("--min-votes", opt.min_votes, "Votes needed to declare a match")
      ->capture_default_str();
  timing->add_option("--out", opt.out, "Write the TSV report here instead of stdout");
  add_config_flags(timing, opt);
  timing->add_option("wav", opt.wav, "Stored song WAV (stem must match its stored name)")
      ->required();

  CLI::App* storage = eval->add_subcommand("storage", "Index size vs corpus WAV size");
  add_store_flag(storage, opt);
  storage->add_option("--out", opt.out, "Write the TSV report here instead of stdout");
  storage->add_option("wavs", opt.wavs, "Corpus WAV files (sizes are summed)");

  CLI::App* stats = app.add_subcommand("stats", "Per-song fingerprint counts and byte totals");
  add_store_flag(stats, opt);

  try {
    app.parse(argc, argv);
    if (add->parsed()) return run_add(opt);
    if (recognize->parsed()) return run_recognize(opt);
    if (accuracy->parsed()) return run_eval_accuracy(opt);
    if (timing->parsed()) return run_eval_timing(opt);
    if (storage->parsed()) return run_eval_storage(opt);
    if (stats->parsed()) return run_stats(opt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  } catch (const afp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == afp::Errc::duplicate_name ? kExitConflict : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
