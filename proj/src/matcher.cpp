#include "afp/matcher.hpp"

namespace afp {

std::uint64_t AlignmentHistogram::total_votes() const {
  std::uint64_t total = 0;
  for (const auto& [song_id, deltas] : votes)
    for (const auto& [delta, count] : deltas) total += count;
  return total;
}

AlignmentHistogram build_histogram(const std::vector<Match>& matches) {
  AlignmentHistogram hist;
  for (const Match& m : matches) {
    const std::int64_t delta =
        static_cast<std::int64_t>(m.db_offset) - static_cast<std::int64_t>(m.query_offset);
    ++hist.votes[m.song_id][delta];
  }
  return hist;
}

RecognitionResult best_match(const AlignmentHistogram& hist,
                             std::uint64_t total_query_fingerprints, int min_votes) {
  if (min_votes < 1) raise(Errc::out_of_range, "min_votes must be >= 1");

  RecognitionResult result;
  result.total_query_fingerprints = total_query_fingerprints;
  // Maps iterate in ascending (song_id, delta) order, so keeping only strict
  // improvements realizes the smaller-song-id, smaller-delta tie-break.
  for (const auto& [song_id, deltas] : hist.votes) {
    for (const auto& [delta, count] : deltas) {
      if (count > result.votes) {
        result.votes = count;
        result.song_id = song_id;
        result.delta_frames = delta;
      }
    }
  }
  result.matched = result.votes >= static_cast<std::uint64_t>(min_votes);
  result.confidence = static_cast<double>(result.votes) /
                      static_cast<double>(std::max<std::uint64_t>(1, total_query_fingerprints));
  if (!result.matched) {
    result.song_id = 0;
    result.votes = 0;
    result.confidence = 0.0;
    result.delta_frames = 0;
  }
  return result;
}

RecognitionResult recognize(const AudioClip& clip, const Store& store,
                            const FingerprintConfig& config, int min_votes) {
  const std::vector<Fingerprint> fingerprints = fingerprint_clip(clip, config);

  std::vector<Digest> digests;
  digests.reserve(fingerprints.size());
  for (const Fingerprint& fp : fingerprints) digests.push_back(fp.digest);

  std::vector<Match> matches;
  for (const LookupHit& hit : store.lookup(digests))
    matches.push_back({fingerprints[hit.query_index].anchor_offset, hit.song_id, hit.offset});

  RecognitionResult result = best_match(build_histogram(matches), fingerprints.size(), min_votes);
  if (result.matched) {
    const SongRecord* song = store.find_song(result.song_id);
    if (song == nullptr) raise(Errc::corrupt_index, "match references an unknown song id");
    result.song_name = song->name;
    result.offset_seconds = static_cast<double>(result.delta_frames) * config.hop_size /
                            config.sample_rate_hz;
  }
  return result;
}

}  // namespace afp
