#pragma once

#include <map>

#include "afp/store.hpp"

namespace afp {

/// One (query hash, index entry) join row.
struct Match {
  std::uint32_t query_offset = 0;
  std::uint32_t song_id = 0;
  std::uint32_t db_offset = 0;
};

/// Votes per (song, alignment delta) where delta = db_offset - query_offset.
/// Random collisions scatter across deltas; true matches pile onto one.
struct AlignmentHistogram {
  std::map<std::uint32_t, std::map<std::int64_t, std::uint64_t>> votes;

  std::uint64_t total_votes() const;
};

struct RecognitionResult {
  bool matched = false;
  std::uint32_t song_id = 0;
  std::string song_name;
  std::uint64_t votes = 0;  // count in the winning (song, delta) bucket
  std::uint64_t total_query_fingerprints = 0;
  double confidence = 0.0;  // votes / max(1, total_query_fingerprints)
  std::int64_t delta_frames = 0;
  double offset_seconds = 0.0;  // delta * hop_size / sample_rate_hz
};

inline constexpr int kDefaultMinVotes = 5;

AlignmentHistogram build_histogram(const std::vector<Match>& matches);

/// Winner = bucket with the maximum count; ties go to the smaller song_id,
/// then the smaller delta. matched iff the winning count >= min_votes.
/// song_name and offset_seconds are filled by recognize, which knows the
/// store and the STFT grid.
RecognitionResult best_match(const AlignmentHistogram& hist,
                             std::uint64_t total_query_fingerprints, int min_votes);

RecognitionResult recognize(const AudioClip& clip, const Store& store,
                            const FingerprintConfig& config, int min_votes = kDefaultMinVotes);

}  // namespace afp
