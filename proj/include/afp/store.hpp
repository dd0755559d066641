#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "afp/fingerprint.hpp"

namespace afp {

struct SongRecord {
  std::uint32_t song_id = 0;
  std::string name;
  std::uint64_t fingerprint_count = 0;
  double duration_seconds = 0.0;
};

struct IndexEntry {
  Digest digest{};
  std::uint32_t song_id = 0;
  std::uint32_t offset = 0;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct StorageReport {
  std::uint64_t song_count = 0;
  std::uint64_t entry_count = 0;
  std::uint64_t index_bytes = 0;
  std::uint64_t manifest_bytes = 0;
};

struct LookupHit {
  std::size_t query_index = 0;
  std::uint32_t song_id = 0;
  std::uint32_t offset = 0;

  friend bool operator==(const LookupHit&, const LookupHit&) = default;
};

inline constexpr std::uint64_t kIndexHeaderBytes = 16;
inline constexpr std::uint64_t kIndexEntryBytes = 16;
inline constexpr char kIndexFileName[] = "index.afp";
inline constexpr char kManifestFileName[] = "songs.tsv";

/// On-disk song/fingerprint store.
///
/// Layout (directory):
///   songs.tsv  - UTF-8 manifest, one tab-separated row per song:
///                song_id, name, fingerprint_count, duration_seconds (3 decimals),
///                LF endings. A leading "# fingerprint ..." comment records the
///                fingerprint parameters used at add time.
///   index.afp  - 4-byte magic "AFP1", u32 LE version (=1), u64 LE entry count,
///                then 16-byte records: digest (8 bytes), song_id (u32 LE),
///                offset (u32 LE), sorted ascending by (digest, song_id, offset).
///
/// Writes rewrite a temp file and rename it over the old one. Single writer,
/// concurrent readers; no cross-process locking.
class Store {
 public:
  /// Appends one index entry per fingerprint, updates the manifest, and
  /// persists both before returning. Song ids start at 1 and increment.
  std::uint32_t insert_song(const std::string& name, const std::vector<Fingerprint>& fingerprints,
                            double duration_seconds);

  /// Every stored entry whose digest equals a query digest, exact match only,
  /// tagged with the query position. Unknown digests contribute nothing.
  std::vector<LookupHit> lookup(const std::vector<Digest>& digests) const;

  StorageReport stats() const;

  const std::vector<SongRecord>& songs() const { return songs_; }
  const SongRecord* find_song(std::uint32_t song_id) const;
  const SongRecord* find_song(const std::string& name) const;

  /// Fingerprint parameters recorded in the manifest header, if present.
  const std::optional<FingerprintConfig>& recorded_config() const { return recorded_config_; }

  const std::filesystem::path& path() const { return path_; }

  friend Store create_store(const std::filesystem::path&, const FingerprintConfig&);
  friend Store open_store(const std::filesystem::path&);

 private:
  Store() = default;
  void persist() const;
  void rebuild_lookup();

  std::filesystem::path path_;
  std::vector<SongRecord> songs_;
  std::vector<IndexEntry> entries_;  // kept in (digest, song_id, offset) order
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_digest_;  // key -> entry indices
  std::optional<FingerprintConfig> recorded_config_;
  std::uint32_t next_song_id_ = 1;
};

/// path must be absent or an empty directory.
Store create_store(const std::filesystem::path& path, const FingerprintConfig& config = {});
Store open_store(const std::filesystem::path& path);

}  // namespace afp
