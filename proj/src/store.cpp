#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "afp/store.hpp"

namespace afp {

namespace {

constexpr char kIndexMagic[4] = {'A', 'F', 'P', '1'};
constexpr std::uint32_t kIndexVersion = 1;

bool entry_less(const IndexEntry& a, const IndexEntry& b) {
  if (a.digest != b.digest) return a.digest < b.digest;
  if (a.song_id != b.song_id) return a.song_id < b.song_id;
  return a.offset < b.offset;
}

void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64le(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint64_t get_u64le(const std::uint8_t* p) {
  return static_cast<std::uint64_t>(get_u32le(p)) |
         (static_cast<std::uint64_t>(get_u32le(p + 4)) << 32);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::not_a_store, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) raise(Errc::not_a_store, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::not_a_store, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string config_comment(const FingerprintConfig& c) {
  char line[256];
  std::snprintf(line, sizeof line,
                "# fingerprint rate=%d window=%d hop=%d peak_radius=%d amp_min_db=%g "
                "fan_out=%d delta_t_min=%d delta_t_max=%d",
                c.sample_rate_hz, c.window_size, c.hop_size, c.peak.neighborhood_radius,
                c.peak.amp_min_db, c.fan_out, c.delta_t_min, c.delta_t_max);
  return line;
}

std::optional<FingerprintConfig> parse_config_comment(const std::string& line) {
  FingerprintConfig c;
  const int fields = std::sscanf(
      line.c_str(),
      "# fingerprint rate=%d window=%d hop=%d peak_radius=%d amp_min_db=%lf "
      "fan_out=%d delta_t_min=%d delta_t_max=%d",
      &c.sample_rate_hz, &c.window_size, &c.hop_size, &c.peak.neighborhood_radius,
      &c.peak.amp_min_db, &c.fan_out, &c.delta_t_min, &c.delta_t_max);
  if (fields != 8) return std::nullopt;
  return c;
}

}  // namespace

std::uint32_t Store::insert_song(const std::string& name,
                                 const std::vector<Fingerprint>& fingerprints,
                                 double duration_seconds) {
  if (name.empty() || name.find_first_of("\t\r\n") != std::string::npos)
    raise(Errc::invalid_name, "song name must be non-empty without tabs or line breaks");
  if (find_song(name) != nullptr) raise(Errc::duplicate_name, "song already stored: " + name);
  if (fingerprints.empty()) raise(Errc::empty_fingerprints, "song produced no fingerprints");
  if (!(duration_seconds > 0.0)) raise(Errc::out_of_range, "duration must be positive");

  const std::uint32_t song_id = next_song_id_++;
  std::vector<IndexEntry> added;
  added.reserve(fingerprints.size());
  for (const Fingerprint& fp : fingerprints) added.push_back({fp.digest, song_id, fp.anchor_offset});
  std::sort(added.begin(), added.end(), entry_less);

  const auto middle = entries_.insert(entries_.end(), added.begin(), added.end());
  std::inplace_merge(entries_.begin(), middle, entries_.end(), entry_less);

  songs_.push_back({song_id, name, fingerprints.size(), duration_seconds});
  persist();
  rebuild_lookup();
  return song_id;
}

std::vector<LookupHit> Store::lookup(const std::vector<Digest>& digests) const {
  std::vector<LookupHit> hits;
  for (std::size_t q = 0; q < digests.size(); ++q) {
    const auto it = by_digest_.find(digest_key(digests[q]));
    if (it == by_digest_.end()) continue;
    for (const std::uint32_t idx : it->second) {
      const IndexEntry& e = entries_[idx];
      hits.push_back({q, e.song_id, e.offset});
    }
  }
  return hits;
}

StorageReport Store::stats() const {
  StorageReport report;
  report.song_count = songs_.size();
  report.entry_count = entries_.size();
  std::error_code ec;
  report.index_bytes = std::filesystem::file_size(path_ / kIndexFileName, ec);
  if (ec) report.index_bytes = 0;
  report.manifest_bytes = std::filesystem::file_size(path_ / kManifestFileName, ec);
  if (ec) report.manifest_bytes = 0;
  return report;
}

const SongRecord* Store::find_song(std::uint32_t song_id) const {
  for (const SongRecord& s : songs_)
    if (s.song_id == song_id) return &s;
  return nullptr;
}

const SongRecord* Store::find_song(const std::string& name) const {
  for (const SongRecord& s : songs_)
    if (s.name == name) return &s;
  return nullptr;
}

void Store::persist() const {
  std::string index;
  index.reserve(kIndexHeaderBytes + entries_.size() * kIndexEntryBytes);
  index.append(kIndexMagic, sizeof kIndexMagic);
  put_u32le(index, kIndexVersion);
  put_u64le(index, entries_.size());
  for (const IndexEntry& e : entries_) {
    index.append(reinterpret_cast<const char*>(e.digest.data()), e.digest.size());
    put_u32le(index, e.song_id);
    put_u32le(index, e.offset);
  }

  std::string manifest;
  if (recorded_config_) manifest += config_comment(*recorded_config_) + "\n";
  for (const SongRecord& s : songs_) {
    char row[64];
    std::snprintf(row, sizeof row, "%u\t", s.song_id);
    manifest += row;
    manifest += s.name;
    std::snprintf(row, sizeof row, "\t%llu\t%.3f\n",
                  static_cast<unsigned long long>(s.fingerprint_count), s.duration_seconds);
    manifest += row;
  }

  write_file_atomic(path_ / kIndexFileName, index);
  write_file_atomic(path_ / kManifestFileName, manifest);
}

void Store::rebuild_lookup() {
  by_digest_.clear();
  by_digest_.reserve(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i)
    by_digest_[digest_key(entries_[i].digest)].push_back(static_cast<std::uint32_t>(i));
}

Store create_store(const std::filesystem::path& path, const FingerprintConfig& config) {
  if (std::filesystem::exists(path) &&
      (!std::filesystem::is_directory(path) || !std::filesystem::is_empty(path)))
    raise(Errc::already_exists, path.string() + " exists and is not an empty directory");
  std::filesystem::create_directories(path);

  Store store;
  store.path_ = path;
  store.recorded_config_ = config;
  store.persist();
  return store;
}

Store open_store(const std::filesystem::path& path) {
  const auto index_path = path / kIndexFileName;
  const auto manifest_path = path / kManifestFileName;
  if (!std::filesystem::is_directory(path) || !std::filesystem::exists(index_path) ||
      !std::filesystem::exists(manifest_path))
    raise(Errc::not_a_store, path.string() + " is not a fingerprint store");

  Store store;
  store.path_ = path;

  // Manifest: optional config comment, then one row per song.
  {
    std::ifstream in(manifest_path);
    if (!in) raise(Errc::not_a_store, "cannot open " + manifest_path.string());
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line.front() == '#') {
        if (auto config = parse_config_comment(line)) store.recorded_config_ = config;
        continue;
      }
      std::istringstream row(line);
      std::string id_text, name, count_text, duration_text;
      if (!std::getline(row, id_text, '\t') || !std::getline(row, name, '\t') ||
          !std::getline(row, count_text, '\t') || !std::getline(row, duration_text) ||
          name.empty())
        raise(Errc::corrupt_index, "malformed manifest row: " + line);
      SongRecord song;
      std::size_t used = 0;
      song.song_id = static_cast<std::uint32_t>(std::stoul(id_text, &used));
      if (used != id_text.size()) raise(Errc::corrupt_index, "bad song id: " + id_text);
      song.name = name;
      song.fingerprint_count = std::stoull(count_text, &used);
      if (used != count_text.size()) raise(Errc::corrupt_index, "bad count: " + count_text);
      song.duration_seconds = std::stod(duration_text, &used);
      if (used != duration_text.size()) raise(Errc::corrupt_index, "bad duration: " + duration_text);
      if (store.find_song(song.song_id) != nullptr || store.find_song(song.name) != nullptr)
        raise(Errc::corrupt_index, "duplicate manifest row: " + line);
      store.songs_.push_back(std::move(song));
    }
  }
  for (const SongRecord& s : store.songs_)
    store.next_song_id_ = std::max(store.next_song_id_, s.song_id + 1);

  // Index: validate header, size, and record order before trusting it.
  {
    const std::vector<std::uint8_t> bytes = read_file(index_path);
    if (bytes.size() < kIndexHeaderBytes || std::memcmp(bytes.data(), kIndexMagic, 4) != 0)
      raise(Errc::corrupt_index, "bad index magic");
    if (get_u32le(bytes.data() + 4) != kIndexVersion)
      raise(Errc::corrupt_index, "unsupported index version");
    const std::uint64_t count = get_u64le(bytes.data() + 8);
    if (bytes.size() != kIndexHeaderBytes + count * kIndexEntryBytes)
      raise(Errc::corrupt_index, "index size does not match its entry count");

    store.entries_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint8_t* rec = bytes.data() + kIndexHeaderBytes + i * kIndexEntryBytes;
      IndexEntry e;
      std::memcpy(e.digest.data(), rec, e.digest.size());
      e.song_id = get_u32le(rec + 8);
      e.offset = get_u32le(rec + 12);
      if (!store.entries_.empty() && entry_less(e, store.entries_.back()))
        raise(Errc::corrupt_index, "index records are out of order");
      store.entries_.push_back(e);
    }
  }

  const std::uint64_t manifest_total =
      std::accumulate(store.songs_.begin(), store.songs_.end(), std::uint64_t{0},
                      [](std::uint64_t sum, const SongRecord& s) {
                        return sum + s.fingerprint_count;
                      });
  if (manifest_total != store.entries_.size())
    raise(Errc::corrupt_index, "manifest fingerprint counts disagree with the index");
  for (const IndexEntry& e : store.entries_)
    if (store.find_song(e.song_id) == nullptr)
      raise(Errc::corrupt_index, "index references an unknown song id");

  store.rebuild_lookup();
  return store;
}

}  // namespace afp
