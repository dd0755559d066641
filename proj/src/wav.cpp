#include <cmath>
#include <cstring>
#include <fstream>

#include "afp/audio.hpp"

// RIFF/WAVE, uncompressed 16-bit little-endian linear PCM only. Chunks other
// than "fmt " and "data" are skipped (odd-sized chunks carry a pad byte).

namespace afp {

namespace {

std::uint16_t get_u16le(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::int16_t get_i16le(const std::uint8_t* p) {
  return static_cast<std::int16_t>(get_u16le(p));
}

void put_u16le(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  put_u16le(out, static_cast<std::uint16_t>(v & 0xffff));
  put_u16le(out, static_cast<std::uint16_t>(v >> 16));
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr double kPcmScale = 32768.0;

}  // namespace

AudioClip decode_wav(const std::uint8_t* data, std::size_t size) {
  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0)
    raise(Errc::malformed_container, "not a RIFF/WAVE container");

  bool have_fmt = false;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* pcm = nullptr;
  std::uint32_t pcm_bytes = 0;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint8_t* chunk = data + pos;
    const std::uint32_t chunk_size = get_u32le(chunk + 4);
    if (pos + 8 + chunk_size > size)
      raise(Errc::malformed_container, "chunk extends past end of file");

    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16) raise(Errc::malformed_container, "fmt chunk too small");
      const std::uint16_t format = get_u16le(chunk + 8);
      channels = get_u16le(chunk + 10);
      rate = get_u32le(chunk + 12);
      const std::uint16_t bits = get_u16le(chunk + 22);
      if (format != kFormatPcm) raise(Errc::unsupported_encoding, "only linear PCM is supported");
      if (bits != 16) raise(Errc::unsupported_encoding, "only 16-bit samples are supported");
      if (channels != 1 && channels != 2)
        raise(Errc::unsupported_encoding, "only mono and stereo are supported");
      if (rate == 0) raise(Errc::malformed_container, "zero sample rate");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) raise(Errc::malformed_container, "data chunk before fmt chunk");
      pcm = chunk + 8;
      pcm_bytes = chunk_size;
      break;
    }
    pos += 8 + chunk_size + (chunk_size & 1);  // chunks are word-aligned
  }
  if (!have_fmt || pcm == nullptr) raise(Errc::malformed_container, "missing fmt or data chunk");
  if (pcm_bytes == 0) raise(Errc::empty_audio, "empty data chunk");

  const std::uint32_t frame_bytes = channels * 2u;
  if (pcm_bytes % frame_bytes != 0)
    raise(Errc::malformed_container, "data chunk is not a whole number of frames");

  const Eigen::Index frames = pcm_bytes / frame_bytes;
  AudioClip clip{Eigen::ArrayXd(frames), static_cast<int>(rate)};
  if (channels == 1) {
    for (Eigen::Index i = 0; i < frames; ++i)
      clip.samples[i] = get_i16le(pcm + 2 * i) / kPcmScale;
  } else {
    for (Eigen::Index i = 0; i < frames; ++i) {
      const double left = get_i16le(pcm + 4 * i);
      const double right = get_i16le(pcm + 4 * i + 2);
      clip.samples[i] = (left + right) * 0.5 / kPcmScale;
    }
  }
  return clip;
}

AudioClip decode_wav(const std::vector<std::uint8_t>& bytes) {
  return decode_wav(bytes.data(), bytes.size());
}

AudioClip read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::malformed_container, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_wav(bytes);
}

std::vector<std::uint8_t> encode_wav(const AudioClip& clip) {
  const Eigen::Index n = clip.samples.size();
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(n) * 2u;

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put_u32le(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  put_u32le(out, 16);
  put_u16le(out, kFormatPcm);
  put_u16le(out, 1);  // mono
  put_u32le(out, static_cast<std::uint32_t>(clip.sample_rate_hz));
  put_u32le(out, static_cast<std::uint32_t>(clip.sample_rate_hz) * 2u);  // byte rate
  put_u16le(out, 2);                                                     // block align
  put_u16le(out, 16);                                                    // bits per sample
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put_u32le(out, data_bytes);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scaled = std::lrint(clip.samples[i] * kPcmScale);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16le(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

void write_wav(const AudioClip& clip, const std::filesystem::path& path) {
  const auto bytes = encode_wav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::malformed_container, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(Errc::malformed_container, "short write to " + path.string());
}

}  // namespace afp
