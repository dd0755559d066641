#pragma once

#include <stdexcept>
#include <string>

namespace afp {

enum class Errc {
  // audio
  malformed_container,
  unsupported_encoding,
  empty_audio,
  out_of_range,
  nyquist_violation,
  // dsp
  empty_input,
  non_power_of_two_length,
  clip_too_short,
  bad_window,
  // peaks
  empty_spectrogram,
  // fingerprint
  rate_mismatch,
  // store
  already_exists,
  not_a_store,
  corrupt_index,
  duplicate_name,
  empty_fingerprints,
  invalid_name,
  // augment
  silent_signal,
  silent_noise,
  bad_spec,
  // eval harness
  corpus_too_short,
  empty_store,
  song_too_short,
  unknown_song,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace afp
