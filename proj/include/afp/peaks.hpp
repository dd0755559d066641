#pragma once

#include <vector>

#include "afp/dsp.hpp"

namespace afp {

struct Peak {
  int frame = 0;
  int bin = 0;
  double amplitude_db = 0.0;

  friend bool operator==(const Peak&, const Peak&) = default;
};

struct PeakParams {
  int neighborhood_radius = 10;  // Chebyshev radius, frames x bins
  double amp_min_db = -60.0;

  friend bool operator==(const PeakParams&, const PeakParams&) = default;
};

/// Local-maximum landmarks of a spectrogram, sorted by (frame, bin).
///
/// A cell is a peak iff its value is >= amp_min_db, >= every cell in its
/// (2r+1)x(2r+1) Chebyshev neighborhood (clipped at the matrix edges), and it
/// is the lexicographically smallest (frame, bin) among neighborhood cells
/// sharing its exact value (plateau tie-break).
std::vector<Peak> extract_peaks(const Spectrogram& spec, const PeakParams& params);

}  // namespace afp
