#include <deque>

#include "afp/peaks.hpp"

namespace afp {

namespace {

// Sliding maximum with the clipped window [i - r, i + r], monotonic deque,
// O(n). `in` may be strided (Eigen inner iterators are not, so rows of a
// column-major matrix are copied by the caller).
void sliding_max(const double* in, double* out, Eigen::Index n, Eigen::Index r) {
  std::deque<Eigen::Index> order;  // indices of decreasing values
  for (Eigen::Index lead = 0; lead < n + r; ++lead) {
    if (lead < n) {
      while (!order.empty() && in[order.back()] <= in[lead]) order.pop_back();
      order.push_back(lead);
    }
    const Eigen::Index center = lead - r;
    if (center < 0) continue;
    while (order.front() < center - r) order.pop_front();
    out[center] = in[order.front()];
  }
}

}  // namespace

std::vector<Peak> extract_peaks(const Spectrogram& spec, const PeakParams& params) {
  const Eigen::Index frames = spec.frames();
  const Eigen::Index bins = spec.bins();
  if (frames == 0 || bins == 0) raise(Errc::empty_spectrogram, "spectrogram has no cells");
  if (params.neighborhood_radius < 1)
    raise(Errc::out_of_range, "neighborhood radius must be >= 1");

  const Eigen::Index r = params.neighborhood_radius;
  const Eigen::MatrixXd& amp = spec.amplitude_db;

  // Chebyshev neighborhood max is separable: max over bins per frame, then
  // max over frames per bin.
  Eigen::MatrixXd row_max(frames, bins);
  {
    Eigen::ArrayXd row(bins), row_out(bins);
    for (Eigen::Index f = 0; f < frames; ++f) {
      row = amp.row(f);
      sliding_max(row.data(), row_out.data(), bins, r);
      row_max.row(f) = row_out;
    }
  }
  Eigen::MatrixXd nbhd_max(frames, bins);
  for (Eigen::Index b = 0; b < bins; ++b)
    sliding_max(row_max.col(b).data(), nbhd_max.col(b).data(), frames, r);

  std::vector<Peak> peaks;
  for (Eigen::Index f = 0; f < frames; ++f) {
    for (Eigen::Index b = 0; b < bins; ++b) {
      const double v = amp(f, b);
      if (v < params.amp_min_db || v != nbhd_max(f, b)) continue;
      // Plateau tie-break: survive only as the lexicographically smallest
      // (frame, bin) among neighborhood cells at exactly this value. Scanning
      // the neighborhood in lex order up to (f, b) finds any earlier equal.
      bool smallest = true;
      for (Eigen::Index ff = std::max<Eigen::Index>(0, f - r); smallest && ff <= f; ++ff) {
        const Eigen::Index bb_end = ff == f ? b : std::min(bins - 1, b + r);
        for (Eigen::Index bb = std::max<Eigen::Index>(0, b - r); bb < bb_end + 1; ++bb) {
          if (ff == f && bb == b) break;
          if (amp(ff, bb) == v) {
            smallest = false;
            break;
          }
        }
      }
      if (smallest)
        peaks.push_back({static_cast<int>(f), static_cast<int>(b), v});
    }
  }
  return peaks;  // (f outer, b inner) loop order is already (frame, bin) sorted
}

}  // namespace afp
