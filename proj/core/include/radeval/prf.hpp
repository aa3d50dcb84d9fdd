#pragma once

#include <cstdint>

namespace radeval {

/// Precision / recall / F1 for one example or a corpus aggregate, together
/// with the raw counts the ratios came from.
struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t match_count = 0;
  std::int64_t hyp_count = 0;
  std::int64_t ref_count = 0;
};

/// Set-overlap scores from raw counts.
///
/// Empty-set convention: both sides empty -> (1, 1, 1); exactly one side
/// empty -> (0, 0, 0). Otherwise precision = match/hyp, recall = match/ref,
/// f1 = harmonic mean (0 when precision + recall == 0).
inline PRF prf_from_counts(std::int64_t match, std::int64_t hyp,
                           std::int64_t ref) {
  PRF out;
  out.match_count = match;
  out.hyp_count = hyp;
  out.ref_count = ref;
  if (hyp == 0 && ref == 0) {
    out.precision = out.recall = out.f1 = 1.0;
    return out;
  }
  if (hyp == 0 || ref == 0) {
    return out;  // zeros
  }
  out.precision = static_cast<double>(match) / static_cast<double>(hyp);
  out.recall = static_cast<double>(match) / static_cast<double>(ref);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

}  // namespace radeval
