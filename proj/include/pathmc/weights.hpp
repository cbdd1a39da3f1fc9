#pragma once

#include <cstdint>
#include <vector>

#include "pathmc/errors.hpp"

namespace pathmc {

enum class WeightMode { Quadratic, Uniform };

const char* weight_mode_name(WeightMode mode);
WeightMode weight_mode_from_name(std::string_view name);

// Site-selection distribution over flip positions 1..n.
//
// Quadratic mode uses raw weights p_i = i*(2n-i)*kappa0 + alpha with
// kappa0 = 3/(2 n^2 (n+1)) and alpha = 1/(4 n^3). The raw weights sum to
// Z = (4n^2 - n + 1)/(4n^2), not to 1, so they are renormalized; the concave
// profile and the defect relation p_i - p_{i-1}/2 - p_{i+1}/2 = kappa0 are
// preserved with kappa0 scaled by 1/Z.
//
// Immutable after build; shareable across threads.
struct WeightTable {
  std::int64_t n = 0;
  WeightMode mode = WeightMode::Quadratic;
  double kappa0 = 0.0;  // 3 / (2 n^2 (n+1))
  double alpha = 0.0;   // 1 / (4 n^3)
  double Z = 0.0;       // sum of raw weights
  std::vector<double> raw;    // unnormalized weights, raw[i-1] = p_i
  std::vector<double> probs;  // raw / Z
  std::vector<double> cdf;    // running sums of probs; cdf[n-1] == 1

  static WeightTable build(std::int64_t n, WeightMode mode);

  // CDF inversion: the smallest i with cdf_i > u, for u in [0,1). A guide
  // table accelerates the search; the result is identical to a plain binary
  // search over the cdf.
  std::int64_t sample_index(double u) const;

  // Reference implementation of sample_index (plain lower-bound search).
  std::int64_t sample_index_bsearch(double u) const;

  // The certified one-step contraction constant implied by the normalized
  // weights: the minimum over the interior defect probs_i - probs_{i-1}/2 -
  // probs_{i+1}/2 (with probs_0 read as alpha/Z) and the end-move term
  // (probs_n - probs_{n-1})/2. With the quadratic weights this evaluates to
  // kappa0/(2Z), the end term being the binding one. Defined for Quadratic
  // mode only; Uniform mode has no positive contraction constant and throws.
  double effective_kappa() const;

 private:
  std::vector<std::int32_t> guide_;  // bucket k -> first index with cdf > k/K
};

}  // namespace pathmc
