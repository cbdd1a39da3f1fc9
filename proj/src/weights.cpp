#include "pathmc/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pathmc {

const char* weight_mode_name(WeightMode mode) {
  return mode == WeightMode::Quadratic ? "quadratic" : "uniform";
}

WeightMode weight_mode_from_name(std::string_view name) {
  if (name == "quadratic") return WeightMode::Quadratic;
  if (name == "uniform") return WeightMode::Uniform;
  throw validation_error("unknown weight mode: " + std::string(name));
}

WeightTable WeightTable::build(std::int64_t n, WeightMode mode) {
  if (n < 1) throw validation_error("weight table requires n >= 1");
  WeightTable t;
  t.n = n;
  t.mode = mode;
  const double dn = static_cast<double>(n);
  t.kappa0 = 3.0 / (2.0 * dn * dn * (dn + 1.0));
  t.alpha = 1.0 / (4.0 * dn * dn * dn);
  t.raw.resize(static_cast<std::size_t>(n));
  if (mode == WeightMode::Quadratic) {
    for (std::int64_t i = 1; i <= n; ++i) {
      const double di = static_cast<double>(i);
      t.raw[static_cast<std::size_t>(i - 1)] = di * (2.0 * dn - di) * t.kappa0 + t.alpha;
    }
  } else {
    std::fill(t.raw.begin(), t.raw.end(), 1.0 / dn);
  }
  double z = 0.0;
  for (double w : t.raw) z += w;
  t.Z = z;
  t.probs.resize(t.raw.size());
  t.cdf.resize(t.raw.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < t.raw.size(); ++k) {
    t.probs[k] = t.raw[k] / z;
    acc += t.probs[k];
    t.cdf[k] = acc;
  }
  t.cdf.back() = 1.0;  // guard against last-ulp shortfall

  // Guide table: bucket k covers u in [k/K, (k+1)/K) and stores the first
  // index whose cdf exceeds the bucket's lower edge. Lookup then scans
  // forward, which almost always terminates within one or two entries.
  const std::size_t K = t.raw.size();
  t.guide_.resize(K);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < K; ++k) {
    const double edge = static_cast<double>(k) / static_cast<double>(K);
    while (idx < t.cdf.size() && t.cdf[idx] <= edge) ++idx;
    t.guide_[k] = static_cast<std::int32_t>(idx);
  }
  return t;
}

std::int64_t WeightTable::sample_index_bsearch(double u) const {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<std::int64_t>(it - cdf.begin()) + 1;
}

std::int64_t WeightTable::sample_index(double u) const {
  const std::size_t K = guide_.size();
  std::size_t bucket = static_cast<std::size_t>(u * static_cast<double>(K));
  if (bucket >= K) bucket = K - 1;
  std::size_t idx = static_cast<std::size_t>(guide_[bucket]);
  while (idx < cdf.size() && cdf[idx] <= u) ++idx;
  return static_cast<std::int64_t>(idx) + 1;
}

double WeightTable::effective_kappa() const {
  if (mode != WeightMode::Quadratic)
    throw validation_error("effective_kappa is defined for quadratic weights only");
  if (n == 1) {
    // Single site: the two active (epsilon, delta) combinations each merge a
    // discordant pair, so one coupled step coalesces with probability 1/2.
    return 0.5;
  }
  const double p0 = alpha / Z;
  double best = probs[0] - p0 / 2.0 - probs[1] / 2.0;
  for (std::int64_t i = 2; i <= n - 1; ++i) {
    const double v = probs[static_cast<std::size_t>(i - 1)] -
                     probs[static_cast<std::size_t>(i - 2)] / 2.0 -
                     probs[static_cast<std::size_t>(i)] / 2.0;
    best = std::min(best, v);
  }
  const double end_term =
      (probs[static_cast<std::size_t>(n - 1)] - probs[static_cast<std::size_t>(n - 2)]) / 2.0;
  best = std::min(best, end_term);
  return best;
}

}  // namespace pathmc
