#include "uq/quantile.hpp"

#include <algorithm>
#include <cmath>

#include "uq/errors.hpp"

namespace uq {

double empirical_quantile(std::vector<double> samples, double alpha) {
  if (samples.empty()) throw InvalidInputError("empirical_quantile: no samples");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInputError("empirical_quantile: alpha must be in (0,1)");
  }
  std::sort(samples.begin(), samples.end());
  const double p = 1.0 - alpha;
  const double h = (static_cast<double>(samples.size()) - 1.0) * p;
  const std::size_t i = static_cast<std::size_t>(std::floor(h));
  if (i + 1 >= samples.size()) return samples.back();
  const double frac = h - std::floor(h);
  return samples[i] + frac * (samples[i + 1] - samples[i]);
}

QuantileEstimate quantile_with_batch_error(const std::vector<double>& samples,
                                           double alpha, int batches) {
  if (batches < 2) throw InvalidInputError("quantile_with_batch_error: batches < 2");
  QuantileEstimate est;
  est.alpha = alpha;
  est.gamma_hat = empirical_quantile(samples, alpha);
  est.method = "batch-means-" + std::to_string(batches);

  const std::size_t T = samples.size();
  const std::size_t b = T / static_cast<std::size_t>(batches);
  if (b < 2) {
    est.mc_std_error = 0.0;
    est.method += " (too few samples for error bar)";
    return est;
  }
  std::vector<double> batch_q;
  batch_q.reserve(static_cast<std::size_t>(batches));
  for (int k = 0; k < batches; ++k) {
    std::vector<double> blk(samples.begin() + static_cast<std::ptrdiff_t>(k * b),
                            samples.begin() +
                                static_cast<std::ptrdiff_t>((k + 1) * b));
    batch_q.push_back(empirical_quantile(std::move(blk), alpha));
  }
  double mean = 0.0;
  for (double v : batch_q) mean += v;
  mean /= static_cast<double>(batches);
  double var = 0.0;
  for (double v : batch_q) var += (v - mean) * (v - mean);
  var /= static_cast<double>(batches - 1);
  est.mc_std_error = std::sqrt(var / static_cast<double>(batches));

  // Order statistics need of order 1/alpha samples per batch to resolve the
  // tail at all.
  if (static_cast<double>(T) < 100.0 / alpha) {
    est.method += " (few-samples warning)";
  }
  return est;
}

double ess_batch_means(const std::vector<double>& samples, int batches) {
  const std::size_t T = samples.size();
  if (T < 4) return static_cast<double>(T);
  const std::size_t b = T / static_cast<std::size_t>(std::max(batches, 2));
  if (b < 2) return static_cast<double>(T);

  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(T);
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= static_cast<double>(T - 1);
  if (var == 0.0) return static_cast<double>(T);

  const int nb = static_cast<int>(T / b);
  double bm_var = 0.0;
  double bm_mean = 0.0;
  std::vector<double> means(static_cast<std::size_t>(nb), 0.0);
  for (int k = 0; k < nb; ++k) {
    double m = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
      m += samples[static_cast<std::size_t>(k) * b + i];
    }
    means[static_cast<std::size_t>(k)] = m / static_cast<double>(b);
    bm_mean += means[static_cast<std::size_t>(k)];
  }
  bm_mean /= static_cast<double>(nb);
  for (double m : means) bm_var += (m - bm_mean) * (m - bm_mean);
  bm_var /= static_cast<double>(nb - 1);
  if (bm_var <= 0.0) return static_cast<double>(T);

  // asymptotic variance ~ b * bm_var; ESS = T * var / (b * bm_var)
  const double ess =
      static_cast<double>(T) * var / (static_cast<double>(b) * bm_var);
  return std::min(ess, static_cast<double>(T));
}

}  // namespace uq
