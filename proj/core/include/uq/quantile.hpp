#pragma once

#include <string>
#include <vector>

namespace uq {

/// Empirical threshold estimate with a Monte Carlo error bar.
struct QuantileEstimate {
  double gamma_hat = 0.0;
  double alpha = 0.0;
  double mc_std_error = 0.0;
  std::string method;
};

/// (1-alpha)-quantile with linear interpolation between order statistics
/// (h = (T-1)(1-alpha) + 1 on the sorted sample).
double empirical_quantile(std::vector<double> samples, double alpha);

/// Quantile plus a batch-means standard error over `batches` contiguous
/// blocks. For correlated (chain) samples contiguity is what makes the
/// batch spread a usable error estimate.
QuantileEstimate quantile_with_batch_error(const std::vector<double>& samples,
                                           double alpha, int batches = 20);

/// Effective sample size by the batch-means variance ratio.
double ess_batch_means(const std::vector<double>& samples, int batches = 20);

}  // namespace uq
