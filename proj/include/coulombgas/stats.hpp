#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "coulombgas/errors.hpp"

namespace coulombgas {

namespace detail {

/// Regularized upper incomplete gamma Q(a, x), series/continued-fraction split.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw ParameterViolation("gamma_q needs a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) by series
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 500; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
  }
  // Q(a,x) by Lentz continued fraction
  double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - lg);
}

}  // namespace detail

/// Two-sample chi-square homogeneity test on equal-length count vectors
/// (equal sample sizes); returns the p-value. Bins where both counts vanish
/// are dropped.
inline double chi2_two_sample_pvalue(const std::vector<double>& a,
                                     const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty())
    throw ParameterViolation("chi-square needs matching nonempty count vectors");
  double chi2 = 0.0;
  int dof = -1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double tot = a[i] + b[i];
    if (tot <= 0.0) continue;
    const double d = a[i] - b[i];
    chi2 += d * d / tot;
    ++dof;
  }
  if (dof < 1) return 1.0;
  return detail::gamma_q(0.5 * dof, 0.5 * chi2);
}

/// Sample mean and standard error of the mean via batch means.
struct BatchStats {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

inline BatchStats batch_stats(const std::vector<double>& samples, int batches = 32) {
  if (samples.empty()) throw ParameterViolation("batch stats need samples");
  batches = std::min<int>(batches, static_cast<int>(samples.size()));
  const std::size_t per = samples.size() / batches;
  std::vector<double> means;
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) acc += samples[i];
    means.push_back(acc / per);
  }
  double m = 0.0;
  for (double x : means) m += x;
  m /= means.size();
  double var = 0.0;
  for (double x : means) var += (x - m) * (x - m);
  var = means.size() > 1 ? var / (means.size() - 1) : 0.0;
  return {m, std::sqrt(var / means.size())};
}

}  // namespace coulombgas
