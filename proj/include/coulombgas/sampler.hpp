#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "coulombgas/ensemble.hpp"
#include "coulombgas/errors.hpp"
#include "coulombgas/metropolis.hpp"
#include "coulombgas/numeric.hpp"

namespace coulombgas {

/// Exact sampler for the moduli {|z_j|} of a class I ensemble at beta = 2:
/// the N radii are independent, the n-th with density proportional to
/// g(r) r^{2n + 2 Gamma + 1} on [R, v]. Sampling is inverse-CDF on
/// quadrature-built tables with monotone cubic interpolation, refined until
/// the CDF sup-error between refinements drops below tolerance.
class RadialModuliSampler {
 public:
  explicit RadialModuliSampler(EnsembleSpec spec, double cdf_tol = 1e-10)
      : spec_(std::move(spec)) {
    if (spec_.family != FamilyKind::ClassI)
      throw ParameterViolation("independent-moduli sampling needs a class I family");
    if (spec_.beta != 2.0)
      throw BetaMismatch("independent-moduli sampling needs beta = 2");
    if (std::isinf(spec_.geometry.outer_radius))
      throw ParameterViolation("independent-moduli sampling needs a bounded annulus");
    tables_.reserve(spec_.num_particles);
    for (int n = 0; n < spec_.num_particles; ++n) tables_.push_back(build(n, cdf_tol));
  }

  const EnsembleSpec& spec() const { return spec_; }

  std::vector<double> sample(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<double> radii(tables_.size());
    for (std::size_t n = 0; n < tables_.size(); ++n)
      radii[n] = quantile(static_cast<int>(n), uniform(rng));
    return radii;
  }

  double cdf(int n, double r) const { return tables_.at(n).forward(r); }
  double quantile(int n, double u) const {
    const auto& t = tables_.at(n);
    if (u <= 0.0) return t.forward.x.front();
    if (u >= 1.0) return t.forward.x.back();
    return t.inverse(u);
  }
  double bin_probability(int n, double lo, double hi) const {
    return cdf(n, hi) - cdf(n, lo);
  }

 private:
  struct Table {
    detail::MonotoneCubic forward;  // r -> F
    detail::MonotoneCubic inverse;  // F -> r
  };

  Table build(int n, double cdf_tol) const {
    const double lo = spec_.geometry.inner_radius;
    const double hi = spec_.geometry.outer_radius;
    const double gamma = spec_.charges.origin_charge;
    auto density = [&](double r) {
      if (r == 0.0) return 0.0;
      return spec_.profile(r) *
             std::exp((2.0 * n + 2.0 * gamma + 1.0) * std::log(r / hi));
    };
    int cells = 4096;
    std::vector<double> grid, cum;
    std::vector<double> prev_cum;
    while (cells <= (1 << 16)) {
      grid.assign(cells + 1, 0.0);
      cum.assign(cells + 1, 0.0);
      const double h = (hi - lo) / cells;
      for (int i = 0; i <= cells; ++i) grid[i] = lo + h * i;
      // composite Simpson per cell
      for (int i = 0; i < cells; ++i) {
        const double a = grid[i], b = grid[i + 1];
        const double seg =
            (b - a) / 6.0 * (density(a) + 4.0 * density(0.5 * (a + b)) + density(b));
        cum[i + 1] = cum[i] + seg;
      }
      const double total = cum.back();
      if (!(total > 0.0)) throw CdfBuildFailure("radial density has zero mass");
      for (auto& c : cum) c /= total;
      if (!prev_cum.empty()) {
        double sup = 0.0;
        for (std::size_t i = 0; i < prev_cum.size(); ++i)
          sup = std::max(sup, std::abs(prev_cum[i] - cum[2 * i]));
        if (sup < cdf_tol) break;
      }
      prev_cum = cum;
      cells *= 2;
      if (cells > (1 << 16))
        throw CdfBuildFailure("CDF refinement failed to reach tolerance");
    }
    // strictly increasing subsequence for the inverse table
    std::vector<double> fi{cum.front()}, ri{grid.front()};
    for (std::size_t i = 1; i < cum.size(); ++i) {
      if (cum[i] > fi.back()) {
        fi.push_back(cum[i]);
        ri.push_back(grid[i]);
      }
    }
    if (fi.size() < 2) throw CdfBuildFailure("degenerate radial CDF");
    return Table{detail::MonotoneCubic(grid, cum), detail::MonotoneCubic(fi, ri)};
  }

  EnsembleSpec spec_;
  std::vector<Table> tables_;
};

inline std::vector<double> radial_moduli_sample(const EnsembleSpec& spec,
                                                std::uint64_t seed) {
  RadialModuliSampler sampler(spec);
  std::mt19937_64 rng(seed);
  return sampler.sample(rng);
}

/// Thinned Metropolis chain over configurations at any beta; thinning counts
/// sweeps between stored states and defaults to N.
inline std::vector<Configuration> mcmc_configurations(const EnsembleSpec& spec,
                                                      double beta, int n_configs,
                                                      int thinning,
                                                      std::uint64_t seed) {
  if (n_configs < 1) throw ParameterViolation("need n_configs >= 1");
  if (thinning <= 0) thinning = spec.num_particles;
  GasWalker walker(spec, beta, seed);
  walker.burn_in(
      std::max<long long>(500, static_cast<long long>(n_configs) * thinning / 10));
  std::vector<Configuration> out;
  out.reserve(n_configs);
  for (int c = 0; c < n_configs; ++c) {
    for (int s = 0; s < thinning; ++s) walker.sweep();
    out.push_back(walker.state());
  }
  return out;
}

}  // namespace coulombgas
