#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "coulombgas/ensemble.hpp"
#include "coulombgas/errors.hpp"
#include "coulombgas/kernel.hpp"
#include "coulombgas/metropolis.hpp"
#include "coulombgas/numeric.hpp"
#include "coulombgas/quadrature.hpp"
#include "coulombgas/stats.hpp"

namespace coulombgas {

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  long long samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

inline double log_gibbs_density(const EnsembleSpec& spec, double beta,
                                const std::vector<Complex>& points) {
  double lq = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    lq += log_weight(spec, points[j]);
    for (std::size_t l = j + 1; l < points.size(); ++l)
      lq += beta * std::log(std::abs(points[j] - points[l]));
  }
  return lq;
}

}  // namespace detail

/// Direct tensor-quadrature evaluation of the k-point correlation for tiny N
/// at any beta > 0. The partition integral is cached per refinement level.
class BruteForceOracle {
 public:
  BruteForceOracle(EnsembleSpec spec, double beta, double rel_tol = 1e-7)
      : spec_(std::move(spec)), beta_(beta), rel_tol_(rel_tol) {
    if (spec_.num_particles > 3)
      throw TooLarge("brute-force oracle is limited to N <= 3");
    if (std::isinf(spec_.geometry.outer_radius))
      throw TooLarge("brute-force oracle needs a bounded annulus");
  }

  double correlation(const std::vector<Complex>& points) {
    const int n = spec_.num_particles;
    const int k = static_cast<int>(points.size());
    if (k < 1 || k > n) throw ParameterOutOfRange("need 1 <= k <= N");
    if (n - k > 2) throw TooLarge("brute-force oracle needs N - k <= 2");
    double prefactor = 1.0;
    for (int i = 0; i < k; ++i) prefactor *= n - i;  // N!/(N-k)!
    double prev = 0.0;
    for (std::size_t level = 0; level < kLevels.size(); ++level) {
      const double num = free_integral(points, level, false);
      const double value = prefactor * num / partition(level);
      if (level > 0 && std::abs(value - prev) <= rel_tol_ * std::abs(value))
        return value;
      prev = value;
    }
    throw QuadratureNonConvergence("brute-force correlation did not converge");
  }

  double partition(std::size_t level) {
    if (z_cache_.size() <= level) z_cache_.resize(level + 1);
    if (!z_cache_[level])
      z_cache_[level] = free_integral({}, level, spec_.family == FamilyKind::ClassI);
    return *z_cache_[level];
  }

 private:
  // angular counts grow fast: class II weights shed their circle harmonics
  // only like r^{-k}, so the trapezoid needs generous node counts
  static constexpr std::array<std::pair<int, int>, 5> kLevels = {
      {{16, 32}, {24, 48}, {36, 72}, {54, 108}, {81, 162}}};

  /// Integral of the Gibbs density over the remaining N - |fixed| particles.
  /// With rotation reduction the first free angle is pinned at 0 and the
  /// angular volume 2 pi multiplies the result (class I symmetry).
  double free_integral(const std::vector<Complex>& fixed, std::size_t level,
                       bool reduce_rotation) {
    const auto [nr, na] = kLevels[level];
    const auto [rx, rw] = gauss_legendre_nodes(nr, spec_.geometry.inner_radius,
                                               spec_.geometry.outer_radius);
    const double dth = kTwoPi / na;
    std::vector<Complex> pts = fixed;
    const int n_free = spec_.num_particles - static_cast<int>(fixed.size());
    double total = 0.0;
    recurse(pts, n_free, reduce_rotation, rx, rw, na, dth, 1.0, total);
    return total;
  }

  void recurse(std::vector<Complex>& pts, int n_free, bool pin_angle,
               const std::vector<double>& rx, const std::vector<double>& rw, int na,
               double dth, double weight_acc, double& total) {
    if (n_free == 0) {
      total += weight_acc * std::exp(detail::log_gibbs_density(spec_, beta_, pts));
      return;
    }
    for (std::size_t i = 0; i < rx.size(); ++i) {
      const double r = rx[i];
      const double wr = rw[i] * r;
      if (pin_angle) {
        pts.push_back(r);
        recurse(pts, n_free - 1, false, rx, rw, na, dth, weight_acc * wr * kTwoPi,
                total);
        pts.pop_back();
      } else {
        for (int j = 0; j < na; ++j) {
          pts.push_back(r * expi(dth * j));
          recurse(pts, n_free - 1, false, rx, rw, na, dth, weight_acc * wr * dth,
                  total);
          pts.pop_back();
        }
      }
    }
  }

  EnsembleSpec spec_;
  double beta_;
  double rel_tol_;
  std::vector<std::optional<double>> z_cache_;
};

inline double brute_force_correlation(const EnsembleSpec& spec, double beta,
                                      const std::vector<Complex>& points,
                                      double rel_tol = 1e-7) {
  BruteForceOracle oracle(spec, beta, rel_tol);
  return oracle.correlation(points);
}

// --- Metropolis estimates -------------------------------------------------------

namespace detail {

/// Annular-sector counting bin (disc bin when the target point sits at the
/// origin); area is exact, containment wraps the angle.
struct CountingBin {
  bool origin = false;
  double r0 = 0.0, th0 = 0.0;
  double half_r = 0.0, half_th = 0.0, disc_radius = 0.0;
  double area = 0.0;

  bool contains(Complex z) const {
    if (origin) return std::abs(z) <= disc_radius;
    const double r = std::abs(z);
    if (std::abs(r - r0) > half_r) return false;
    double d = std::remainder(std::arg(z) - th0, kTwoPi);
    return std::abs(d) <= half_th;
  }
};

inline CountingBin make_bin(const EnsembleSpec& spec, Complex point,
                            double bin_scale) {
  const double span = std::isinf(spec.geometry.outer_radius)
                          ? 2.0 * spec.geometry.inner_radius
                          : spec.geometry.outer_radius - spec.geometry.inner_radius;
  const double half_r = 0.09 * span * bin_scale;
  CountingBin bin;
  bin.r0 = std::abs(point);
  bin.th0 = std::arg(point);
  if (bin.r0 < 1.5 * half_r) {
    bin.origin = true;
    bin.disc_radius = 2.0 * half_r;
    bin.area = kPi * bin.disc_radius * bin.disc_radius;
  } else {
    bin.half_r = half_r;
    bin.half_th = std::min(half_r / bin.r0, 0.9 * kPi);
    bin.area = 4.0 * bin.r0 * bin.half_r * bin.half_th;
  }
  return bin;
}

}  // namespace detail

/// Metropolis estimate of the k-point correlation via binned local densities:
/// counts of ordered k-tuples landing in small bins around the requested
/// points, divided by the bin areas. Reproducible per seed.
inline McEstimate mc_correlation(const EnsembleSpec& spec, double beta,
                                 const std::vector<Complex>& points,
                                 long long n_samples, std::uint64_t seed,
                                 double bin_scale = 1.0) {
  if (n_samples < 10000) throw ParameterViolation("need n_samples >= 1e4");
  const int k = static_cast<int>(points.size());
  if (k < 1 || k > spec.num_particles)
    throw ParameterOutOfRange("need 1 <= k <= N");
  std::vector<detail::CountingBin> bins;
  double area_product = 1.0;
  for (const auto& p : points) {
    bins.push_back(detail::make_bin(spec, p, bin_scale));
    area_product *= bins.back().area;
  }
  GasWalker walker(spec, beta, seed);
  walker.burn_in(std::max<long long>(200, n_samples / 10));
  std::vector<double> counts;
  counts.reserve(n_samples);
  std::vector<int> in_bin(spec.num_particles);
  for (long long s = 0; s < n_samples; ++s) {
    walker.sweep();
    const Configuration config = walker.state();
    double count = 0.0;
    if (k == 1) {
      for (const auto& z : config) count += bins[0].contains(z) ? 1.0 : 0.0;
    } else if (k == 2) {
      double c1 = 0.0, c2 = 0.0, c12 = 0.0;
      for (const auto& z : config) {
        const bool a = bins[0].contains(z);
        const bool b = bins[1].contains(z);
        c1 += a;
        c2 += b;
        c12 += a && b;
      }
      // ordered pairs of distinct particles
      count = c1 * c2 - c12;
    } else {
      // general k: ordered tuples of distinct particles, inclusion by brute
      // enumeration (k is tiny)
      double tuples = 0.0;
      const int n = spec.num_particles;
      std::vector<int> choice(k, 0);
      const long long total = static_cast<long long>(std::pow(n, k));
      for (long long code = 0; code < total; ++code) {
        long long c = code;
        bool ok = true;
        for (int d = 0; d < k && ok; ++d) {
          choice[d] = static_cast<int>(c % n);
          c /= n;
          for (int e = 0; e < d; ++e)
            if (choice[e] == choice[d]) ok = false;
          if (ok && !bins[d].contains(config[choice[d]])) ok = false;
        }
        if (ok) tuples += 1.0;
      }
      count = tuples;
    }
    counts.push_back(count);
  }
  const auto stats = batch_stats(counts, 32);
  return {stats.mean / area_product, stats.stderr_mean / area_product, n_samples,
          seed};
}

/// The same estimate at the default and a halved bin size; the shift between
/// them diagnoses the discretization bias of the binned estimator.
struct McSensitivity {
  McEstimate coarse;
  McEstimate fine;
  double relative_shift = 0.0;
};

inline McSensitivity mc_correlation_sensitivity(const EnsembleSpec& spec, double beta,
                                                const std::vector<Complex>& points,
                                                long long n_samples,
                                                std::uint64_t seed) {
  const McEstimate coarse = mc_correlation(spec, beta, points, n_samples, seed, 1.0);
  const McEstimate fine = mc_correlation(spec, beta, points, n_samples, seed, 0.5);
  return {coarse, fine, std::abs(coarse.value - fine.value) / coarse.value};
}

// --- inversion duality -----------------------------------------------------------

/// Ensemble of the inversion image z -> 1/z on the reciprocal annulus. With
/// the weight convention g(r) r^{2 Gamma} |z^M-1|^{-2}, the transformed weight
/// w(1/z~)/|z~|^{beta(N-1)+4} is again of that shape with g~(r) = g(1/r) and
/// Gamma~ = -Gamma + M - (beta/2)(N-1) - 2; Type A and Type B trade places.
inline EnsembleSpec dual_spec(const EnsembleSpec& spec, double beta) {
  const double r_in = spec.geometry.outer_radius;
  AnnulusGeometry geo{std::isinf(r_in) ? 0.0 : 1.0 / r_in,
                      spec.geometry.inner_radius == 0.0
                          ? std::numeric_limits<double>::infinity()
                          : 1.0 / spec.geometry.inner_radius};
  const double gamma_dual = -spec.charges.origin_charge +
                            spec.charges.negative_charges -
                            0.5 * beta * (spec.num_particles - 1) - 2.0;
  FamilyKind family = FamilyKind::ClassI;
  if (spec.family == FamilyKind::ClassIIExteriorTypeA)
    family = FamilyKind::ClassIIInteriorTypeB;
  else if (spec.family == FamilyKind::ClassIIInteriorTypeB)
    family = FamilyKind::ClassIIExteriorTypeA;
  return build_ensemble(spec.num_particles, spec.beta, geo, spec.profile.inverted(),
                        {gamma_dual, spec.charges.negative_charges}, family);
}

enum class DualityMethod { Determinantal, BruteForce, MonteCarlo };

struct DualityReport {
  double residual = 0.0;  // |rho - prod |z~|^4 rho~| / rho
  double sigma = 0.0;     // residual standard error (Monte Carlo only)
};

/// Checks rho(z_1..z_k) = prod_j |z~_j|^4 rho~(z~_1..z~_k) with z~ = 1/z on
/// the reciprocal-annulus dual ensemble.
inline DualityReport duality_check(const EnsembleSpec& spec, double beta,
                                   const std::vector<Complex>& points,
                                   DualityMethod method, long long mc_samples = 200000,
                                   std::uint64_t seed = 20240901) {
  const EnsembleSpec dual = dual_spec(spec, beta);
  std::vector<Complex> dual_points;
  double jacobian = 1.0;
  for (const auto& z : points) {
    const Complex zt = 1.0 / z;
    dual_points.push_back(zt);
    jacobian *= std::pow(std::abs(zt), 4.0);
  }
  switch (method) {
    case DualityMethod::Determinantal: {
      if (beta != 2.0)
        throw BetaMismatch("determinantal duality check requires beta = 2");
      const double rho = build_kernel(spec).correlation(points).value;
      const double rho_dual = build_kernel(dual).correlation(dual_points).value;
      return {std::abs(rho - jacobian * rho_dual) / rho, 0.0};
    }
    case DualityMethod::BruteForce: {
      const double rho = brute_force_correlation(spec, beta, points);
      const double rho_dual = brute_force_correlation(dual, beta, dual_points);
      return {std::abs(rho - jacobian * rho_dual) / rho, 0.0};
    }
    case DualityMethod::MonteCarlo: {
      const McEstimate rho = mc_correlation(spec, beta, points, mc_samples, seed);
      const McEstimate rho_dual =
          mc_correlation(dual, beta, dual_points, mc_samples, seed + 1);
      const double resid = std::abs(rho.value - jacobian * rho_dual.value) / rho.value;
      const double sigma = std::sqrt(rho.stderr_ * rho.stderr_ +
                                     jacobian * jacobian * rho_dual.stderr_ *
                                         rho_dual.stderr_) /
                           rho.value;
      return {resid, sigma};
    }
  }
  throw ParameterViolation("unknown duality method");
}

}  // namespace coulombgas
