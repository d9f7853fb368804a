#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "coulombgas/ensemble.hpp"
#include "coulombgas/errors.hpp"
#include "coulombgas/numeric.hpp"

namespace coulombgas {

/// Metropolis random walk targeting the Gibbs density
/// prod_j w(z_j) prod_{j<l} |z_j - z_l|^beta at any beta > 0.
/// Single-particle radial-angular Gaussian proposals; the chain state lives
/// in polar coordinates, so the target carries the r Jacobian per particle.
class GasWalker {
 public:
  GasWalker(EnsembleSpec spec, double beta, std::uint64_t seed)
      : spec_(std::move(spec)), beta_(beta), rng_(seed) {
    const double lo = spec_.geometry.inner_radius;
    const double hi = std::isinf(spec_.geometry.outer_radius)
                          ? std::max(1.0, 3.0 * lo)
                          : spec_.geometry.outer_radius;
    const int n = spec_.num_particles;
    radius_.resize(n);
    angle_.resize(n);
    std::uniform_real_distribution<double> ur(lo, hi), ua(0.0, kTwoPi);
    for (int j = 0; j < n; ++j) {
      radius_[j] = ur(rng_);
      angle_[j] = ua(rng_);
    }
    step_r_ = 0.25 * (hi - lo);
    step_a_ = 0.5;
  }

  const EnsembleSpec& spec() const { return spec_; }

  Configuration state() const {
    Configuration out(radius_.size());
    for (std::size_t j = 0; j < radius_.size(); ++j)
      out[j] = radius_[j] * expi(angle_[j]);
    return out;
  }

  /// One sweep = N single-particle updates.
  void sweep() {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = spec_.num_particles;
    for (int j = 0; j < n; ++j) {
      const double r_new = radius_[j] + step_r_ * gauss(rng_);
      double a_new = angle_[j] + step_a_ * gauss(rng_);
      a_new = std::fmod(a_new, kTwoPi);
      if (a_new < 0.0) a_new += kTwoPi;
      ++proposed_;
      if (r_new <= 0.0) continue;
      const double delta = log_target_term(j, r_new, a_new) -
                           log_target_term(j, radius_[j], angle_[j]);
      if (delta >= 0.0 || std::log(uniform_(rng_)) < delta) {
        radius_[j] = r_new;
        angle_[j] = a_new;
        ++accepted_;
      }
    }
  }

  /// Burn-in with step-size tuning toward ~35% acceptance; tuning stops here
  /// so the production chain satisfies detailed balance.
  void burn_in(long long sweeps) {
    const long long block = std::max<long long>(10, sweeps / 20);
    long long done = 0;
    while (done < sweeps) {
      proposed_ = accepted_ = 0;
      for (long long i = 0; i < block && done < sweeps; ++i, ++done) sweep();
      const double rate = acceptance_rate();
      const double f = std::exp(1.2 * (rate - 0.35));
      step_r_ = std::clamp(step_r_ * f, 1e-6, 10.0);
      step_a_ = std::clamp(step_a_ * f, 1e-6, kPi);
    }
    proposed_ = accepted_ = 0;
  }

  double acceptance_rate() const {
    return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / proposed_;
  }

 private:
  double log_target_term(int j, double r, double a) const {
    const Complex z = r * expi(a);
    double lt = log_weight(spec_, z) + std::log(r);
    if (std::isinf(lt)) return lt;
    for (std::size_t l = 0; l < radius_.size(); ++l) {
      if (static_cast<int>(l) == j) continue;
      const Complex other = radius_[l] * expi(angle_[l]);
      const double d = std::abs(z - other);
      if (d == 0.0) return -std::numeric_limits<double>::infinity();
      lt += beta_ * std::log(d);
    }
    return lt;
  }

  EnsembleSpec spec_;
  double beta_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::vector<double> radius_, angle_;
  double step_r_, step_a_;
  long long proposed_ = 0, accepted_ = 0;
};

}  // namespace coulombgas
