#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "coulombgas/ensemble.hpp"
#include "coulombgas/errors.hpp"
#include "coulombgas/numeric.hpp"
#include "coulombgas/orthopoly.hpp"
#include "coulombgas/quadrature.hpp"

namespace coulombgas {

struct CorrelationResult {
  double value = 0.0;      // k-point correlation, clamped at 0 near zero
  double condition = 1.0;  // max/min pivot of the Hermitian factorization
};

/// Finite-N determinantal kernel
///   K(z1,z2) = sqrt(w(z1) w(z2)) sum_n p_n(z1) conj(p_n(z2)) / h_n
/// with every summand assembled as exp(log-modulus) * phase. The shared
/// summand path makes K(z2,z1) == conj(K(z1,z2)) exact as computed.
class KernelEvaluator {
 public:
  KernelEvaluator(EnsembleSpec spec, PolynomialFamily family, NormTable norms)
      : spec_(std::move(spec)), family_(family), norms_(std::move(norms)) {}

  const EnsembleSpec& spec() const { return spec_; }
  const PolynomialFamily& family() const { return family_; }
  const NormTable& norms() const { return norms_; }

  /// Optional pointwise gauge c(z) = e^{i chi(z)}: K -> c(z1) K conj(c(z2)).
  /// Correlations are invariant under this; used to exercise that claim.
  void set_gauge(std::function<double(Complex)> chi) { gauge_ = std::move(chi); }

  Complex eval(Complex z1, Complex z2) const {
    check_support(z1);
    check_support(z2);
    return sum_range(z1, z2, 0, spec_.num_particles);
  }

  /// (K1, K2): the partial sums over the two polynomial branches of a class II
  /// family. Requires M < N; with M >= N only one branch exists.
  std::pair<Complex, Complex> split_eval(Complex z1, Complex z2) const {
    if (spec_.family == FamilyKind::ClassI)
      throw SplitUndefined("kernel split requires a class II family");
    const int n_split = split_index();
    check_support(z1);
    check_support(z2);
    return {sum_range(z1, z2, 0, n_split),
            sum_range(z1, z2, n_split, spec_.num_particles)};
  }

  double density(Complex z) const { return eval(z, z).real(); }

  /// det[K(z_j, z_l)] via LDLT with diagonal pivoting; tiny negatives from
  /// roundoff are clamped, anything worse reports a kernel bug.
  CorrelationResult correlation(const std::vector<Complex>& points) const {
    const int k = static_cast<int>(points.size());
    if (k < 1 || k > spec_.num_particles)
      throw ParameterOutOfRange("correlation order must satisfy 1 <= k <= N");
    Eigen::MatrixXcd a(k, k);
    for (int i = 0; i < k; ++i) {
      a(i, i) = density(points[i]);
      for (int j = i + 1; j < k; ++j) {
        const Complex v = eval(points[i], points[j]);
        a(i, j) = v;
        a(j, i) = std::conj(v);
      }
    }
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    const Eigen::VectorXd d = ldlt.vectorD().real();
    double det = 1.0, dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i) {
      det *= d(i);
      dmax = std::max(dmax, std::abs(d(i)));
      dmin = std::min(dmin, std::abs(d(i)));
    }
    double scale = 1.0;
    for (int i = 0; i < k; ++i) scale *= std::max(a(i, i).real(), 1e-300);
    if (det < 0.0) {
      if (-det < 1e-12 * scale)
        det = 0.0;
      else
        throw NegativeDeterminant("correlation determinant negative beyond tolerance");
    }
    const double cond =
        dmin == 0.0 ? std::numeric_limits<double>::infinity() : dmax / dmin;
    return {det, cond};
  }

 private:
  int split_index() const {
    const int n = spec_.num_particles;
    const int m = spec_.charges.negative_charges;
    if (m >= n) throw SplitUndefined("M >= N: only one polynomial branch present");
    return spec_.family == FamilyKind::ClassIIExteriorTypeA ? m : n - m;
  }

  void check_support(Complex z) const {
    const double r = std::abs(z);
    const double lo = spec_.geometry.inner_radius * (1.0 - 1e-12);
    const double hi = spec_.geometry.outer_radius * (1.0 + 1e-12);
    if (!(r >= lo && r <= hi)) throw OutOfSupport("point outside the closed annulus");
  }

  double half_log_weight(Complex z) const {
    const double r = std::abs(z);
    double lw = 0.5 * spec_.profile.log_value(r) +
                mul_log(spec_.charges.origin_charge, std::log(r));
    if (spec_.has_negative_charges())
      lw -= log_abs_pow_minus_one(z, spec_.charges.negative_charges);
    return lw;
  }

  Complex sum_range(Complex z1, Complex z2, int n_begin, int n_end) const {
    // every float expression below is symmetric in (z1, z2) up to exact
    // conjugation, so Hermiticity holds bit for bit
    const double base = half_log_weight(z1) + half_log_weight(z2);
    double re = 0.0, im = 0.0;
    for (int n = n_begin; n < n_end; ++n) {
      const LogPolar p1 = poly_eval_log(family_, n, z1);
      const LogPolar p2 = poly_eval_log(family_, n, z2);
      const double mag = std::exp(base + (p1.log_mod + p2.log_mod) - norms_.log_h[n]);
      const double phase = p1.phase - p2.phase;
      re += mag * std::cos(phase);
      im += mag * std::sin(phase);
    }
    Complex k{re, im};
    if (gauge_) k *= expi(gauge_(z1) - gauge_(z2));
    return k;
  }

  EnsembleSpec spec_;
  PolynomialFamily family_;
  NormTable norms_;
  std::function<double(Complex)> gauge_;
};

/// Builds the evaluator; determinantal structure requires beta = 2 exactly.
inline KernelEvaluator build_kernel(const EnsembleSpec& spec,
                                    double norm_rel_tol = 1e-12) {
  if (spec.beta != 2.0)
    throw BetaMismatch("determinantal kernel requires beta = 2 exactly");
  return KernelEvaluator(spec, PolynomialFamily::for_spec(spec),
                         make_norm_table(spec, norm_rel_tol));
}

// --- closed forms (flat profile, monomial class) -----------------------------

/// Disc kernel in zeta = z1 conj(z2) / v^2; direct summation takes over inside
/// a 1e-6 disc around the removable singularity zeta = 1.
inline Complex closed_form_disc_kernel(int num_particles, double gamma, double v,
                                       Complex z1, Complex z2) {
  if (!(gamma > -1.0))
    throw ParameterViolation("disc closed form requires Gamma > -1");
  if (std::abs(z1) > v * (1 + 1e-12) || std::abs(z2) > v * (1 + 1e-12))
    throw ParameterViolation("points must satisfy |z| <= v");
  const Complex zeta = z1 * std::conj(z2) / (v * v);
  const double mod_pref = std::pow(std::abs(zeta), gamma);
  if (std::abs(1.0 - zeta) < 1e-6) {
    Complex sum = 0.0, zp = 1.0;
    for (int n = 0; n < num_particles; ++n) {
      sum += (2.0 * n + 2.0 * gamma + 2.0) * zp;
      zp *= zeta;
    }
    return mod_pref / (kTwoPi * v * v) * sum;
  }
  const Complex zn = std::pow(zeta, num_particles);
  const Complex one_minus = 1.0 - zeta;
  const Complex body = (1.0 - zn) / one_minus - static_cast<double>(num_particles) * zn +
                       gamma * (1.0 - zn);
  return mod_pref / (kPi * v * v * one_minus) * body;
}

/// Exterior-disc kernel in eta = z1 conj(z2) / R^2. The large powers
/// |eta|^Gamma eta^N are assembled in log-modulus form (Gamma < -N keeps the
/// combined exponent bounded); the phase e^{iN(theta1-theta2)} inherent in
/// eta^N is kept as computed.
inline Complex closed_form_exterior_kernel(int num_particles, double gamma, double inner,
                                           Complex z1, Complex z2) {
  if (!(gamma < -static_cast<double>(num_particles)))
    throw ParameterViolation("exterior closed form requires Gamma < -N");
  if (std::abs(z1) < inner * (1 - 1e-12) || std::abs(z2) < inner * (1 - 1e-12))
    throw ParameterViolation("points must satisfy |z| >= R");
  const Complex eta = z1 * std::conj(z2) / (inner * inner);
  const double log_eta = std::log(std::abs(eta));
  const double arg_eta = std::arg(eta);
  if (std::abs(eta - 1.0) < 1e-6) {
    Complex sum = 0.0, ep = 1.0;
    for (int n = 0; n < num_particles; ++n) {
      sum += (2.0 * n + 2.0 * gamma + 2.0) * ep;
      ep *= eta;
    }
    return -std::exp(gamma * log_eta) / (kTwoPi * inner * inner) * sum;
  }
  // A = |eta|^Gamma eta^N, B = |eta|^Gamma
  const double mod_a = std::exp((gamma + num_particles) * log_eta);
  const Complex a = mod_a * expi(num_particles * arg_eta);
  const Complex b{std::exp(gamma * log_eta), 0.0};
  const Complex em1 = eta - 1.0;
  const Complex body =
      (a - b) / em1 - static_cast<double>(num_particles) * a - gamma * (a - b);
  return body / (kPi * inner * inner * em1);
}

// --- integral self-checks -----------------------------------------------------

/// Integral of the density over the annulus; orthonormality forces the value N.
inline double total_mass(const KernelEvaluator& kernel, double rel_tol = 1e-9) {
  const auto& geo = kernel.spec().geometry;
  auto ring = [&](double r) {
    return r * periodic_trapezoid(
                   [&](double th) { return kernel.density(r * expi(th)); },
                   rel_tol * 0.05, 0.0, 16);
  };
  if (geo.is_exterior_disc())
    return integrate_to_infinity(ring, geo.inner_radius, rel_tol * 0.3);
  return integrate(ring, geo.inner_radius, geo.outer_radius, rel_tol * 0.3);
}

/// | int K(z1,w) K(w,z2) dw  -  K(z1,z2) |, relative to the kernel scale.
/// Zero for an exact projection kernel.
inline double reproducing_defect(const KernelEvaluator& kernel, Complex z1, Complex z2,
                                 double rel_tol = 1e-9) {
  const auto& geo = kernel.spec().geometry;
  auto ring = [&](double r) -> Complex {
    return static_cast<Complex>(r) *
           periodic_trapezoid(
               [&](double th) {
                 const Complex w = r * expi(th);
                 return kernel.eval(z1, w) * kernel.eval(w, z2);
               },
               rel_tol * 0.05, 0.0, 16);
  };
  Complex integral;
  if (geo.is_exterior_disc())
    integral = integrate_to_infinity(ring, geo.inner_radius, rel_tol * 0.3);
  else
    integral = integrate(ring, geo.inner_radius, geo.outer_radius, rel_tol * 0.3);
  const Complex direct = kernel.eval(z1, z2);
  const double scale =
      std::max(std::abs(direct), std::sqrt(kernel.density(z1) * kernel.density(z2)));
  return std::abs(integral - direct) / scale;
}

}  // namespace coulombgas
