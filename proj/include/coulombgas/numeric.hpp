#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <utility>

namespace coulombgas {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A complex number kept as log-modulus and phase; multiplication of many
/// huge/tiny factors stays representable until the final exp().
struct LogPolar {
  double log_mod;  // log |x|, -inf for x == 0
  double phase;    // arg x

  Complex value() const {
    const double m = std::exp(log_mod);
    return {m * std::cos(phase), m * std::sin(phase)};
  }
};

inline LogPolar log_polar(Complex z) {
  return {std::log(std::abs(z)), std::arg(z)};
}

/// log-modulus and phase of z^m - 1 without forming z^m when |z| > 1.
/// For |z| >= 1 the factorization z^m (1 - z^-m) is used; for |z| < 1 the
/// power z^m itself is representable and the difference is formed directly.
inline LogPolar log_polar_pow_minus_one(Complex z, long m) {
  const double r = std::abs(z);
  const double th = std::arg(z);
  const double mlogr = static_cast<double>(m) * std::log(r);
  if (mlogr > 0.0) {
    // z^m - 1 = z^m * (1 - z^-m), |z^-m| < 1
    const double wm = std::exp(-mlogr);
    const Complex w{wm * std::cos(-m * th), wm * std::sin(-m * th)};
    const Complex rest = 1.0 - w;
    return {mlogr + std::log(std::abs(rest)), m * th + std::arg(rest)};
  }
  const double um = std::exp(mlogr);
  const Complex u{um * std::cos(m * th), um * std::sin(m * th)};
  return log_polar(u - 1.0);
}

inline double log_abs_pow_minus_one(Complex z, long m) {
  return log_polar_pow_minus_one(z, m).log_mod;
}

/// x / (1 - e^{-s x}), continued through x = 0 where the value is 1/s.
inline double ratio_x_over_one_minus_exp(double x, double s) {
  const double a = s * x;
  if (std::abs(a) < 1e-4) {
    // 1 - e^{-a} = a (1 - a/2 + a^2/6 - a^3/24 + ...)
    return (1.0 / s) / (1.0 - a / 2.0 + a * a / 6.0 - a * a * a / 24.0);
  }
  return x / (-std::expm1(-a));
}

/// (e^{i a phi} - 1) / (i phi), continued through phi = 0 (value a).
inline Complex expi_minus_one_over_iphi(double a, double phi) {
  const double x = a * phi;
  if (std::abs(x) < 1e-6) {
    // e^{ix} - 1 = ix (1 + ix/2 - x^2/6 + ...)
    return a * Complex{1.0 - x * x / 6.0, x / 2.0};
  }
  const Complex num{std::cos(x) - 1.0, std::sin(x)};
  return num / Complex{0.0, phi};
}

/// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

inline bool nearly_equal(double a, double b, double rel, double abs_floor = 0.0) {
  const double scale = std::max({std::abs(a), std::abs(b), abs_floor});
  return std::abs(a - b) <= rel * scale;
}

inline Complex expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

/// coef * x with the convention 0 * (+-inf) = 0; keeps log-domain products of
/// zeroth powers finite at r = 0.
inline double mul_log(double coef, double x) { return coef == 0.0 ? 0.0 : coef * x; }

}  // namespace coulombgas
