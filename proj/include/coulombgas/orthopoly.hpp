#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "coulombgas/ensemble.hpp"
#include "coulombgas/errors.hpp"
#include "coulombgas/io.hpp"
#include "coulombgas/numeric.hpp"
#include "coulombgas/quadrature.hpp"

namespace coulombgas {

/// The polynomial families diagonalizing the three ensemble classes.
///
/// Monomial                p_n(z) = z^n
/// Type A (exterior, M)    p_n(z) = z^n for n < M, z^{n-M}(z^M - 1) for n >= M
/// Type B (interior, M, N) p_n(z) = z^n(1 - z^M) for n < N-M, z^n otherwise;
///                         all monomials when M >= N
struct PolynomialFamily {
  enum class Kind { Monomial, TypeA, TypeB };

  Kind kind = Kind::Monomial;
  int m = 0;              // negative charge count M
  int num_particles = 0;  // N, Type B only

  static PolynomialFamily monomial() { return {Kind::Monomial, 0, 0}; }
  static PolynomialFamily type_a(int m) {
    if (m < 1) throw ParameterViolation("Type A requires M >= 1");
    return {Kind::TypeA, m, 0};
  }
  static PolynomialFamily type_b(int m, int num_particles) {
    if (m < 1 || num_particles < 1)
      throw ParameterViolation("Type B requires M >= 1 and N >= 1");
    return {Kind::TypeB, m, num_particles};
  }
  static PolynomialFamily for_spec(const EnsembleSpec& spec) {
    switch (spec.family) {
      case FamilyKind::ClassI:
        return monomial();
      case FamilyKind::ClassIIExteriorTypeA:
        return type_a(spec.charges.negative_charges);
      case FamilyKind::ClassIIInteriorTypeB:
        return type_b(spec.charges.negative_charges, spec.num_particles);
    }
    return monomial();
  }

  /// True when index n belongs to the branch carrying the (z^M - 1) factor.
  bool charged_branch(int n) const {
    switch (kind) {
      case Kind::Monomial:
        return false;
      case Kind::TypeA:
        return n >= m;
      case Kind::TypeB:
        return m < num_particles && n < num_particles - m;
    }
    return false;
  }

  void check_index(int n) const {
    if (n < 0) throw IndexOutOfRange("polynomial index must be >= 0");
    if (kind == Kind::TypeB && n >= num_particles)
      throw IndexOutOfRange("Type B index must satisfy n < N");
  }
};

inline Complex poly_eval(const PolynomialFamily& family, int n, Complex z) {
  family.check_index(n);
  const auto ipow = [](Complex base, int e) {
    Complex acc{1.0, 0.0};
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
  };
  switch (family.kind) {
    case PolynomialFamily::Kind::Monomial:
      return ipow(z, n);
    case PolynomialFamily::Kind::TypeA:
      if (n < family.m) return ipow(z, n);
      return ipow(z, n - family.m) * (ipow(z, family.m) - 1.0);
    case PolynomialFamily::Kind::TypeB:
      if (family.charged_branch(n)) return ipow(z, n) * (1.0 - ipow(z, family.m));
      return ipow(z, n);
  }
  return {};
}

/// Same value as poly_eval, but in log-modulus/phase form; safe for
/// n ~ 10^3 and |z| far from 1.
inline LogPolar poly_eval_log(const PolynomialFamily& family, int n, Complex z) {
  family.check_index(n);
  const double logr = std::log(std::abs(z));
  const double th = std::arg(z);
  switch (family.kind) {
    case PolynomialFamily::Kind::Monomial:
      return {mul_log(n, logr), n * th};
    case PolynomialFamily::Kind::TypeA: {
      if (n < family.m) return {mul_log(n, logr), n * th};
      const LogPolar f = log_polar_pow_minus_one(z, family.m);
      return {mul_log(n - family.m, logr) + f.log_mod,
              (n - family.m) * th + f.phase};
    }
    case PolynomialFamily::Kind::TypeB: {
      if (!family.charged_branch(n)) return {mul_log(n, logr), n * th};
      // 1 - z^M = -(z^M - 1)
      const LogPolar f = log_polar_pow_minus_one(z, family.m);
      return {mul_log(n, logr) + f.log_mod, n * th + f.phase + kPi};
    }
  }
  return {};
}

/// Squared norm of one basis function together with its logarithm.
struct NormValue {
  double h = 0.0;
  double log_h = 0.0;
};

namespace detail {

struct RadialIntegrand {
  double q = 0.0;          // h_n = 2 pi int g(r) r^{q-1} Phi(r) dr
  int denom_charges = 0;   // M when Phi = 1/(1 - r^{-2M}), 0 when Phi = 1
  bool interior = false;   // Phi = 1/(r^{-2M} - 1) instead

  double factor(double r) const {
    if (denom_charges == 0) return 1.0;
    const double p = std::pow(r, -2.0 * denom_charges);
    return interior ? 1.0 / (p - 1.0) : 1.0 / (1.0 - p);
  }
};

inline RadialIntegrand radial_integrand(const EnsembleSpec& spec, int n) {
  const PolynomialFamily family = PolynomialFamily::for_spec(spec);
  family.check_index(n);
  const double gamma = spec.charges.origin_charge;
  const int m = spec.charges.negative_charges;
  RadialIntegrand out;
  switch (family.kind) {
    case PolynomialFamily::Kind::Monomial:
      out.q = 2.0 * n + 2.0 * gamma + 2.0;
      break;
    case PolynomialFamily::Kind::TypeA:
      out.q = 2.0 * (n + gamma - m) + 2.0;
      if (n < m) out.denom_charges = m;
      break;
    case PolynomialFamily::Kind::TypeB:
      if (family.charged_branch(n)) {
        out.q = 2.0 * (gamma + n) + 2.0;
      } else {
        out.q = 2.0 * (gamma - m + n) + 2.0;
        out.denom_charges = m;
        out.interior = true;
      }
      break;
  }
  return out;
}

/// log of 2 pi (v^q - R^q)/q, valid through R = 0 and v = inf.
inline NormValue power_law_norm(double inner, double outer, double q) {
  if (q == 0.0) {
    if (inner == 0.0 || std::isinf(outer))
      throw ParameterViolation("norm integral diverges (q = 0 on unbounded range)");
    const double h = kTwoPi * std::log(outer / inner);
    return {h, std::log(h)};
  }
  double log_h;
  if (q > 0.0) {
    if (std::isinf(outer)) throw ParameterViolation("norm integral diverges at infinity");
    const double ratio = inner == 0.0 ? 0.0 : std::exp(q * std::log(inner / outer));
    log_h = std::log(kTwoPi / q) + q * std::log(outer) + std::log1p(-ratio);
  } else {
    if (inner == 0.0) throw ParameterViolation("norm integral diverges at the origin");
    const double ratio =
        std::isinf(outer) ? 0.0 : std::exp(q * std::log(outer / inner));
    log_h = std::log(kTwoPi / -q) + q * std::log(inner) + std::log1p(-ratio);
  }
  return {std::exp(log_h), log_h};
}

}  // namespace detail

/// Closed-form h_n. Exists for flat/power profiles on the branches whose
/// radial integrand is a pure power; everything else is NoClosedForm.
inline NormValue norm_closed(const EnsembleSpec& spec, int n) {
  const auto integrand = detail::radial_integrand(spec, n);
  if (integrand.denom_charges != 0)
    throw NoClosedForm("charged-branch norm has no elementary antiderivative");
  double q = integrand.q;
  switch (spec.profile.kind()) {
    case ProfileKind::Flat:
      break;
    case ProfileKind::Power:
      q += spec.profile.alpha();
      break;
    case ProfileKind::Tabulated:
      throw NoClosedForm("tabulated profile has no closed-form norm");
  }
  return detail::power_law_norm(spec.geometry.inner_radius, spec.geometry.outer_radius,
                                q);
}

/// h_n by adaptive quadrature of the radial integral, carried out against the
/// reference radius (outer edge, or inner edge for exterior discs) so that
/// large n cannot overflow. Returns h_n and log h_n.
inline NormValue norm_quadrature(const EnsembleSpec& spec, int n,
                                 double rel_tol = 1e-12) {
  if (rel_tol < 1e-14) throw ParameterViolation("rel_tol must be >= 1e-14");
  const auto integrand = detail::radial_integrand(spec, n);
  const double q = integrand.q;
  const double inner = spec.geometry.inner_radius;
  const double outer = spec.geometry.outer_radius;
  double log_scale, value;
  if (std::isinf(outer)) {
    // r = R/u maps [R, inf) to (0, 1]
    const double ref = inner;
    auto f = [&](double u) {
      const double r = ref / u;
      return std::pow(u, -q - 1.0) * spec.profile(r) * integrand.factor(r);
    };
    value = integrate(f, 0.0, 1.0, rel_tol);
    log_scale = q * std::log(ref);
  } else {
    const double ref = outer;
    auto f = [&](double x) {
      const double r = x * ref;
      return std::pow(x, q - 1.0) * spec.profile(r) * integrand.factor(r);
    };
    value = integrate(f, inner / ref, 1.0, rel_tol);
    log_scale = q * std::log(ref);
  }
  if (!(value > 0.0)) throw NonpositiveResult("norm integral not positive");
  const double log_h = std::log(kTwoPi) + log_scale + std::log(value);
  return {std::exp(log_h), log_h};
}

/// Norms h_0..h_{N-1} with per-entry provenance; the kernel consumes log h_n.
struct NormTable {
  enum class Method { ClosedForm, Quadrature };
  std::vector<double> h;
  std::vector<double> log_h;
  std::vector<Method> method;

  int size() const { return static_cast<int>(h.size()); }
};

inline NormTable make_norm_table(const EnsembleSpec& spec, double rel_tol = 1e-12) {
  NormTable table;
  table.h.reserve(spec.num_particles);
  for (int n = 0; n < spec.num_particles; ++n) {
    NormValue nv;
    NormTable::Method method = NormTable::Method::ClosedForm;
    try {
      nv = norm_closed(spec, n);
    } catch (const NoClosedForm&) {
      nv = norm_quadrature(spec, n, rel_tol);
      method = NormTable::Method::Quadrature;
    }
    if (!std::isfinite(nv.log_h)) throw NonpositiveResult("norm must be positive");
    table.h.push_back(nv.h);
    table.log_h.push_back(nv.log_h);
    table.method.push_back(method);
  }
  return table;
}

inline std::string norm_table_csv(const NormTable& table) {
  std::ostringstream out;
  CsvWriter csv(out, {"n", "h_n", "log_h_n", "method"});
  for (int n = 0; n < table.size(); ++n) {
    csv.row_raw({std::to_string(n), format_full(table.h[n]), format_full(table.log_h[n]),
                 table.method[n] == NormTable::Method::ClosedForm ? "closed-form"
                                                                  : "quadrature"});
  }
  return out.str();
}

// --- circle orthogonality ---------------------------------------------------

/// Closed-form value of the circle integral I_nn for each family.
inline double circle_norm_closed(const PolynomialFamily& family, double r, int n) {
  family.check_index(n);
  switch (family.kind) {
    case PolynomialFamily::Kind::Monomial:
      return kTwoPi * std::pow(r, 2.0 * n);
    case PolynomialFamily::Kind::TypeA:
      if (n < family.m)
        return kTwoPi * std::pow(r, 2.0 * n) / (1.0 - std::pow(r, -2.0 * family.m));
      return kTwoPi * std::pow(r, 2.0 * n);
    case PolynomialFamily::Kind::TypeB:
      if (family.charged_branch(n)) return kTwoPi * std::pow(r, 2.0 * (n + family.m));
      return kTwoPi * std::pow(r, 2.0 * n) / (std::pow(r, -2.0 * family.m) - 1.0);
  }
  return 0.0;
}

/// I_mn = int_0^{2pi} |D(z)|^2 p_m(conj z) p_n(z) dtheta on |z| = r, by
/// node-doubling trapezoid quadrature. Vanishes for m != n; equals the
/// closed-form diagonal otherwise.
inline Complex circle_orthogonality_check(const PolynomialFamily& family, double r,
                                          int m, int n, double angular_tol = 1e-13) {
  family.check_index(m);
  family.check_index(n);
  switch (family.kind) {
    case PolynomialFamily::Kind::Monomial:
      if (!(r > 0.0)) throw RadiusOutOfRange("monomial circle check needs r > 0");
      break;
    case PolynomialFamily::Kind::TypeA:
      if (!(r > 1.0)) throw RadiusOutOfRange("Type A circle check needs r > 1");
      break;
    case PolynomialFamily::Kind::TypeB:
      if (!(r > 0.0 && r < 1.0))
        throw RadiusOutOfRange("Type B circle check needs 0 < r < 1");
      break;
  }
  const double scale = std::sqrt(circle_norm_closed(family, r, m) *
                                 circle_norm_closed(family, r, n));
  // |D(z)|^2 carries harmonics at every multiple of M with amplitude
  // r^{-2Ms} (r^{+2Ms} on the interior side); the trapezoid rule only sees a
  // harmonic aliased onto 0 mod n_nodes, so resolve everything above the
  // requested tolerance before trusting the doubling test.
  int min_nodes = 32;
  if (family.kind != PolynomialFamily::Kind::Monomial) {
    const double decay = 2.0 * family.m * std::abs(std::log(r));
    const int s_max =
        static_cast<int>(std::ceil(-std::log(std::max(angular_tol * 1e-3, 1e-16)) /
                                   std::max(decay, 1e-3))) +
        2;
    const int reach = std::max(m, n) + family.m * (s_max + 2) + 8;
    while (min_nodes < 2 * reach && min_nodes < (1 << 16)) min_nodes *= 2;
  } else {
    while (min_nodes < 2 * (m + n) + 8) min_nodes *= 2;
  }
  auto f = [&](double theta) -> Complex {
    const Complex z{r * std::cos(theta), r * std::sin(theta)};
    double log_d2 = 0.0;  // log |D(z)|^2
    if (family.kind != PolynomialFamily::Kind::Monomial)
      log_d2 = 2.0 * family.m * std::log(r) - 2.0 * log_abs_pow_minus_one(z, family.m);
    return std::exp(log_d2) * std::conj(poly_eval(family, m, z)) *
           poly_eval(family, n, z);
  };
  return periodic_trapezoid(f, angular_tol, angular_tol * scale, min_nodes);
}

}  // namespace coulombgas
