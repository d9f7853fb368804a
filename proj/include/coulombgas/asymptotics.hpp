#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "coulombgas/errors.hpp"
#include "coulombgas/numeric.hpp"
#include "coulombgas/quadrature.hpp"

namespace coulombgas {

enum class FrameKind {
  DiscEdge,            // r = v (1 - t/N), outer edge of a disc
  ExteriorEdge,        // r = v (1 + t/N), inner edge of an exterior disc (v = R)
  ThinAnnulus,         // R = v (1 - T/N), 0 < t < T measured from the outer edge
  NearUnitCircleOuter, // v = 1 + u/N, R = 1 + (u-T)/N, 0 < T < u
  NearUnitCircleInner  // same scaling with u < 0 < T
};

/// Bundle of limit rates: gamma = Gamma/N, mu = M/N, width = T, offset = u,
/// base_angle = psi. `v` is the reference radius (the inner radius for
/// exterior-edge frames); near-unit-circle frames live at radius 1.
struct ScalingFrame {
  FrameKind kind = FrameKind::ThinAnnulus;
  int n = 100;
  double v = 1.0;
  double gamma = 0.0;
  double mu = 0.0;
  double width = 1.0;      // T
  double offset = 0.0;     // u
  double base_angle = 0.0; // psi
};

inline void validate_frame(const ScalingFrame& f) {
  if (f.n < 1) throw ParameterOutOfRange("frame needs N >= 1");
  if (!(f.v > 0.0)) throw ParameterOutOfRange("frame needs v > 0");
  if (f.mu < 0.0) throw ParameterOutOfRange("frame needs mu >= 0");
  switch (f.kind) {
    case FrameKind::DiscEdge:
      if (f.gamma < 0.0) throw ParameterOutOfRange("disc edge needs gamma >= 0");
      break;
    case FrameKind::ExteriorEdge:
      if (f.gamma > -1.0) throw ParameterOutOfRange("exterior edge needs gamma <= -1");
      break;
    case FrameKind::ThinAnnulus:
      if (!(f.width > 0.0)) throw ParameterOutOfRange("thin annulus needs T > 0");
      break;
    case FrameKind::NearUnitCircleOuter:
      if (!(f.width > 0.0 && f.width < f.offset))
        throw ParameterOutOfRange("outer near-circle frame needs 0 < T < u");
      break;
    case FrameKind::NearUnitCircleInner:
      if (!(f.offset < 0.0 && f.width > 0.0))
        throw ParameterOutOfRange("inner near-circle frame needs u < 0 < T");
      break;
  }
}

/// Every labeled limit kernel, including the one-dimensional (T -> 0) forms.
enum class FormulaId {
  DiscEdgeKappa,
  ExteriorEdgeKappaTilde,
  DiscBulk,
  ExteriorBulk,
  ThinAnnulusUniversal,
  SineKernel,
  Kappa1,
  Kappa2,
  Kappa2Tilde,
  Kappa3,
  UniversalMFixed,
  NonUniversalMFixed,
  NonUniversalMFixedK1,
  NonUniversalMFixedK2,
  OneDimMFixed,
  MLargeUniversal,
  MLargeK1,
  MLargeK2,
  MLargeUlargeK1,
  MLargeUlargeK2,
  MLargeTsmallK1,
  MLargeTsmallK2,
  VeryLargeM,
  VeryLargeMTsmall,
  InteriorUniversal,
  InteriorNonUniversalMFixed,
  InteriorMLargeK1,
  InteriorMLargeK2,
  InteriorVeryLargeM
};

struct FormulaInfo {
  FormulaId id;
  const char* name;       // stable CLI identifier
  FrameKind frame;        // canonical frame kind
  const char* domain;     // human-readable parameter domain
};

inline const std::vector<FormulaInfo>& formula_catalog() {
  static const std::vector<FormulaInfo> catalog = {
      {FormulaId::DiscEdgeKappa, "disc-edge", FrameKind::DiscEdge,
       "gamma >= 0, t_j >= 0"},
      {FormulaId::ExteriorEdgeKappaTilde, "exterior-edge", FrameKind::ExteriorEdge,
       "gamma <= -1, t_j >= 0"},
      {FormulaId::DiscBulk, "disc-bulk", FrameKind::DiscEdge, "0 <= t_j < N"},
      {FormulaId::ExteriorBulk, "exterior-bulk", FrameKind::ExteriorEdge, "t_j >= 0"},
      {FormulaId::ThinAnnulusUniversal, "thin-annulus", FrameKind::ThinAnnulus,
       "T > 0, 0 <= t_j <= T"},
      {FormulaId::SineKernel, "sine", FrameKind::ThinAnnulus, "T > 0"},
      {FormulaId::Kappa1, "kappa1", FrameKind::ThinAnnulus, "gamma >= 0, t_j >= 0"},
      {FormulaId::Kappa2, "kappa2", FrameKind::ThinAnnulus,
       "-1 < gamma < 0, t_j >= 0 from the outer edge"},
      {FormulaId::Kappa2Tilde, "kappa2-tilde", FrameKind::ThinAnnulus,
       "-1 < gamma < 0, t_j >= 0 from the inner edge"},
      {FormulaId::Kappa3, "kappa3", FrameKind::ThinAnnulus,
       "gamma <= -1, t_j >= 0 from the inner edge"},
      {FormulaId::UniversalMFixed, "universal-m-fixed", FrameKind::NearUnitCircleOuter,
       "0 < T < u, 0 <= t_j <= T, e^{iM psi} != 1"},
      {FormulaId::NonUniversalMFixed, "non-universal-m-fixed",
       FrameKind::NearUnitCircleOuter, "0 < T < u, 0 <= t_j <= T, e^{iM psi} = 1"},
      {FormulaId::NonUniversalMFixedK1, "non-universal-m-fixed-k1",
       FrameKind::NearUnitCircleOuter, "0 < T < u, 0 <= t_j <= T, e^{iM psi} = 1"},
      {FormulaId::NonUniversalMFixedK2, "non-universal-m-fixed-k2",
       FrameKind::NearUnitCircleOuter, "0 < T < u, 0 <= t_j <= T, e^{iM psi} = 1"},
      {FormulaId::OneDimMFixed, "one-dim-m-fixed", FrameKind::NearUnitCircleOuter,
       "u > 0, T -> 0"},
      {FormulaId::MLargeUniversal, "m-large-universal", FrameKind::ThinAnnulus,
       "0 < mu <= 1, 0 <= t_j <= T"},
      {FormulaId::MLargeK1, "m-large-k1", FrameKind::NearUnitCircleOuter,
       "0 < mu <= 1, 0 <= t_j <= T, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::MLargeK2, "m-large-k2", FrameKind::NearUnitCircleOuter,
       "0 < mu <= 1, 0 <= t_j <= T, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::MLargeUlargeK1, "m-large-ularge-k1", FrameKind::ThinAnnulus,
       "0 < mu <= 1, 0 <= t_j <= T"},
      {FormulaId::MLargeUlargeK2, "m-large-ularge-k2", FrameKind::ThinAnnulus,
       "0 < mu <= 1, 0 <= t_j <= T"},
      {FormulaId::MLargeTsmallK1, "m-large-tsmall-k1", FrameKind::NearUnitCircleOuter,
       "0 < mu <= 1, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::MLargeTsmallK2, "m-large-tsmall-k2", FrameKind::NearUnitCircleOuter,
       "0 < mu <= 1, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::VeryLargeM, "very-large-m", FrameKind::NearUnitCircleOuter,
       "mu >= 1, 0 <= t_j <= T, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::VeryLargeMTsmall, "very-large-m-tsmall",
       FrameKind::NearUnitCircleOuter, "mu >= 1, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::InteriorUniversal, "interior-universal",
       FrameKind::NearUnitCircleInner, "u < 0 < T, 0 <= t_j <= T, e^{iM psi} != 1"},
      {FormulaId::InteriorNonUniversalMFixed, "interior-non-universal-m-fixed",
       FrameKind::NearUnitCircleInner, "u < 0 < T, 0 <= t_j <= T, e^{iM psi} = 1"},
      {FormulaId::InteriorMLargeK1, "interior-m-large-k1",
       FrameKind::NearUnitCircleInner,
       "0 < mu <= 1, 0 <= t_j <= T, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::InteriorMLargeK2, "interior-m-large-k2",
       FrameKind::NearUnitCircleInner,
       "0 < mu <= 1, 0 <= t_j <= T, 0 <= phi_j <= 2 pi / mu"},
      {FormulaId::InteriorVeryLargeM, "interior-very-large-m",
       FrameKind::NearUnitCircleInner, "mu >= 1, 0 <= t_j <= T"}};
  return catalog;
}

inline const FormulaInfo& formula_info(FormulaId id) {
  for (const auto& info : formula_catalog())
    if (info.id == id) return info;
  throw ParameterViolation("unknown formula id");
}

inline FormulaId formula_from_name(const std::string& name) {
  for (const auto& info : formula_catalog())
    if (name == info.name) return info.id;
  throw ParameterViolation("unknown formula name: " + name);
}

inline const char* frame_kind_name(FrameKind kind) {
  switch (kind) {
    case FrameKind::DiscEdge:
      return "disc-edge";
    case FrameKind::ExteriorEdge:
      return "exterior-edge";
    case FrameKind::ThinAnnulus:
      return "thin-annulus";
    case FrameKind::NearUnitCircleOuter:
      return "near-unit-circle-outer";
    case FrameKind::NearUnitCircleInner:
      return "near-unit-circle-inner";
  }
  return "?";
}

inline nlohmann::json formula_catalog_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& info : formula_catalog()) {
    out.push_back({{"id", info.name},
                   {"frame", frame_kind_name(info.frame)},
                   {"domain", info.domain}});
  }
  return out;
}

// --- quadrature backbone ------------------------------------------------------

enum class CIntegralKind {
  FiniteWidth,  // integrand carries 1 / (1 - e^{-2 (c + gamma') T})
  EdgeLimit     // T -> infinity with c + gamma' > 0: denominator 1
};

/// int_{lo}^{hi} dc (c+g') e^{-(c+g')(t1+t2)} e^{i c phi} / (1 - e^{-2(c+g')T})
/// with g' = gamma - mu. The removable singularity at c + g' = 0 is filled by
/// the series value 1/(2T).
inline Complex c_integral(CIntegralKind kind, double gamma, double mu, double width,
                          double t1, double t2, double phi, double lo, double hi,
                          double rel_tol = 1e-11) {
  if (lo < -1e-12 || hi > 1.0 + 1e-12 || lo > hi)
    throw ParameterOutOfRange("c-integral bounds must satisfy 0 <= lo <= hi <= 1");
  const double g = gamma - mu;
  auto f = [&](double c) -> Complex {
    const double x = c + g;
    const double amp = kind == CIntegralKind::FiniteWidth
                           ? ratio_x_over_one_minus_exp(x, 2.0 * width)
                           : x;
    return amp * std::exp(-x * (t1 + t2)) * expi(c * phi);
  };
  return integrate(f, lo, hi, rel_tol, 1e-14);
}

namespace detail {

/// int_a^b x e^{-x w} dx for complex w, stable through w = 0.
inline Complex xexp_integral(Complex w, double a, double b) {
  const double reach = std::abs(w) * std::max(std::abs(a), std::abs(b));
  if (reach < 1e-3) {
    auto dpow = [&](int k) { return (std::pow(b, k) - std::pow(a, k)) / k; };
    return dpow(2) / 1.0 - w * dpow(3) + w * w * dpow(4) / 2.0 -
           w * w * w * dpow(5) / 6.0 + w * w * w * w * dpow(6) / 24.0;
  }
  auto anti = [&](double x) { return -std::exp(-x * w) * (x / w + 1.0 / (w * w)); };
  return anti(b) - anti(a);
}

enum class InnerKind {
  OuterCharged,       // 1 - e^{-2 mu (u - t)}, needs u > T
  InteriorCharged,    // 1 - e^{+2 mu (u - t)}, needs u < 0
  InteriorVeryLarge,  // e^{-2 mu (u - t)} - 1, needs u < 0
  OuterPoint,         // u - t, needs u > T
  InteriorPoint       // t - u, needs u < 0
};

/// int_0^T e^{-2 a t} / denom(t) dt; all denominators are strictly positive on
/// (0, T) in their stated frames.
inline double inner_t_integral(InnerKind kind, double a, double width, double u,
                               double mu, double rel_tol = 1e-12) {
  auto f = [&](double t) {
    const double num = std::exp(-2.0 * a * t);
    switch (kind) {
      case InnerKind::OuterCharged:
        return num / -std::expm1(-2.0 * mu * (u - t));
      case InnerKind::InteriorCharged:
        return num / -std::expm1(2.0 * mu * (u - t));
      case InnerKind::InteriorVeryLarge:
        return num / std::expm1(-2.0 * mu * (u - t));
      case InnerKind::OuterPoint:
        return num / (u - t);
      case InnerKind::InteriorPoint:
        return num / (t - u);
    }
    return 0.0;
  };
  return integrate(f, 0.0, width, rel_tol, 1e-300);
}

inline void require_kind(const ScalingFrame& frame, FrameKind a,
                         FrameKind b = FrameKind::DiscEdge, bool has_b = false) {
  if (frame.kind == a) return;
  if (has_b && frame.kind == b) return;
  throw FrameMismatch("formula evaluated in an incompatible frame kind");
}

inline void require_range(double t, double lo, double hi, const char* what) {
  if (!(t >= lo - 1e-12 && t <= hi + 1e-12)) throw ParameterOutOfRange(what);
}

}  // namespace detail

// --- one-dimensional (T -> 0) kernels ------------------------------------------

/// Printed one-dimensional kernels; diagonal values are the analytic
/// phi1 -> phi2 limits, never 0/0.
inline Complex one_dim_limit(FormulaId id, const ScalingFrame& frame, double phi1,
                             double phi2, double /*rel_tol*/ = 1e-11) {
  validate_frame(frame);
  const double n2 = static_cast<double>(frame.n) * frame.n;
  const double phi = phi1 - phi2;
  switch (id) {
    case FormulaId::ThinAnnulusUniversal:
    case FormulaId::SineKernel: {
      detail::require_kind(frame, FrameKind::ThinAnnulus);
      const double rho0 = n2 / (kTwoPi * frame.v * frame.v * frame.width);
      return rho0 * expi(phi / 2.0) * sinc(phi / 2.0);
    }
    case FormulaId::NonUniversalMFixed:
    case FormulaId::OneDimMFixed: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      const double u = frame.offset;
      const double norm1 = std::sqrt(u * u + phi1 * phi1);
      const double norm2 = std::sqrt(u * u + phi2 * phi2);
      const Complex cross =
          0.5 * Complex{u, phi1} * Complex{u, -phi2} * expi(phi / 2.0) * sinc(phi / 2.0);
      return n2 / (kPi * frame.width * norm1 * norm2) * (u + cross);
    }
    case FormulaId::MLargeK1:
    case FormulaId::MLargeTsmallK1: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      const double u = frame.offset, mu = frame.mu;
      if (!(mu > 0.0)) throw ParameterOutOfRange("large-M limit needs mu > 0");
      const double d1 = std::abs(1.0 - std::exp(-mu * Complex{u, phi1}));
      const double d2 = std::abs(1.0 - std::exp(-mu * Complex{u, phi2}));
      return n2 / (kTwoPi * frame.width) * (-std::expm1(-2.0 * mu * u)) / (d1 * d2) *
             expi_minus_one_over_iphi(mu, phi);
    }
    case FormulaId::MLargeK2:
    case FormulaId::MLargeTsmallK2: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      const double u = frame.offset, mu = frame.mu;
      if (!(mu > 0.0)) throw ParameterOutOfRange("large-M limit needs mu > 0");
      const Complex f1 = 1.0 - std::exp(-mu * Complex{u, phi1});
      const Complex f2 = 1.0 - std::exp(-mu * Complex{u, -phi2});
      const double d1 = std::abs(f1);
      const double d2 = std::abs(1.0 - std::exp(-mu * Complex{u, phi2}));
      const Complex ramp =
          expi_minus_one_over_iphi(1.0, phi) - expi_minus_one_over_iphi(mu, phi);
      return n2 / (kTwoPi * frame.width) * f1 * f2 / (d1 * d2) * ramp;
    }
    case FormulaId::VeryLargeM:
    case FormulaId::VeryLargeMTsmall: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      const double u = frame.offset, mu = frame.mu;
      if (!(mu > 0.0)) throw ParameterOutOfRange("very-large-M limit needs mu > 0");
      const double d1 = std::abs(1.0 - std::exp(-mu * Complex{u, phi1}));
      const double d2 = std::abs(1.0 - std::exp(-mu * Complex{u, phi2}));
      return n2 / (kTwoPi * frame.width) * (-std::expm1(-2.0 * mu * u)) / (d1 * d2) *
             expi(phi / 2.0) * sinc(phi / 2.0);
    }
    default:
      throw FrameMismatch("formula has no printed one-dimensional limit");
  }
}

// --- full limit-kernel evaluation ----------------------------------------------

/// Closed-form or quadrature value of the labeled limit kernel, including its
/// printed prefactor, as a function of the scaled coordinates.
/// For inner-boundary formulas (Kappa2Tilde, Kappa3, ExteriorEdgeKappaTilde)
/// t_j measures the distance from the inner edge.
inline Complex eval_limit_kernel(FormulaId id, const ScalingFrame& frame, double t1,
                                 double t2, double phi1, double phi2,
                                 double rel_tol = 1e-11) {
  validate_frame(frame);
  const double n2 = static_cast<double>(frame.n) * frame.n;
  const double phi = phi1 - phi2;
  const double tsum = t1 + t2;
  const double gamma = frame.gamma;
  const double mu = frame.mu;
  const double width = frame.width;
  const double u = frame.offset;
  const Complex tau{tsum, -phi};
  const Complex sigma{tsum, phi};
  const Complex s1{u - t1, phi1};
  const Complex s2{u - t2, phi2};
  const auto pref_v = [&](double denom_pi) { return n2 / (denom_pi * frame.v * frame.v); };

  const auto check_t_in_width = [&] {
    detail::require_range(t1, 0.0, width, "t must lie in [0, T]");
    detail::require_range(t2, 0.0, width, "t must lie in [0, T]");
  };
  const auto check_t_nonneg = [&] {
    detail::require_range(t1, 0.0, std::numeric_limits<double>::infinity(),
                          "t must be >= 0");
    detail::require_range(t2, 0.0, std::numeric_limits<double>::infinity(),
                          "t must be >= 0");
  };
  const auto check_phi_window = [&] {
    detail::require_range(phi1, 0.0, kTwoPi / mu, "phi must lie in [0, 2 pi / mu]");
    detail::require_range(phi2, 0.0, kTwoPi / mu, "phi must lie in [0, 2 pi / mu]");
  };
  const auto require_mu_in = [&](double lo, double hi) {
    if (!(mu >= lo && mu <= hi))
      throw ParameterOutOfRange("mu outside the formula's validity range");
  };

  switch (id) {
    case FormulaId::DiscEdgeKappa:
    case FormulaId::Kappa1: {
      detail::require_kind(frame, FrameKind::DiscEdge, FrameKind::ThinAnnulus, true);
      if (gamma < 0.0) throw ParameterOutOfRange("kappa needs gamma >= 0");
      check_t_nonneg();
      return pref_v(kPi) * expi(-gamma * phi) *
             detail::xexp_integral(tau, gamma, 1.0 + gamma);
    }
    case FormulaId::ExteriorEdgeKappaTilde:
    case FormulaId::Kappa3: {
      if (id == FormulaId::ExteriorEdgeKappaTilde)
        detail::require_kind(frame, FrameKind::ExteriorEdge);
      else
        detail::require_kind(frame, FrameKind::ThinAnnulus, FrameKind::ExteriorEdge,
                             true);
      if (gamma > -1.0) throw ParameterOutOfRange("kappa-tilde needs gamma <= -1");
      check_t_nonneg();
      return -pref_v(kPi) * expi(-gamma * phi) *
             detail::xexp_integral(-sigma, gamma, 1.0 + gamma);
    }
    case FormulaId::Kappa2: {
      detail::require_kind(frame, FrameKind::ThinAnnulus);
      if (!(gamma > -1.0 && gamma < 0.0))
        throw ParameterOutOfRange("kappa2 needs -1 < gamma < 0");
      check_t_nonneg();
      return pref_v(kPi) * expi(-gamma * phi) *
             detail::xexp_integral(tau, 0.0, 1.0 + gamma);
    }
    case FormulaId::Kappa2Tilde: {
      detail::require_kind(frame, FrameKind::ThinAnnulus);
      if (!(gamma > -1.0 && gamma < 0.0))
        throw ParameterOutOfRange("kappa2-tilde needs -1 < gamma < 0");
      check_t_nonneg();
      return pref_v(kPi) * expi(-gamma * phi) *
             detail::xexp_integral(sigma, 0.0, -gamma);
    }
    case FormulaId::DiscBulk: {
      detail::require_kind(frame, FrameKind::DiscEdge);
      const double big_gamma = gamma * frame.n;
      const double r1 = frame.v * (1.0 - t1 / frame.n);
      const double r2 = frame.v * (1.0 - t2 / frame.n);
      const Complex zeta =
          r1 * r2 / (frame.v * frame.v) * expi((phi1 - phi2) / frame.n);
      const Complex om = 1.0 - zeta;
      return std::pow(std::abs(zeta), big_gamma) / (kPi * frame.v * frame.v * om) *
             (1.0 / om + big_gamma);
    }
    case FormulaId::ExteriorBulk: {
      detail::require_kind(frame, FrameKind::ExteriorEdge);
      const double big_gamma_t = -frame.n - gamma * frame.n;  // -N - Gamma
      const double r1 = frame.v * (1.0 + t1 / frame.n);
      const double r2 = frame.v * (1.0 + t2 / frame.n);
      const Complex eta = r1 * r2 / (frame.v * frame.v) * expi(phi / frame.n);
      const Complex em1 = eta - 1.0;
      return std::pow(std::abs(eta), -big_gamma_t) / (kPi * frame.v * frame.v * em1) *
             (1.0 / em1 + big_gamma_t) * expi(phi);
    }
    case FormulaId::ThinAnnulusUniversal: {
      detail::require_kind(frame, FrameKind::ThinAnnulus);
      check_t_in_width();
      return pref_v(kPi) * c_integral(CIntegralKind::FiniteWidth, gamma, 0.0, width,
                                      t1, t2, phi, 0.0, 1.0, rel_tol);
    }
    case FormulaId::MLargeUniversal: {
      detail::require_kind(frame, FrameKind::ThinAnnulus);
      require_mu_in(0.0, 1.0);
      check_t_in_width();
      return pref_v(kPi) * c_integral(CIntegralKind::FiniteWidth, gamma, mu, width,
                                      t1, t2, phi, 0.0, 1.0, rel_tol);
    }
    case FormulaId::MLargeUlargeK1:
    case FormulaId::MLargeUlargeK2: {
      detail::require_kind(frame, FrameKind::ThinAnnulus,
                           FrameKind::NearUnitCircleOuter, true);
      require_mu_in(1e-12, 1.0);
      check_t_in_width();
      const double lo = id == FormulaId::MLargeUlargeK1 ? 0.0 : mu;
      const double hi = id == FormulaId::MLargeUlargeK1 ? mu : 1.0;
      return n2 / kPi * c_integral(CIntegralKind::FiniteWidth, gamma, mu, width, t1,
                                   t2, phi, lo, hi, rel_tol);
    }
    case FormulaId::SineKernel:
    case FormulaId::OneDimMFixed:
      return one_dim_limit(id, frame, phi1, phi2, rel_tol);
    case FormulaId::MLargeTsmallK1:
    case FormulaId::MLargeTsmallK2:
    case FormulaId::VeryLargeMTsmall:
      if (mu > 0.0) check_phi_window();
      return one_dim_limit(id, frame, phi1, phi2, rel_tol);
    case FormulaId::UniversalMFixed: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      check_t_in_width();
      return n2 / kPi * c_integral(CIntegralKind::FiniteWidth, gamma, 0.0, width, t1,
                                   t2, phi, 0.0, 1.0, rel_tol);
    }
    case FormulaId::NonUniversalMFixed:
    case FormulaId::NonUniversalMFixedK1:
    case FormulaId::NonUniversalMFixedK2: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      check_t_in_width();
      const double d1 = std::abs(s1), d2 = std::abs(s2);
      Complex k1{}, k2{};
      if (id != FormulaId::NonUniversalMFixedK2) {
        const double denom = detail::inner_t_integral(detail::InnerKind::OuterPoint,
                                                      gamma, width, u, mu,
                                                      rel_tol * 0.1);
        k1 = n2 / (kPi * d1 * d2) * std::exp(-gamma * tsum) / denom;
      }
      if (id != FormulaId::NonUniversalMFixedK1) {
        k2 = n2 / kPi * (s1 * std::conj(s2) / (d1 * d2)) *
             c_integral(CIntegralKind::FiniteWidth, gamma, 0.0, width, t1, t2, phi,
                        0.0, 1.0, rel_tol);
      }
      return k1 + k2;
    }
    case FormulaId::MLargeK1:
    case FormulaId::VeryLargeM: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      if (id == FormulaId::MLargeK1)
        require_mu_in(1e-12, 1.0);
      else
        require_mu_in(1.0, std::numeric_limits<double>::infinity());
      check_t_in_width();
      check_phi_window();
      const double d1 = std::abs(1.0 - std::exp(-mu * s1));
      const double d2 = std::abs(1.0 - std::exp(-mu * s2));
      const double hi = id == FormulaId::MLargeK1 ? mu : 1.0;
      auto f = [&](double c) -> Complex {
        const double denom = detail::inner_t_integral(
            detail::InnerKind::OuterCharged, c + gamma - mu, width, u, mu,
            rel_tol * 0.1);
        return std::exp(-(c + gamma - mu) * tsum) * expi(c * phi) / denom;
      };
      return n2 / (kTwoPi * d1 * d2) * integrate(f, 0.0, hi, rel_tol, 1e-14);
    }
    case FormulaId::MLargeK2: {
      detail::require_kind(frame, FrameKind::NearUnitCircleOuter);
      require_mu_in(1e-12, 1.0);
      check_t_in_width();
      check_phi_window();
      const Complex f1 = 1.0 - std::exp(-mu * s1);
      const Complex f2 = 1.0 - std::exp(-mu * std::conj(s2));
      const double d1 = std::abs(f1);
      const double d2 = std::abs(1.0 - std::exp(-mu * s2));
      return n2 / kPi * f1 * f2 / (d1 * d2) *
             c_integral(CIntegralKind::FiniteWidth, gamma, mu, width, t1, t2, phi, mu,
                        1.0, rel_tol);
    }
    case FormulaId::InteriorUniversal: {
      detail::require_kind(frame, FrameKind::NearUnitCircleInner);
      check_t_in_width();
      return n2 / kPi * c_integral(CIntegralKind::FiniteWidth, gamma, 0.0, width, t1,
                                   t2, phi, 0.0, 1.0, rel_tol);
    }
    case FormulaId::InteriorNonUniversalMFixed: {
      detail::require_kind(frame, FrameKind::NearUnitCircleInner);
      check_t_in_width();
      const double d1 = std::abs(s1), d2 = std::abs(s2);
      const double denom = detail::inner_t_integral(detail::InnerKind::InteriorPoint,
                                                    1.0 + gamma, width, u, mu,
                                                    rel_tol * 0.1);
      const Complex k1 =
          n2 / (kPi * d1 * d2) * std::exp(-(1.0 + gamma) * tsum) * expi(phi) / denom;
      const Complex k2 = n2 / kPi * (s1 * std::conj(s2) / (d1 * d2)) *
                         c_integral(CIntegralKind::FiniteWidth, gamma, 0.0, width, t1,
                                    t2, phi, 0.0, 1.0, rel_tol);
      return k1 + k2;
    }
    case FormulaId::InteriorMLargeK1: {
      detail::require_kind(frame, FrameKind::NearUnitCircleInner);
      require_mu_in(1e-12, 1.0);
      check_t_in_width();
      check_phi_window();
      const Complex f1 = 1.0 - std::exp(mu * s1);
      const Complex f2 = 1.0 - std::exp(mu * std::conj(s2));
      const double d1 = std::abs(f1);
      const double d2 = std::abs(1.0 - std::exp(mu * s2));
      return n2 / kPi * f1 * f2 / (d1 * d2) *
             c_integral(CIntegralKind::FiniteWidth, gamma, 0.0, width, t1, t2, phi,
                        0.0, 1.0 - mu, rel_tol);
    }
    case FormulaId::InteriorMLargeK2: {
      detail::require_kind(frame, FrameKind::NearUnitCircleInner);
      require_mu_in(1e-12, 1.0);
      check_t_in_width();
      check_phi_window();
      const double d1 = std::abs(1.0 - std::exp(mu * s1));
      const double d2 = std::abs(1.0 - std::exp(mu * s2));
      auto f = [&](double c) -> Complex {
        const double denom = detail::inner_t_integral(
            detail::InnerKind::InteriorCharged, c + gamma, width, u, mu,
            rel_tol * 0.1);
        return std::exp(-(c + gamma) * tsum) * expi(c * phi) / denom;
      };
      return n2 / (kTwoPi * d1 * d2) * integrate(f, 1.0 - mu, 1.0, rel_tol, 1e-14);
    }
    case FormulaId::InteriorVeryLargeM: {
      detail::require_kind(frame, FrameKind::NearUnitCircleInner);
      require_mu_in(1.0, std::numeric_limits<double>::infinity());
      check_t_in_width();
      const double d1 = std::abs(1.0 - std::exp(-mu * s1));
      const double d2 = std::abs(1.0 - std::exp(-mu * s2));
      auto f = [&](double c) -> Complex {
        const double denom = detail::inner_t_integral(
            detail::InnerKind::InteriorVeryLarge, c + gamma - mu, width, u, mu,
            rel_tol * 0.1);
        return std::exp(-(c + gamma - mu) * tsum) * expi(c * phi) / denom;
      };
      return n2 / (kTwoPi * d1 * d2) * integrate(f, 0.0, 1.0, rel_tol, 1e-14);
    }
  }
  throw ParameterViolation("unhandled formula id");
}

/// Total mass of the edge-limit kernels: integrates the diagonal over
/// t in (0, inf) and the full angle. N for the kappa family, N(1+gamma) for
/// kappa2 and -N gamma for kappa2-tilde.
inline double limit_mass(FormulaId id, const ScalingFrame& frame,
                         double rel_tol = 1e-9) {
  switch (id) {
    case FormulaId::DiscEdgeKappa:
    case FormulaId::ExteriorEdgeKappaTilde:
    case FormulaId::Kappa1:
    case FormulaId::Kappa2:
    case FormulaId::Kappa2Tilde:
    case FormulaId::Kappa3:
      break;
    default:
      throw FrameMismatch("limit mass is defined for the edge kappa family only");
  }
  validate_frame(frame);
  auto diag = [&](double t) {
    return eval_limit_kernel(id, frame, t, t, 0.0, 0.0, rel_tol * 1e-2).real();
  };
  const double radial = integrate_to_infinity(diag, 0.0, rel_tol * 0.3);
  return kTwoPi * frame.v * frame.v / frame.n * radial;
}

}  // namespace coulombgas
