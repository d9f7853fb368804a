#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coulombgas/errors.hpp"
#include "coulombgas/numeric.hpp"

namespace coulombgas {

/// Closed annulus R <= |z| <= v. R = 0 degenerates to a disc and
/// v = +infinity to the exterior of a disc; both appear as limit geometries
/// of the closed forms.
struct AnnulusGeometry {
  double inner_radius = 0.0;  // R
  double outer_radius = 1.0;  // v, may be +infinity

  bool is_disc() const { return inner_radius == 0.0; }
  bool is_exterior_disc() const { return std::isinf(outer_radius); }
  bool contains(double r) const {
    return r >= inner_radius && r <= outer_radius;
  }
};

enum class ProfileKind { Flat, Power, Tabulated };

namespace detail {

/// Fritsch-Carlson monotone cubic through (x_i, y_i); no overshoot past the
/// data, so nonnegative samples give a nonnegative interpolant.
struct MonotoneCubic {
  std::vector<double> x, y, d;

  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> xs, std::vector<double> ys)
      : x(std::move(xs)), y(std::move(ys)) {
    const std::size_t n = x.size();
    d.assign(n, 0.0);
    if (n < 2) return;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x[i + 1] - x[i];
      delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    d[0] = delta[0];
    d[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        d[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (delta[i] == 0.0) {
        d[i] = d[i + 1] = 0.0;
        continue;
      }
      const double a = d[i] / delta[i];
      const double b = d[i + 1] / delta[i];
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double tau = 3.0 / std::sqrt(s);
        d[i] = tau * a * delta[i];
        d[i + 1] = tau * b * delta[i];
      }
    }
  }

  double operator()(double t) const {
    if (t < x.front() || t > x.back())
      throw ParameterOutOfRange("monotone cubic evaluated outside its grid");
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    if (i + 1 >= x.size()) i = x.size() - 2;
    const double h = x[i + 1] - x[i];
    const double s = (t - x[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    return y[i] * (2 * s3 - 3 * s2 + 1) + h * d[i] * (s3 - 2 * s2 + s) +
           y[i + 1] * (-2 * s3 + 3 * s2) + h * d[i + 1] * (s3 - s2);
  }
};

}  // namespace detail

/// Radial one-body profile g(r): flat, a pure power, or a tabulated curve
/// with monotone cubic interpolation. Out-of-range evaluation of a table is
/// an error, not extrapolation.
class RadialProfile {
 public:
  static RadialProfile flat() { return RadialProfile(ProfileKind::Flat, 0.0); }
  static RadialProfile power(double alpha) {
    return RadialProfile(ProfileKind::Power, alpha);
  }
  static RadialProfile tabulated(std::vector<double> radii, std::vector<double> values) {
    if (radii.size() < 2 || radii.size() != values.size())
      throw ParameterViolation("tabulated profile needs matching grids of size >= 2");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
      if (!(radii[i] < radii[i + 1]))
        throw ParameterViolation("tabulated profile radii must be strictly increasing");
    for (double v : values)
      if (!(v >= 0.0)) throw NonpositiveProfile("tabulated profile value < 0");
    RadialProfile p(ProfileKind::Tabulated, 0.0);
    p.table_ = std::make_shared<detail::MonotoneCubic>(std::move(radii), std::move(values));
    return p;
  }

  ProfileKind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const detail::MonotoneCubic& table() const { return *table_; }

  double operator()(double r) const {
    switch (kind_) {
      case ProfileKind::Flat:
        return 1.0;
      case ProfileKind::Power:
        return std::pow(r, alpha_);
      case ProfileKind::Tabulated:
        return (*table_)(r);
    }
    return 1.0;
  }

  double log_value(double r) const {
    if (kind_ == ProfileKind::Power) return alpha_ * std::log(r);
    return std::log((*this)(r));
  }

  /// g(1/r), the profile of the inversion-dual gas.
  RadialProfile inverted() const {
    switch (kind_) {
      case ProfileKind::Flat:
        return flat();
      case ProfileKind::Power:
        return power(-alpha_);
      case ProfileKind::Tabulated: {
        const auto& t = *table_;
        std::vector<double> r(t.x.size()), g(t.x.size());
        for (std::size_t i = 0; i < t.x.size(); ++i) {
          r[t.x.size() - 1 - i] = 1.0 / t.x[i];
          g[t.x.size() - 1 - i] = t.y[i];
        }
        return tabulated(std::move(r), std::move(g));
      }
    }
    return flat();
  }

 private:
  RadialProfile(ProfileKind k, double a) : kind_(k), alpha_(a) {}
  ProfileKind kind_;
  double alpha_;
  std::shared_ptr<const detail::MonotoneCubic> table_;
};

/// Point charge Gamma at the origin plus M negative unit charges at the M-th
/// roots of unity.
struct ChargeConfiguration {
  double origin_charge = 0.0;  // Gamma
  int negative_charges = 0;    // M >= 0; M = 0 disables the |z^M-1|^-2 factor
};

enum class FamilyKind { ClassI, ClassIIExteriorTypeA, ClassIIInteriorTypeB };

struct EnsembleSpec {
  int num_particles = 1;  // N
  double beta = 2.0;
  AnnulusGeometry geometry;
  RadialProfile profile = RadialProfile::flat();
  ChargeConfiguration charges;
  FamilyKind family = FamilyKind::ClassI;

  bool has_negative_charges() const { return family != FamilyKind::ClassI; }
};

/// One gas configuration: N points in the closed annulus.
using Configuration = std::vector<Complex>;

inline const char* family_name(FamilyKind f) {
  switch (f) {
    case FamilyKind::ClassI:
      return "class_i";
    case FamilyKind::ClassIIExteriorTypeA:
      return "class_ii_exterior_type_a";
    case FamilyKind::ClassIIInteriorTypeB:
      return "class_ii_interior_type_b";
  }
  return "?";
}

inline FamilyKind family_from_name(const std::string& s) {
  if (s == "class_i") return FamilyKind::ClassI;
  if (s == "class_ii_exterior_type_a") return FamilyKind::ClassIIExteriorTypeA;
  if (s == "class_ii_interior_type_b") return FamilyKind::ClassIIInteriorTypeB;
  throw ParameterViolation("unknown family: " + s);
}

/// Validates all ensemble invariants and returns the assembled spec.
inline EnsembleSpec build_ensemble(int num_particles, double beta,
                                   AnnulusGeometry geometry, RadialProfile profile,
                                   ChargeConfiguration charges, FamilyKind family) {
  if (num_particles < 1) throw ParameterViolation("N must be >= 1");
  if (!(beta > 0.0)) throw ParameterViolation("beta must be > 0");
  const double R = geometry.inner_radius;
  const double v = geometry.outer_radius;
  if (!(R >= 0.0) || !(R < v))
    throw GeometryViolation("annulus requires 0 <= inner radius < outer radius");
  if (std::isinf(R)) throw GeometryViolation("inner radius must be finite");
  if (charges.negative_charges < 0)
    throw ParameterViolation("negative charge count M must be >= 0");
  switch (family) {
    case FamilyKind::ClassI:
      if (charges.negative_charges != 0)
        throw GeometryViolation("class I carries no negative charges (M must be 0)");
      break;
    case FamilyKind::ClassIIExteriorTypeA:
      if (charges.negative_charges < 1)
        throw GeometryViolation("class II requires M >= 1");
      if (!(R > 1.0))
        throw GeometryViolation("exterior class II requires inner radius > 1");
      break;
    case FamilyKind::ClassIIInteriorTypeB:
      if (charges.negative_charges < 1)
        throw GeometryViolation("class II requires M >= 1");
      if (!(v < 1.0))
        throw GeometryViolation("interior class II requires outer radius < 1");
      break;
  }
  // Profile must be strictly positive at the boundary radius the asymptotics
  // anchor to (outer edge, or inner edge for an exterior disc) and
  // nonnegative across the annulus.
  const double anchor = std::isinf(v) ? R : v;
  if (!(profile(anchor) > 0.0))
    throw NonpositiveProfile("profile must be positive at the boundary radius");
  if (profile.kind() == ProfileKind::Tabulated) {
    const double hi = std::isinf(v) ? profile.table().x.back() : v;
    for (int i = 0; i <= 64; ++i) {
      const double r = R + (hi - R) * i / 64.0;
      if (r < profile.table().x.front() || r > profile.table().x.back())
        throw ParameterOutOfRange("tabulated profile does not cover the annulus");
      if (!(profile(r) >= 0.0))
        throw NonpositiveProfile("profile negative inside the annulus");
    }
  }
  return EnsembleSpec{num_particles, beta, geometry, profile, charges, family};
}

inline EnsembleSpec validated(const EnsembleSpec& s) {
  return build_ensemble(s.num_particles, s.beta, s.geometry, s.profile, s.charges,
                        s.family);
}

/// log w(z) for z inside the closed annulus; -inf outside. The class II
/// factor |z^M - 1|^-2 is assembled in log-modulus form so large M and
/// |z| far from 1 cannot overflow.
inline double log_weight(const EnsembleSpec& spec, Complex z) {
  const double r = std::abs(z);
  if (!spec.geometry.contains(r)) return -std::numeric_limits<double>::infinity();
  double lw = spec.profile.log_value(r) +
              mul_log(2.0 * spec.charges.origin_charge, std::log(r));
  if (spec.has_negative_charges())
    lw -= 2.0 * log_abs_pow_minus_one(z, spec.charges.negative_charges);
  return lw;
}

/// w(z) = g(r) r^{2 Gamma} (class I) or g(r) r^{2 Gamma} |z^M - 1|^{-2}
/// (class II); zero outside the annulus. Total function.
inline double weight(const EnsembleSpec& spec, Complex z) {
  const double lw = log_weight(spec, z);
  return std::isinf(lw) && lw < 0 ? 0.0 : std::exp(lw);
}

/// Configuration energy H = sum_j V(z_j) - sum_{j<l} log|z_j - z_l| with
/// V = -(1/beta) log w, so that exp(-beta H) = prod w(z_j) prod |z_j-z_l|^beta
/// identically. At beta = 2 this V is -(1/2) log g - Gamma log|z|
/// (+ log|z^M - 1| for class II).
inline double hamiltonian(const EnsembleSpec& spec, const Configuration& config) {
  double h = 0.0;
  for (std::size_t j = 0; j < config.size(); ++j) {
    h -= log_weight(spec, config[j]) / spec.beta;
    for (std::size_t l = j + 1; l < config.size(); ++l) {
      const double d = std::abs(config[j] - config[l]);
      if (d == 0.0) throw CoincidentPoints("coincident points: interaction divergent");
      h -= std::log(d);
    }
  }
  return h;
}

// --- JSON (canonical CLI config format) ------------------------------------

inline nlohmann::json to_json(const EnsembleSpec& spec) {
  nlohmann::json j;
  j["n"] = spec.num_particles;
  j["beta"] = spec.beta;
  j["inner_radius"] = spec.geometry.inner_radius;
  if (std::isinf(spec.geometry.outer_radius))
    j["outer_radius"] = "inf";
  else
    j["outer_radius"] = spec.geometry.outer_radius;
  nlohmann::json p;
  switch (spec.profile.kind()) {
    case ProfileKind::Flat:
      p["kind"] = "flat";
      break;
    case ProfileKind::Power:
      p["kind"] = "power";
      p["alpha"] = spec.profile.alpha();
      break;
    case ProfileKind::Tabulated:
      p["kind"] = "tabulated";
      p["table"] = {{"r", spec.profile.table().x}, {"g", spec.profile.table().y}};
      break;
  }
  j["profile"] = p;
  j["gamma"] = spec.charges.origin_charge;
  j["m_charges"] = spec.charges.negative_charges;
  j["family"] = family_name(spec.family);
  return j;
}

inline EnsembleSpec spec_from_json(const nlohmann::json& j) {
  AnnulusGeometry geo;
  geo.inner_radius = j.at("inner_radius").get<double>();
  const auto& outer = j.at("outer_radius");
  if (outer.is_string())
    geo.outer_radius = std::numeric_limits<double>::infinity();
  else
    geo.outer_radius = outer.get<double>();
  RadialProfile profile = RadialProfile::flat();
  const auto& p = j.at("profile");
  const std::string kind = p.at("kind").get<std::string>();
  if (kind == "flat") {
    profile = RadialProfile::flat();
  } else if (kind == "power") {
    profile = RadialProfile::power(p.at("alpha").get<double>());
  } else if (kind == "tabulated") {
    profile = RadialProfile::tabulated(p.at("table").at("r").get<std::vector<double>>(),
                                       p.at("table").at("g").get<std::vector<double>>());
  } else {
    throw ParameterViolation("unknown profile kind: " + kind);
  }
  ChargeConfiguration charges{j.at("gamma").get<double>(),
                              j.at("m_charges").get<int>()};
  return build_ensemble(j.at("n").get<int>(), j.at("beta").get<double>(), geo, profile,
                        charges, family_from_name(j.at("family").get<std::string>()));
}

}  // namespace coulombgas
