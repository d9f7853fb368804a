#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "coulombgas/ensemble.hpp"

using namespace coulombgas;

namespace {

EnsembleSpec class_i(int n, double inner, double outer, double gamma,
                     RadialProfile profile = RadialProfile::flat()) {
  return build_ensemble(n, 2.0, {inner, outer}, profile, {gamma, 0}, FamilyKind::ClassI);
}

EnsembleSpec class_ii_exterior(int n, double inner, double outer, double gamma, int m) {
  return build_ensemble(n, 2.0, {inner, outer}, RadialProfile::flat(), {gamma, m},
                        FamilyKind::ClassIIExteriorTypeA);
}

}  // namespace

TEST_CASE("build_ensemble accepts the documented specs") {
  CHECK_NOTHROW(class_i(2, 1.0, 2.0, 0.0));
  CHECK_NOTHROW(build_ensemble(5, 2.0, {0.2, 0.8}, RadialProfile::flat(), {1.0, 2},
                               FamilyKind::ClassIIInteriorTypeB));
  CHECK_NOTHROW(class_i(1, 0.0, 1.0, 0.0));  // disc
}

TEST_CASE("build_ensemble rejects inconsistent specs") {
  // exterior class II needs R > 1
  CHECK_THROWS_AS(class_ii_exterior(2, 0.5, 2.0, 0.0, 3), GeometryViolation);
  CHECK_THROWS_AS(class_i(2, 2.0, 1.0, 0.0), GeometryViolation);
  CHECK_THROWS_AS(build_ensemble(2, 2.0, {0.2, 2.0}, RadialProfile::flat(), {0.0, 2},
                                 FamilyKind::ClassIIInteriorTypeB),
                  GeometryViolation);
  CHECK_THROWS_AS(build_ensemble(2, 2.0, {1.5, 2.0}, RadialProfile::flat(), {0.0, 0},
                                 FamilyKind::ClassIIExteriorTypeA),
                  GeometryViolation);
  const auto zero_at_edge = RadialProfile::tabulated({1.0, 1.5, 2.0}, {1.0, 0.5, 0.0});
  CHECK_THROWS_AS(build_ensemble(2, 2.0, {1.0, 2.0}, zero_at_edge, {0.0, 0},
                                 FamilyKind::ClassI),
                  NonpositiveProfile);
}

TEST_CASE("weight evaluates the documented examples") {
  const auto flat = class_i(2, 1.0, 2.0, 0.0);
  CHECK(weight(flat, {1.5, 0.0}) == Catch::Approx(1.0));
  CHECK(weight(flat, {2.5, 0.0}) == 0.0);  // outside
  CHECK(weight(flat, {0.5, 0.0}) == 0.0);

  const auto charged = class_i(2, 1.0, 2.0, 1.0);
  CHECK(weight(charged, {1.5, 0.0}) == Catch::Approx(2.25).epsilon(1e-14));

  // |z^M - 1|^{-2} factor, cross-checked against the independent
  // g(r) r^{2 Gamma} / |z^M - 1|^2 evaluation
  const auto cls2 = class_ii_exterior(2, 1.5, 3.0, 0.0, 2);
  CHECK(weight(cls2, {2.0, 0.0}) == Catch::Approx(1.0 / 9.0).epsilon(1e-13));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> rad(1.5, 3.0), ang(0.0, kTwoPi);
  for (int i = 0; i < 50; ++i) {
    const Complex z = rad(rng) * expi(ang(rng));
    const double direct = std::pow(std::abs(z), 0.0) /
                          std::norm(std::pow(z, 2) - 1.0);
    CHECK(weight(cls2, z) == Catch::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("weight symmetries") {
  const auto flat = class_i(3, 1.0, 2.0, 0.7, RadialProfile::power(1.0));
  const auto cls2 = class_ii_exterior(3, 1.5, 3.0, 0.5, 3);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> rad(1.5, 2.0), ang(0.0, kTwoPi);
  for (int i = 0; i < 40; ++i) {
    const Complex z = rad(rng) * expi(ang(rng));
    const double phi = ang(rng);
    // continuous rotation invariance (class I)
    CHECK(weight(flat, z * expi(phi)) == Catch::Approx(weight(flat, z)).epsilon(1e-12));
    // discrete rotation invariance (class II), omega = e^{2 pi i / M}
    CHECK(weight(cls2, z * expi(kTwoPi / 3.0)) ==
          Catch::Approx(weight(cls2, z)).epsilon(1e-11));
    // reality / conjugation
    CHECK(weight(cls2, std::conj(z)) == Catch::Approx(weight(cls2, z)).epsilon(1e-12));
    CHECK(weight(cls2, z) >= 0.0);
  }
}

TEST_CASE("hamiltonian evaluates the documented examples") {
  const auto simple = class_i(2, 0.1, 1.0, 0.0);
  CHECK(hamiltonian(simple, {{0.5, 0.0}, {-0.5, 0.0}}) ==
        Catch::Approx(0.0).margin(1e-14));

  const auto charged = class_i(2, 1.0, 4.0, 1.0);
  CHECK(hamiltonian(charged, {{2.0, 0.0}, {-2.0, 0.0}}) ==
        Catch::Approx(-2.0 * std::log(2.0) - std::log(4.0)).epsilon(1e-13));

  CHECK_THROWS_AS(hamiltonian(simple, {{0.5, 0.0}, {0.5, 0.0}}), CoincidentPoints);
}

TEST_CASE("exp(-beta H) equals the weight-product Gibbs factor") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> rad(1.5, 3.0), ang(0.0, kTwoPi);
  for (double beta : {2.0, 4.0, 1.3}) {
    for (FamilyKind family :
         {FamilyKind::ClassI, FamilyKind::ClassIIExteriorTypeA}) {
      const int m = family == FamilyKind::ClassI ? 0 : 3;
      const auto spec = build_ensemble(4, beta, {1.5, 3.0}, RadialProfile::power(0.5),
                                       {0.8, m}, family);
      Configuration config;
      for (int j = 0; j < 4; ++j) config.push_back(rad(rng) * expi(ang(rng)));
      double log_rhs = 0.0;
      for (const auto& z : config) log_rhs += std::log(weight(spec, z));
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          log_rhs += beta * std::log(std::abs(config[i] - config[j]));
      CHECK(-beta * hamiltonian(spec, config) ==
            Catch::Approx(log_rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("tabulated profiles interpolate monotonically and refuse range abuse") {
  const auto table =
      RadialProfile::tabulated({1.0, 1.4, 1.8, 2.2}, {1.0, 0.6, 0.4, 0.3});
  CHECK(table(1.0) == Catch::Approx(1.0));
  CHECK(table(2.2) == Catch::Approx(0.3));
  // monotone data stays monotone between knots
  double prev = table(1.0);
  for (int i = 1; i <= 60; ++i) {
    const double cur = table(1.0 + 1.2 * i / 60.0);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
  CHECK_THROWS_AS(table(0.9), ParameterOutOfRange);
  CHECK_THROWS_AS(table(2.3), ParameterOutOfRange);
  CHECK_THROWS_AS(RadialProfile::tabulated({1.0, 0.9}, {1.0, 1.0}), ParameterViolation);
}

TEST_CASE("ensemble JSON round-trips") {
  const auto spec = build_ensemble(5, 2.0, {1.5, 2.5}, RadialProfile::power(1.5),
                                   {0.5, 2}, FamilyKind::ClassIIExteriorTypeA);
  const auto back = spec_from_json(to_json(spec));
  CHECK(back.num_particles == 5);
  CHECK(back.beta == 2.0);
  CHECK(back.geometry.inner_radius == Catch::Approx(1.5));
  CHECK(back.geometry.outer_radius == Catch::Approx(2.5));
  CHECK(back.profile.kind() == ProfileKind::Power);
  CHECK(back.profile.alpha() == Catch::Approx(1.5));
  CHECK(back.charges.origin_charge == Catch::Approx(0.5));
  CHECK(back.charges.negative_charges == 2);
  CHECK(back.family == FamilyKind::ClassIIExteriorTypeA);

  const auto exterior = build_ensemble(
      1, 2.0, {1.0, std::numeric_limits<double>::infinity()}, RadialProfile::flat(),
      {-2.0, 0}, FamilyKind::ClassI);
  const auto ext_back = spec_from_json(to_json(exterior));
  CHECK(std::isinf(ext_back.geometry.outer_radius));

  const auto tab = build_ensemble(
      2, 2.0, {1.0, 2.0},
      RadialProfile::tabulated({1.0, 1.5, 2.0}, {1.0, 0.8, 0.9}), {0.0, 0},
      FamilyKind::ClassI);
  const auto tab_back = spec_from_json(to_json(tab));
  CHECK(tab_back.profile(1.25) == Catch::Approx(tab.profile(1.25)).epsilon(1e-14));
}
