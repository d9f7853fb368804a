// Acceptance suite: runs every stated criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coulombgas/asymptotics.hpp"
#include "coulombgas/kernel.hpp"
#include "coulombgas/oracle.hpp"
#include "coulombgas/orthopoly.hpp"
#include "coulombgas/sampler.hpp"
#include "coulombgas/scaling.hpp"
#include "coulombgas/stats.hpp"

using namespace coulombgas;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream details;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      details << (details.str().empty() ? "" : "; ") << what;
    }
  }
  void note(const std::string& what) {
    details << (details.str().empty() ? "" : "; ") << what;
  }
};

EnsembleSpec spec_of(int n, double inner, double outer, double gamma, int m,
                     FamilyKind family, RadialProfile profile = RadialProfile::flat()) {
  return build_ensemble(n, 2.0, {inner, outer}, profile, {gamma, m}, family);
}

ScalingFrame thin(int n, double v, double gamma, double width, double mu = 0.0) {
  return {FrameKind::ThinAnnulus, n, v, gamma, mu, width, 0.0, 0.0};
}

ScalingFrame outer_circle(int n, double gamma, double mu, double width, double u,
                          double psi = 0.0) {
  return {FrameKind::NearUnitCircleOuter, n, 1.0, gamma, mu, width, u, psi};
}

ScalingFrame inner_circle(int n, double gamma, double mu, double width, double u) {
  return {FrameKind::NearUnitCircleInner, n, 1.0, gamma, mu, width, u, 0.0};
}

// 1. circle orthogonality against the printed closed forms
void criterion_orthogonality(Outcome& out) {
  const double tol = 1e-10;
  double worst_off = 0.0, worst_diag = 0.0;
  for (int m_charges : {1, 2, 3, 8}) {
    const struct {
      PolynomialFamily family;
      std::vector<double> radii;
    } sides[] = {{PolynomialFamily::type_a(m_charges), {1.1, 1.3, 1.7, 2.5, 4.0}},
                 {PolynomialFamily::type_b(m_charges, 13),
                  {0.25, 0.4, 0.55, 0.7, 0.85}}};
    for (const auto& side : sides) {
      for (double r : side.radii) {
        for (int i = 0; i <= 12; ++i) {
          for (int j = i; j <= 12; ++j) {
            const Complex val =
                circle_orthogonality_check(side.family, r, i, j, 1e-13);
            const double scale = std::sqrt(circle_norm_closed(side.family, r, i) *
                                           circle_norm_closed(side.family, r, j));
            if (i == j)
              worst_diag = std::max(worst_diag,
                                    std::abs(val.real() - scale) / scale);
            else
              worst_off = std::max(worst_off, std::abs(val) / scale);
          }
        }
      }
    }
  }
  std::ostringstream msg;
  msg << "worst off-diagonal " << worst_off << ", worst diagonal " << worst_diag;
  out.note(msg.str());
  out.require(worst_off < tol, "off-diagonal above 1e-10");
  out.require(worst_diag < tol, "diagonal above 1e-10 relative");
}

// 2. total kernel mass equals N
void criterion_mass(Outcome& out) {
  const struct {
    EnsembleSpec spec;
  } cases[] = {
      {spec_of(10, 1.0, 2.0, 0.0, 0, FamilyKind::ClassI)},
      {spec_of(4, 0.0, 1.0, 0.5, 0, FamilyKind::ClassI)},
      {spec_of(8, 1.5, 2.5, 0.0, 3, FamilyKind::ClassIIExteriorTypeA)},
      {spec_of(7, 0.3, 0.8, 0.5, 2, FamilyKind::ClassIIInteriorTypeB)}};
  double worst = 0.0;
  for (const auto& c : cases) {
    const double mass = total_mass(build_kernel(c.spec), 1e-9);
    worst = std::max(worst,
                     std::abs(mass - c.spec.num_particles) / c.spec.num_particles);
  }
  std::ostringstream msg;
  msg << "worst relative mass deviation " << worst;
  out.note(msg.str());
  out.require(worst < 1e-8, "mass deviates beyond 1e-8");
}

// 3. reproducing property
void criterion_reproducing(Outcome& out) {
  const struct {
    EnsembleSpec spec;
    Complex z1, z2;
  } cases[] = {
      {spec_of(5, 1.0, 2.0, 0.0, 0, FamilyKind::ClassI), {1.5, 0.2}, {-0.3, 1.4}},
      {spec_of(3, 0.0, 1.0, 0.5, 0, FamilyKind::ClassI), {0.4, 0.1}, {-0.2, 0.5}},
      {spec_of(4, 1.5, 2.5, 0.0, 2, FamilyKind::ClassIIExteriorTypeA),
       {1.9, 0.3},
       {-1.7, 0.8}},
      {spec_of(4, 0.3, 0.8, 0.0, 2, FamilyKind::ClassIIInteriorTypeB),
       {0.5, 0.1},
       {-0.2, 0.6}}};
  double worst = 0.0;
  for (const auto& c : cases)
    worst = std::max(worst,
                     reproducing_defect(build_kernel(c.spec), c.z1, c.z2, 1e-9));
  std::ostringstream msg;
  msg << "worst defect " << worst;
  out.note(msg.str());
  out.require(worst < 1e-7, "reproducing defect above 1e-7");
}

// 4. closed-form concordance
void criterion_closed_forms(Outcome& out) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ang(0.0, kTwoPi);
  double worst = 0.0;
  {
    const double v = 1.4;
    const auto kernel = build_kernel(spec_of(8, 0.0, v, 0.5, 0, FamilyKind::ClassI));
    std::uniform_real_distribution<double> rad(0.05, v);
    for (int i = 0; i < 100; ++i) {
      const Complex z1 = rad(rng) * expi(ang(rng)), z2 = rad(rng) * expi(ang(rng));
      const Complex a = kernel.eval(z1, z2);
      const Complex b = closed_form_disc_kernel(8, 0.5, v, z1, z2);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  }
  {
    const auto kernel = build_kernel(
        spec_of(4, 1.1, std::numeric_limits<double>::infinity(), -7.0, 0,
                FamilyKind::ClassI));
    std::uniform_real_distribution<double> rad(1.1, 3.0);
    for (int i = 0; i < 100; ++i) {
      const Complex z1 = rad(rng) * expi(ang(rng)), z2 = rad(rng) * expi(ang(rng));
      const Complex a = kernel.eval(z1, z2);
      const Complex b = closed_form_exterior_kernel(4, -7.0, 1.1, z1, z2);
      worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
  }
  out.require(worst < 1e-12, "kernel vs closed form above 1e-12");
  // |1 - zeta| = 1e-10 stress point against the direct-sum oracle
  double worst_stress = 0.0;
  {
    const double r = std::sqrt(1.0 - 1e-10);
    const Complex z{r, 0.0};
    const Complex val = closed_form_disc_kernel(40, 0.25, 1.0, z, z);
    Complex sum = 0.0, zp = 1.0;
    for (int n = 0; n < 40; ++n) {
      sum += (2.0 * n + 2.5) * zp;
      zp *= Complex{r * r, 0.0};
    }
    const Complex oracle = std::pow(r * r, 0.25) / kTwoPi * sum;
    worst_stress = std::abs(val - oracle) / std::abs(oracle);
  }
  {
    const double r = std::sqrt(1.0 + 1e-10);
    const Complex z{r, 0.0};
    const Complex val = closed_form_exterior_kernel(10, -14.0, 1.0, z, z);
    Complex sum = 0.0, zp = 1.0;
    for (int n = 0; n < 10; ++n) {
      sum += (2.0 * n - 26.0) * zp;
      zp *= Complex{r * r, 0.0};
    }
    const Complex oracle = -std::pow(r * r, -14.0) / kTwoPi * sum;
    worst_stress = std::max(worst_stress, std::abs(val - oracle) / std::abs(oracle));
  }
  std::ostringstream msg;
  msg << "worst random-pair dev " << worst << ", stress dev " << worst_stress;
  out.note(msg.str());
  out.require(worst_stress < 1e-8, "singularity stress above 1e-8");
}

// 5. determinantal vs brute force vs Monte Carlo
void criterion_oracle(Outcome& out) {
  const auto disc = spec_of(2, 0.0, 1.0, 0.0, 0, FamilyKind::ClassI);
  const std::vector<Complex> pts{{0.0, 0.0}, {0.5, 0.0}};
  const double det_value = build_kernel(disc).correlation(pts).value;
  const double brute = brute_force_correlation(disc, 2.0, pts, 1e-8);
  const double brute_dev = std::abs(det_value - brute) / det_value;
  const auto mc = mc_correlation(disc, 2.0, pts, 1000000, 424242);
  const double z = std::abs(mc.value - det_value) / mc.stderr_;
  std::ostringstream msg;
  msg << "rho = " << det_value << ", |det-brute|/rho = " << brute_dev
      << ", MC z-score = " << z;
  out.note(msg.str());
  out.require(std::abs(det_value - 0.050660591821169) < 1e-9,
              "determinantal value drifted from 0.050660591821169");
  out.require(brute_dev < 1e-6, "brute force beyond 1e-6");
  out.require(z < 3.0, "Monte Carlo beyond 3 sigma");
}

// 6. inversion duality
void criterion_duality(Outcome& out) {
  double worst = 0.0;
  for (int n : {1, 2, 3, 5}) {
    const EnsembleSpec specs[] = {
        spec_of(n, 1.0, 2.0, 0.5, 0, FamilyKind::ClassI),
        spec_of(n, 1.5, 2.5, 0.0, 2, FamilyKind::ClassIIExteriorTypeA)};
    for (const auto& spec : specs) {
      const double mid =
          0.5 * (spec.geometry.inner_radius + spec.geometry.outer_radius);
      worst = std::max(worst, duality_check(spec, 2.0, {{mid, 0.0}},
                                            DualityMethod::Determinantal)
                                  .residual);
      if (n >= 2) {
        const std::vector<Complex> two{{mid, 0.0}, mid * 1.06 * expi(0.5)};
        worst = std::max(
            worst,
            duality_check(spec, 2.0, two, DualityMethod::Determinantal).residual);
      }
    }
  }
  const auto annulus = spec_of(2, 1.0, 2.0, 0.0, 0, FamilyKind::ClassI);
  const auto mc = duality_check(annulus, 4.0, {{1.4, 0.0}},
                                DualityMethod::MonteCarlo, 500000, 1234);
  std::ostringstream msg;
  msg << "worst determinantal residual " << worst << ", beta=4 MC residual "
      << mc.residual << " (sigma " << mc.sigma << ")";
  out.note(msg.str());
  out.require(worst < 1e-8, "determinantal residual above 1e-8");
  out.require(mc.residual < 3.0 * mc.sigma, "beta=4 MC residual beyond 3 sigma");
}

// 7. universal thin-annulus limit, gamma = 0, T = 1
void criterion_thin_annulus(Outcome& out) {
  double prev = std::numeric_limits<double>::infinity();
  double final_dev = 0.0;
  bool monotone = true;
  for (int n : {100, 200, 400}) {
    const auto frame = thin(n, 1.0, 0.0, 1.0);
    const auto kernel = build_kernel(matched_spec(frame, RadialProfile::flat()));
    const auto report =
        compare(kernel, FormulaId::ThinAnnulusUniversal, frame, default_grid(frame));
    monotone = monotone && report.sup_dev() < prev;
    prev = report.sup_dev();
    final_dev = report.sup_dev();
  }
  std::ostringstream msg;
  msg << "sup deviation at N=400: " << final_dev;
  out.note(msg.str());
  out.require(monotone, "deviation not monotonically decreasing over N");
  out.require(final_dev < 0.05, "deviation at N=400 above 0.05");
}

// 8. g-independence of the thin-annulus limit
void criterion_universality(Outcome& out) {
  const auto grid = default_grid(thin(100, 1.0, 0.0, 1.0));
  const double dev100 =
      universality_probe(thin(100, 1.0, 0.0, 1.0), RadialProfile::flat(),
                         RadialProfile::power(1.0), grid);
  const double dev400 =
      universality_probe(thin(400, 1.0, 0.0, 1.0), RadialProfile::flat(),
                         RadialProfile::power(1.0), grid);
  std::ostringstream msg;
  msg << "flat-vs-power deviation: N=100 " << dev100 << ", N=400 " << dev400;
  out.note(msg.str());
  out.require(dev400 < 0.5 * dev100, "N=400 deviation not below half of N=100");
}

// 9. universality breakdown near the unit circle, M = 2
void criterion_non_universality(Outcome& out) {
  const double u = 2.0, width = 1.0;
  const int m_fixed = 2;
  double final_nu = 0.0, final_uni = 0.0;
  bool monotone_nu = true, monotone_uni = true;
  std::vector<ScaledPoint> grid;
  const auto t_nodes = chebyshev_nodes(8, 0.0, width);
  for (int i = 0; i < 8; ++i) grid.push_back({t_nodes[i], kPi * (i + 0.5) / 8.0});
  double prev_nu = std::numeric_limits<double>::infinity();
  double prev_uni = prev_nu;
  for (int n : {100, 200, 400}) {
    // e^{iM psi} = 1 at psi = 0: non-universal formula
    const auto frame0 = outer_circle(n, 0.0, 0.0, width, u, 0.0);
    const auto kernel0 =
        build_kernel(matched_spec(frame0, RadialProfile::flat(), m_fixed));
    const auto report0 =
        compare(kernel0, FormulaId::NonUniversalMFixed, frame0, grid);
    monotone_nu = monotone_nu && report0.sup_dev() < prev_nu;
    prev_nu = final_nu = report0.sup_dev();
    // e^{iM psi} = -1 at psi = pi/2: universal formula
    const auto frame1 = outer_circle(n, 0.0, 0.0, width, u, kPi / 2.0);
    const auto kernel1 =
        build_kernel(matched_spec(frame1, RadialProfile::flat(), m_fixed));
    const auto report1 = compare(kernel1, FormulaId::UniversalMFixed, frame1, grid);
    monotone_uni = monotone_uni && report1.sup_dev() < prev_uni;
    prev_uni = final_uni = report1.sup_dev();
  }
  // the two limit kernels genuinely differ at the same scaled points
  const auto frame = outer_circle(400, 0.0, 0.0, width, u, 0.0);
  double scale = 0.0, separation = 0.0;
  for (const auto& p : grid)
    for (const auto& q : grid)
      scale = std::max(scale, std::abs(eval_limit_kernel(FormulaId::UniversalMFixed,
                                                         frame, p.t, q.t, p.phi,
                                                         q.phi)));
  for (const auto& p : grid) {
    for (const auto& q : grid) {
      const Complex nu = eval_limit_kernel(FormulaId::NonUniversalMFixed, frame, p.t,
                                           q.t, p.phi, q.phi);
      const Complex uni = eval_limit_kernel(FormulaId::UniversalMFixed, frame, p.t,
                                            q.t, p.phi, q.phi);
      separation = std::max(separation, std::abs(std::abs(nu) - std::abs(uni)) / scale);
    }
  }
  const double fit_tol = std::max(final_nu, final_uni);
  std::ostringstream msg;
  msg << "final deviations: non-universal " << final_nu << ", universal " << final_uni
      << "; limit separation " << separation;
  out.note(msg.str());
  out.require(monotone_nu, "non-universal deviation not decreasing");
  out.require(monotone_uni, "universal deviation not decreasing");
  out.require(separation > 10.0 * fit_tol,
              "limit kernels separated by less than 10x the fit tolerance");
}

// 10. internal identities of the limit catalog
void criterion_limit_identities(Outcome& out) {
  // masses
  const double m1 = limit_mass(FormulaId::DiscEdgeKappa,
                               {FrameKind::DiscEdge, 7, 1.3, 0.0, 0, 1, 0, 0});
  const double m2 = limit_mass(FormulaId::Kappa2, thin(6, 1.0, -0.5, 1.0));
  const double m3 = limit_mass(FormulaId::Kappa2Tilde, thin(6, 1.0, -0.5, 1.0));
  out.require(std::abs(m1 - 7.0) < 1e-8 * 7.0, "kappa mass != N");
  out.require(std::abs(m2 - 3.0) < 1e-8 * 3.0, "kappa2 mass != N(1+gamma)");
  out.require(std::abs(m3 - 3.0) < 1e-8 * 3.0, "kappa2-tilde mass != -N gamma");
  // split additivity at the stated bounds
  double worst_add = 0.0;
  {
    const auto frame = thin(4, 1.0, 0.3, 1.2, 0.45);
    for (double t : {0.2, 0.8}) {
      for (double phi : {0.0, 0.7}) {
        const Complex k1 =
            eval_limit_kernel(FormulaId::MLargeUlargeK1, frame, t, 0.5, phi, 0.1);
        const Complex k2 =
            eval_limit_kernel(FormulaId::MLargeUlargeK2, frame, t, 0.5, phi, 0.1);
        const Complex full =
            eval_limit_kernel(FormulaId::MLargeUniversal, frame, t, 0.5, phi, 0.1);
        worst_add = std::max(worst_add, std::abs(k1 + k2 - full) / std::abs(full));
      }
    }
  }
  out.require(worst_add < 1e-10, "K1 + K2 != universal beyond 1e-10");
  // very large M at mu = 1
  double worst_vl = 0.0;
  {
    const auto frame = outer_circle(3, 0.2, 1.0, 1.0, 2.0);
    for (double t : {0.25, 0.75}) {
      const Complex vl =
          eval_limit_kernel(FormulaId::VeryLargeM, frame, t, 0.4, 1.1, 0.3);
      const Complex k1 =
          eval_limit_kernel(FormulaId::MLargeK1, frame, t, 0.4, 1.1, 0.3);
      const Complex k2 =
          eval_limit_kernel(FormulaId::MLargeK2, frame, t, 0.4, 1.1, 0.3);
      worst_vl = std::max(worst_vl, std::abs(vl - (k1 + k2)) / std::abs(vl));
    }
  }
  out.require(worst_vl < 1e-10, "very-large-M != K1 + K2 at mu = 1");
  // interior <-> exterior duality mappings, pointwise up to e^{-i(phi1-phi2)}
  double worst_dual = 0.0;
  {
    const double gamma = 0.25, width = 1.0, u = 2.0, mu = 0.55;
    const auto frame_out = outer_circle(2, gamma, mu, width, u);
    const auto frame_in = inner_circle(2, -gamma + mu - 1.0, mu, width, width - u);
    const auto frame_out_fixed = outer_circle(2, gamma, 0.0, width, u);
    const auto frame_in_fixed =
        inner_circle(2, -gamma - 1.0, 0.0, width, width - u);
    const double window = kTwoPi / mu;
    for (double t1 : {0.2, 0.6}) {
      for (double p1 : {0.3, 0.9}) {
        const double t2 = 0.45, p2 = 0.15;
        const double phase = p1 - p2;
        // fixed-M: universal and non-universal branches
        const Complex u_in =
            eval_limit_kernel(FormulaId::InteriorUniversal, frame_in_fixed,
                              width - t1, width - t2, -p1, -p2);
        const Complex u_out =
            expi(-phase) * eval_limit_kernel(FormulaId::UniversalMFixed,
                                             frame_out_fixed, t1, t2, p1, p2);
        worst_dual = std::max(worst_dual, std::abs(u_in - u_out) / std::abs(u_out));
        const Complex n_in =
            eval_limit_kernel(FormulaId::InteriorNonUniversalMFixed, frame_in_fixed,
                              width - t1, width - t2, -p1, -p2);
        const Complex n_out =
            expi(-phase) * eval_limit_kernel(FormulaId::NonUniversalMFixed,
                                             frame_out_fixed, t1, t2, p1, p2);
        worst_dual = std::max(worst_dual, std::abs(n_in - n_out) / std::abs(n_out));
        // large-M pair swap
        const Complex k1_in =
            eval_limit_kernel(FormulaId::InteriorMLargeK1, frame_in, width - t1,
                              width - t2, window - p1, window - p2);
        const Complex k2_out =
            expi(-phase) * eval_limit_kernel(FormulaId::MLargeK2, frame_out, t1, t2,
                                             p1, p2);
        worst_dual = std::max(worst_dual,
                              std::abs(k1_in - k2_out) / std::abs(k2_out));
        const Complex k2_in =
            eval_limit_kernel(FormulaId::InteriorMLargeK2, frame_in, width - t1,
                              width - t2, window - p1, window - p2);
        const Complex k1_out =
            expi(-phase) * eval_limit_kernel(FormulaId::MLargeK1, frame_out, t1, t2,
                                             p1, p2);
        worst_dual = std::max(worst_dual,
                              std::abs(k2_in - k1_out) / std::abs(k1_out));
      }
    }
    // very-large-M counterpart
    const auto fo = outer_circle(2, 0.25, 1.4, 1.0, 2.0);
    const auto fi = inner_circle(2, -0.25 + 1.4 - 1.0, 1.4, 1.0, 1.0 - 2.0);
    const double wvl = kTwoPi / 1.4;
    const Complex vl_in = eval_limit_kernel(FormulaId::InteriorVeryLargeM, fi,
                                            1.0 - 0.2, 1.0 - 0.45, wvl - 0.3,
                                            wvl - 0.15);
    const Complex vl_out =
        expi(-(0.3 - 0.15)) *
        eval_limit_kernel(FormulaId::VeryLargeM, fo, 0.2, 0.45, 0.3, 0.15);
    worst_dual = std::max(worst_dual, std::abs(vl_in - vl_out) / std::abs(vl_out));
  }
  std::ostringstream msg;
  msg << "masses (" << m1 << ", " << m2 << ", " << m3 << "), additivity gap "
      << worst_add << ", mu=1 gap " << worst_vl << ", duality gap " << worst_dual;
  out.note(msg.str());
  out.require(worst_dual < 1e-10, "duality mapping beyond 1e-10");
}

// 11. sine-kernel regime of the universal formula
void criterion_sine_kernel(Outcome& out) {
  const double width = 0.01, t = 0.004;
  double worst = 0.0, gamma_spread = 0.0;
  for (double phi = 0.0; phi <= kPi + 1e-12; phi += kPi / 8.0) {
    const double sine = std::abs(1.0 / (kTwoPi * width) * sinc(phi / 2.0));
    double vals[2];
    int i = 0;
    for (double gamma : {0.0, 0.3}) {
      const auto frame = thin(1, 1.0, gamma, width);
      vals[i] = std::abs(eval_limit_kernel(FormulaId::ThinAnnulusUniversal, frame, t,
                                           t, phi, 0.0));
      worst = std::max(worst, std::abs(vals[i] - sine) / sine);
      ++i;
    }
    gamma_spread = std::max(gamma_spread, std::abs(vals[0] - vals[1]) / sine);
  }
  std::ostringstream msg;
  msg << "worst relative deviation from sinc " << worst << ", gamma spread "
      << gamma_spread;
  out.note(msg.str());
  out.require(worst < 0.02, "universal formula departs from sine kernel beyond 2%");
  out.require(gamma_spread < 0.02, "gamma dependence beyond 2%");
}

// 12. sampler histograms against the kernel diagonal, N = 20
void criterion_sampler(Outcome& out) {
  const int n = 20, bins = 6, configs = 4000;
  const auto spec = spec_of(n, 1.0, 2.0, 0.0, 0, FamilyKind::ClassI);
  const auto kernel = build_kernel(spec);
  std::vector<double> edges(bins + 1);
  for (int b = 0; b <= bins; ++b) edges[b] = 1.0 + b / static_cast<double>(bins);
  std::vector<double> expected(bins);
  for (int b = 0; b < bins; ++b)
    expected[b] = integrate(
        [&](double r) { return kTwoPi * r * kernel.density({r, 0.0}); }, edges[b],
        edges[b + 1], 1e-10);
  // independent moduli, exact per-bin variances
  const RadialModuliSampler sampler(spec);
  std::mt19937_64 rng(9001);
  std::vector<double> observed(bins, 0.0);
  for (int c = 0; c < configs; ++c)
    for (double r : sampler.sample(rng))
      observed[std::min<int>(bins - 1, static_cast<int>((r - 1.0) * bins))] += 1.0;
  double worst_z_moduli = 0.0;
  for (int b = 0; b < bins; ++b) {
    double variance = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p = sampler.bin_probability(j, edges[b], edges[b + 1]);
      variance += p * (1.0 - p);
    }
    const double z = std::abs(observed[b] - configs * expected[b]) /
                     std::sqrt(configs * variance);
    worst_z_moduli = std::max(worst_z_moduli, z);
  }
  // MCMC with empirical batch errors
  std::vector<std::vector<double>> counts(bins);
  for (const auto& config : mcmc_configurations(spec, 2.0, 2500, 0, 777)) {
    std::vector<double> per(bins, 0.0);
    for (const auto& z : config) {
      const double r = std::abs(z);
      per[std::min<int>(bins - 1, static_cast<int>((r - 1.0) * bins))] += 1.0;
    }
    for (int b = 0; b < bins; ++b) counts[b].push_back(per[b]);
  }
  double worst_z_mcmc = 0.0;
  for (int b = 0; b < bins; ++b) {
    const auto stats = batch_stats(counts[b]);
    worst_z_mcmc = std::max(worst_z_mcmc,
                            std::abs(stats.mean - expected[b]) / stats.stderr_mean);
  }
  std::ostringstream msg;
  msg << "worst z-scores: independent moduli " << worst_z_moduli << ", MCMC "
      << worst_z_mcmc;
  out.note(msg.str());
  out.require(worst_z_moduli < 3.0, "independent-moduli histogram beyond 3 sigma");
  out.require(worst_z_mcmc < 3.0, "MCMC histogram beyond 3 sigma");
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* label;
    std::function<void(Outcome&)> run;
  } criteria[] = {
      {1, "circle orthogonality (all families, 5 radii)", criterion_orthogonality},
      {2, "kernel mass equals N", criterion_mass},
      {3, "reproducing property", criterion_reproducing},
      {4, "closed-form concordance", criterion_closed_forms},
      {5, "determinantal / brute-force / Monte Carlo agreement", criterion_oracle},
      {6, "inversion duality", criterion_duality},
      {7, "thin-annulus universal limit convergence", criterion_thin_annulus},
      {8, "profile independence of the universal limit", criterion_universality},
      {9, "universality breakdown near the unit circle", criterion_non_universality},
      {10, "limit-kernel internal identities", criterion_limit_identities},
      {11, "sine-kernel regime", criterion_sine_kernel},
      {12, "sampler histograms vs kernel diagonal", criterion_sampler},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      c.run(outcome);
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.note(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("%s  criterion %2d: %-52s [%7.2fs]  %s\n",
                outcome.pass ? "PASS" : "FAIL", c.id, c.label, seconds,
                outcome.details.str().c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
