#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "coulombgas/asymptotics.hpp"
#include "coulombgas/ensemble.hpp"
#include "coulombgas/io.hpp"
#include "coulombgas/kernel.hpp"
#include "coulombgas/quadrature.hpp"

namespace coulombgas {

struct ScaledPoint {
  double t = 0.0;
  double phi = 0.0;
};

/// Physical point of the frame's scaling map: r per the frame kind,
/// theta = psi + phi/N.
inline Complex scaled_point(const ScalingFrame& frame, double t, double phi) {
  validate_frame(frame);
  const double n = frame.n;
  double r = 0.0;
  switch (frame.kind) {
    case FrameKind::DiscEdge:
      if (t < 0.0 || t > n) throw ParameterOutOfRange("disc edge needs 0 <= t <= N");
      r = frame.v * (1.0 - t / n);
      break;
    case FrameKind::ExteriorEdge:
      if (t < 0.0) throw ParameterOutOfRange("exterior edge needs t >= 0");
      r = frame.v * (1.0 + t / n);
      break;
    case FrameKind::ThinAnnulus:
      if (t < 0.0 || t > frame.width)
        throw ParameterOutOfRange("thin annulus needs 0 <= t <= T");
      r = frame.v * (1.0 - t / n);
      break;
    case FrameKind::NearUnitCircleOuter:
    case FrameKind::NearUnitCircleInner:
      if (t < 0.0 || t > frame.width)
        throw ParameterOutOfRange("near-circle frame needs 0 <= t <= T");
      r = 1.0 + (frame.offset - t) / n;
      break;
  }
  if (!(r > 0.0)) throw ParameterOutOfRange("scaled radius not positive");
  return r * expi(frame.base_angle + phi / n);
}

/// The finite-N ensemble whose N -> infinity limit is the frame's regime.
/// Gamma and M are integer-rounded from gamma N and mu N; pass m_override >= 0
/// to pin M directly (fixed-M regimes).
inline EnsembleSpec matched_spec(const ScalingFrame& frame, const RadialProfile& profile,
                                 int m_override = -1) {
  validate_frame(frame);
  const double n = frame.n;
  const long gamma_int = std::lround(frame.gamma * n);
  const int m = m_override >= 0 ? m_override
                                : static_cast<int>(std::lround(frame.mu * n));
  AnnulusGeometry geo;
  FamilyKind family = FamilyKind::ClassI;
  switch (frame.kind) {
    case FrameKind::DiscEdge:
      geo = {0.0, frame.v};
      break;
    case FrameKind::ExteriorEdge:
      geo = {frame.v, std::numeric_limits<double>::infinity()};
      if (!(gamma_int < -frame.n))
        throw GeometryViolation("exterior edge needs Gamma < -N");
      break;
    case FrameKind::ThinAnnulus:
      geo = {frame.v * (1.0 - frame.width / n), frame.v};
      if (!(geo.inner_radius > 0.0))
        throw GeometryViolation("thin annulus needs T < N");
      break;
    case FrameKind::NearUnitCircleOuter:
      geo = {1.0 + (frame.offset - frame.width) / n, 1.0 + frame.offset / n};
      break;
    case FrameKind::NearUnitCircleInner:
      geo = {1.0 + (frame.offset - frame.width) / n, 1.0 + frame.offset / n};
      if (!(geo.inner_radius > 0.0))
        throw GeometryViolation("inner near-circle frame needs T - u < N");
      break;
  }
  if (m > 0) {
    if (geo.inner_radius > 1.0)
      family = FamilyKind::ClassIIExteriorTypeA;
    else if (geo.outer_radius < 1.0)
      family = FamilyKind::ClassIIInteriorTypeB;
    else
      throw GeometryViolation(
          "charged ensembles need the annulus strictly off the unit circle");
  }
  return build_ensemble(frame.n, 2.0, geo, profile,
                        {static_cast<double>(gamma_int), m}, family);
}

/// Frame with gamma and mu replaced by the realized rates Gamma/N and M/N of a
/// concrete spec (removes the integer-rounding bias from limit evaluations).
inline ScalingFrame realized_frame(const ScalingFrame& frame, const EnsembleSpec& spec) {
  ScalingFrame out = frame;
  out.gamma = spec.charges.origin_charge / frame.n;
  out.mu = static_cast<double>(spec.charges.negative_charges) / frame.n;
  return out;
}

/// Default comparison grid: t at Chebyshev nodes of (0,T), phi equispaced in
/// the frame's legal window, paired elementwise.
inline std::vector<ScaledPoint> default_grid(const ScalingFrame& frame, int count = 8) {
  const double t_hi = frame.kind == FrameKind::DiscEdge ||
                              frame.kind == FrameKind::ExteriorEdge
                          ? 1.0
                          : frame.width;
  const double phi_hi = frame.mu > 0.0 ? std::min(kPi, kTwoPi / frame.mu) : kPi;
  const auto t_nodes = chebyshev_nodes(count, 0.0, t_hi);
  std::vector<ScaledPoint> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = {t_nodes[i], phi_hi * (i + 0.5) / count};
  return grid;
}

struct ErrorRow {
  double t1, t2, phi1, phi2;
  double absk_fin, absk_lim, rel_dev;
  double det2_fin, det2_lim, det2_dev;
};

/// Gauge-invariant deviation report between a finite-N kernel and a limit
/// kernel on a grid of scaled-coordinate pairs.
struct ErrorReport {
  std::string formula;
  std::string frame_kind;
  int n_used = 0;
  double realized_gamma = 0.0;
  double realized_mu = 0.0;
  std::vector<ErrorRow> rows;
  double sup_absk_dev = 0.0, mean_absk_dev = 0.0;
  double sup_det2_dev = 0.0, mean_det2_dev = 0.0;

  double sup_dev() const { return std::max(sup_absk_dev, sup_det2_dev); }

  std::string to_csv() const {
    std::ostringstream out;
    CsvWriter csv(out, {"t1", "t2", "phi1", "phi2", "absK_fin", "absK_lim", "rel_dev",
                        "det2_fin", "det2_lim", "det2_dev"});
    for (const auto& r : rows)
      csv.row({r.t1, r.t2, r.phi1, r.phi2, r.absk_fin, r.absk_lim, r.rel_dev,
               r.det2_fin, r.det2_lim, r.det2_dev});
    return out.str();
  }

  nlohmann::json summary_json() const {
    return {{"formula", formula},
            {"frame", frame_kind},
            {"n", n_used},
            {"realized_gamma", realized_gamma},
            {"realized_mu", realized_mu},
            {"sup_absK_dev", sup_absk_dev},
            {"mean_absK_dev", mean_absk_dev},
            {"sup_det2_dev", sup_det2_dev},
            {"mean_det2_dev", mean_det2_dev},
            {"sup_dev", sup_dev()}};
  }
};

namespace detail {

/// max of relative error where the reference is away from zero, absolute
/// error measured against the grid scale otherwise.
inline double hybrid_dev(double got, double ref, double scale) {
  const double denom = std::abs(ref) > 1e-3 * scale ? std::abs(ref) : scale;
  return std::abs(got - ref) / denom;
}

}  // namespace detail

/// Evaluates the finite-N kernel at the scaled-point images and the limit
/// kernel at the scaled coordinates; reports |K| and 2-point determinant
/// deviations over all ordered pairs of grid points.
inline ErrorReport compare(const KernelEvaluator& kernel, FormulaId id,
                           const ScalingFrame& frame,
                           const std::vector<ScaledPoint>& grid,
                           double limit_rel_tol = 1e-10) {
  if (kernel.spec().num_particles != frame.n)
    throw ParameterViolation("kernel and frame disagree on N");
  const ScalingFrame rframe = realized_frame(frame, kernel.spec());
  const int count = static_cast<int>(grid.size());

  std::vector<Complex> z(count);
  for (int i = 0; i < count; ++i) z[i] = scaled_point(frame, grid[i].t, grid[i].phi);

  std::vector<std::vector<Complex>> k_fin(count, std::vector<Complex>(count));
  std::vector<std::vector<Complex>> k_lim(count, std::vector<Complex>(count));
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      k_fin[i][j] = kernel.eval(z[i], z[j]);
      k_lim[i][j] = eval_limit_kernel(id, rframe, grid[i].t, grid[j].t, grid[i].phi,
                                      grid[j].phi, limit_rel_tol);
    }
  }

  double absk_scale = 0.0, det2_scale = 0.0;
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      absk_scale = std::max(absk_scale, std::abs(k_lim[i][j]));
  auto det2 = [](const std::vector<std::vector<Complex>>& k, int i, int j) {
    return k[i][i].real() * k[j][j].real() - std::norm(k[i][j]);
  };
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      det2_scale = std::max(det2_scale, std::abs(det2(k_lim, i, j)));

  ErrorReport report;
  report.formula = formula_info(id).name;
  report.frame_kind = frame_kind_name(frame.kind);
  report.n_used = frame.n;
  report.realized_gamma = rframe.gamma;
  report.realized_mu = rframe.mu;
  double sum_absk = 0.0, sum_det2 = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      ErrorRow row{};
      row.t1 = grid[i].t;
      row.t2 = grid[j].t;
      row.phi1 = grid[i].phi;
      row.phi2 = grid[j].phi;
      row.absk_fin = std::abs(k_fin[i][j]);
      row.absk_lim = std::abs(k_lim[i][j]);
      row.rel_dev = detail::hybrid_dev(row.absk_fin, row.absk_lim, absk_scale);
      row.det2_fin = det2(k_fin, i, j);
      row.det2_lim = det2(k_lim, i, j);
      row.det2_dev = detail::hybrid_dev(row.det2_fin, row.det2_lim, det2_scale);
      report.sup_absk_dev = std::max(report.sup_absk_dev, row.rel_dev);
      report.sup_det2_dev = std::max(report.sup_det2_dev, row.det2_dev);
      sum_absk += row.rel_dev;
      sum_det2 += row.det2_dev;
      report.rows.push_back(row);
    }
  }
  const double denom = count * count;
  report.mean_absk_dev = sum_absk / denom;
  report.mean_det2_dev = sum_det2 / denom;
  return report;
}

/// Sup deviation (same gauge-invariant metric as compare) between the
/// finite-N kernels of two radial profiles on a shared scaled grid; shrinks
/// with N when the limit is profile-independent.
inline double universality_probe(const ScalingFrame& frame, const RadialProfile& a,
                                 const RadialProfile& b,
                                 const std::vector<ScaledPoint>& grid,
                                 int m_override = -1) {
  const auto kernel_a = build_kernel(matched_spec(frame, a, m_override));
  const auto kernel_b = build_kernel(matched_spec(frame, b, m_override));
  const int count = static_cast<int>(grid.size());
  std::vector<Complex> z(count);
  for (int i = 0; i < count; ++i) z[i] = scaled_point(frame, grid[i].t, grid[i].phi);
  std::vector<std::vector<Complex>> ka(count, std::vector<Complex>(count));
  std::vector<std::vector<Complex>> kb(count, std::vector<Complex>(count));
  double scale = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      ka[i][j] = kernel_a.eval(z[i], z[j]);
      kb[i][j] = kernel_b.eval(z[i], z[j]);
      scale = std::max(scale, std::abs(kb[i][j]));
    }
  }
  auto det2 = [](const std::vector<std::vector<Complex>>& k, int i, int j) {
    return k[i][i].real() * k[j][j].real() - std::norm(k[i][j]);
  };
  double det2_scale = 0.0;
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      det2_scale = std::max(det2_scale, std::abs(det2(kb, i, j)));
  double sup = 0.0;
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      sup = std::max(sup, detail::hybrid_dev(std::abs(ka[i][j]), std::abs(kb[i][j]),
                                             scale));
      sup = std::max(sup, detail::hybrid_dev(det2(ka, i, j), det2(kb, i, j),
                                             det2_scale));
    }
  }
  return sup;
}

}  // namespace coulombgas
