#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <vector>

#include "coulombgas/errors.hpp"
#include "coulombgas/numeric.hpp"

namespace coulombgas {

namespace detail {

// Gauss-Kronrod 7/15 pair: {abscissa, Gauss weight, Kronrod weight}.
inline constexpr double kGk15[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.000000000000000, 0.204432940075298},
    {0.586087235467691, 0.000000000000000, 0.169004726639267},
    {0.864864423359769, 0.000000000000000, 0.104790010322250},
    {0.991455371120813, 0.000000000000000, 0.022935322010529}};

template <class R>
struct Panel {
  double a, b;
  R value;
  double err;
};

template <class F>
auto gk15(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  using R = decltype(f(mid));
  const R f0 = f(mid);
  R g7 = static_cast<R>(kGk15[0][1] * half) * f0;
  R k15 = static_cast<R>(kGk15[0][2] * half) * f0;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kGk15[i][0];
    const R fi = f(mid + dx) + f(mid - dx);
    g7 += static_cast<R>(kGk15[i][1] * half) * fi;
    k15 += static_cast<R>(kGk15[i][2] * half) * fi;
  }
  return Panel<R>{a, b, k15, std::abs(k15 - g7)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7/15 integration over [a,b]; the panel
/// with the largest error estimate is bisected until the summed estimate
/// meets max(abs_tol, rel_tol * |integral|). Works for real and complex
/// integrands and tolerates integrable endpoint singularities.
template <class F>
auto integrate(const F& f, double a, double b, double rel_tol = 1e-10,
               double abs_tol = 0.0) {
  using R = decltype(f(0.5 * (a + b)));
  if (a == b) return R{};
  using P = detail::Panel<R>;
  auto worse = [](const P& x, const P& y) { return x.err < y.err; };
  std::priority_queue<P, std::vector<P>, decltype(worse)> queue(worse);
  P first = detail::gk15(f, a, b);
  R total = first.value;
  double total_err = first.err;
  queue.push(std::move(first));
  for (int iter = 0; iter < 20000; ++iter) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (total_err <= tol && iter >= 1) return total;
    P top = queue.top();
    queue.pop();
    const double m = 0.5 * (top.a + top.b);
    P left = detail::gk15(f, top.a, m);
    P right = detail::gk15(f, m, top.b);
    total += left.value + right.value - top.value;
    total_err += left.err + right.err - top.err;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }
  throw QuadratureNonConvergence("adaptive quadrature: panel limit hit");
}

/// Integral over [a, infinity) via the rational substitution r = a + s/(1-s).
template <class F>
auto integrate_to_infinity(const F& f, double a, double rel_tol = 1e-10,
                           double abs_tol = 0.0) {
  auto g = [&](double s) {
    const double om = 1.0 - s;
    return f(a + s / om) / (om * om);
  };
  return integrate(g, 0.0, 1.0, rel_tol, abs_tol);
}

/// Trapezoid rule over one period [0, 2*pi); spectrally accurate for smooth
/// periodic integrands. Node count doubles until two successive estimates
/// agree to tolerance.
template <class F>
auto periodic_trapezoid(const F& f, double rel_tol = 1e-12, double abs_floor = 0.0,
                        int min_nodes = 16) {
  using R = decltype(f(0.0));
  int n = min_nodes;
  R prev{};
  bool have_prev = false;
  while (n <= (1 << 21)) {
    R acc{};
    const double h = kTwoPi / n;
    for (int i = 0; i < n; ++i) acc += f(h * i);
    acc *= h;
    if (have_prev) {
      const double err = std::abs(acc - prev);
      if (err <= std::max(rel_tol * std::abs(acc), abs_floor)) return acc;
    }
    prev = acc;
    have_prev = true;
    n *= 2;
  }
  throw QuadratureNonConvergence("periodic trapezoid: node limit hit");
}

/// Gauss-Legendre nodes and weights of arbitrary order on [a,b].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_nodes(
    int order, double a, double b) {
  std::vector<double> x(order), w(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      dp = order * (t * p0 - p1) / (t * t - 1.0);
      const double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    x[i] = mid - half * t;
    x[order - 1 - i] = mid + half * t;
    w[i] = w[order - 1 - i] = 2.0 * half / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

/// Chebyshev nodes of the open interval (a,b), increasing order.
inline std::vector<double> chebyshev_nodes(int count, double a, double b) {
  std::vector<double> x(count);
  for (int i = 0; i < count; ++i) {
    const double c = std::cos(kPi * (2.0 * i + 1.0) / (2.0 * count));
    x[count - 1 - i] = 0.5 * (a + b) + 0.5 * (b - a) * c;
  }
  return x;
}

}  // namespace coulombgas
