#include "enso/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace enso {

double tanh_safe(double u) noexcept {
  if (u > 40.0) return 1.0;
  if (u < -40.0) return -1.0;
  return std::tanh(u);
}

double sech2_safe(double u) noexcept {
  const double t = tanh_safe(u);
  return 1.0 - t * t;
}

Eig2 eig_2x2(double a11, double a12, double a21, double a22, double disc_tol) {
  Eig2 out;
  const double tr = a11 + a22;
  const double det = a11 * a22 - a12 * a21;
  // (tr² - 4 det) rewritten to avoid cancellation between comparable products.
  const double disc = (a11 - a22) * (a11 - a22) + 4.0 * a12 * a21;
  if (std::abs(disc) < disc_tol) {
    out.degenerate = true;
    out.real = disc >= 0.0;
    out.lambda1 = out.lambda2 = tr / 2.0;
    return out;
  }
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    // Large-magnitude root first via the sign trick, small root as det/large.
    const double big = (tr >= 0.0) ? (tr + s) / 2.0 : (tr - s) / 2.0;
    const double small = (big != 0.0) ? det / big : (tr - s) / 2.0;
    const double lo = std::min(big, small);
    const double hi = std::max(big, small);
    out.lambda1 = lo;
    out.lambda2 = hi;
    out.real = true;
  } else {
    const double s = std::sqrt(-disc);
    out.lambda1 = {tr / 2.0, -s / 2.0};
    out.lambda2 = {tr / 2.0, s / 2.0};
    out.real = false;
  }
  return out;
}

std::array<double, 2> eigvec_2x2(double a11, double a12, double a21, double a22,
                                 double lambda) {
  // (A - λI) v = 0. Row 1 gives v ∝ (a12, λ - a11); row 2 gives
  // v ∝ (λ - a22, a21). Use whichever has the larger norm.
  const double n1 = std::hypot(a12, lambda - a11);
  const double n2 = std::hypot(lambda - a22, a21);
  std::array<double, 2> v{};
  if (n1 >= n2 && n1 > 0.0) {
    v = {a12 / n1, (lambda - a11) / n1};
  } else if (n2 > 0.0) {
    v = {(lambda - a22) / n2, a21 / n2};
  } else {
    v = {1.0, 0.0};  // A = λI: every direction works
  }
  return v;
}

namespace {

double cubic_value(double p2, double p1, double p0, double x) {
  return ((x + p2) * x + p1) * x + p0;
}

double cubic_derivative(double p2, double p1, double x) {
  return (3.0 * x + 2.0 * p2) * x + p1;
}

double newton_polish_cubic(double p2, double p1, double p0, double x) {
  for (int it = 0; it < 3; ++it) {
    const double f = cubic_value(p2, p1, p0, x);
    const double df = cubic_derivative(p2, p1, x);
    if (df == 0.0) break;
    const double step = f / df;
    if (!std::isfinite(step)) break;
    const double xn = x - step;
    if (!std::isfinite(xn)) break;
    x = xn;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

std::array<std::complex<double>, 3> cubic_roots(double p2, double p1,
                                                double p0) {
  // Depressed form t³ + p t + q with λ = t - p2/3.
  const double shift = p2 / 3.0;
  const double p = p1 - p2 * p2 / 3.0;
  const double q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;

  std::array<std::complex<double>, 3> roots;
  const double half_q_sq = q * q / 4.0;
  const double p_cubed_27 = p * p * p / 27.0;
  const double cardano_disc = half_q_sq + p_cubed_27;  // > 0: one real root

  const double scale = std::max({std::abs(p2), std::abs(p1), std::abs(p0), 1.0});
  if (std::abs(p) < 1e-14 * scale && std::abs(q) < 1e-14 * scale * scale) {
    // (Near-)triple root.
    roots[0] = roots[1] = roots[2] = -shift;
    return roots;
  }

  if (cardano_disc > 0.0) {
    // One real root via Cardano with the sign-safe combination.
    const double s = std::sqrt(cardano_disc);
    const double A = std::cbrt(-q / 2.0 + (q <= 0.0 ? s : -s));
    const double B = (A != 0.0) ? -p / (3.0 * A) : 0.0;
    double t_real = A + B;
    double lam = newton_polish_cubic(p2, p1, p0, t_real - shift);
    // Deflate by the polished real root: λ² + (p2+λ₁)λ + (p1 + λ₁(p2+λ₁)).
    const double b = p2 + lam;
    const double c = p1 + lam * b;
    const double disc2 = b * b - 4.0 * c;
    if (disc2 >= 0.0) {
      // Round-off can push a marginally-complex pair real; handle both.
      const double sq = std::sqrt(disc2);
      const double big = (b >= 0.0) ? (-b - sq) / 2.0 : (-b + sq) / 2.0;
      const double small = (big != 0.0) ? c / big : -b / 2.0;
      roots = {lam, big, small};
    } else {
      const double im = std::sqrt(-disc2) / 2.0;
      roots = {std::complex<double>(lam, 0.0),
               std::complex<double>(-b / 2.0, -im),
               std::complex<double>(-b / 2.0, im)};
    }
  } else {
    // Three real roots: trigonometric method.
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);  // = cos(3θ)/... clamped for safety
    arg = std::clamp(arg, -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int kidx = 0; kidx < 3; ++kidx) {
      const double t = m * std::cos(theta - 2.0 * M_PI * kidx / 3.0);
      roots[kidx] = newton_polish_cubic(p2, p1, p0, t - shift);
    }
  }

  std::sort(roots.begin(), roots.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  return roots;
}

std::array<std::complex<double>, 3>
eig_3x3(const std::array<std::array<double, 3>, 3>& m) {
  const double tr = m[0][0] + m[1][1] + m[2][2];
  const double minors = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) +
                        (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                        (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
  const double det =
      m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return cubic_roots(-tr, minors, -det);
}

ScalarRoot polish_root(const std::function<double(double)>& f, double lo,
                       double hi) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0};
  if (fhi == 0.0) return {hi, 0.0};
  if (!(flo * fhi < 0.0)) {
    throw NumericalError("polish_root: no sign change on the given bracket");
  }
  // Bisection to near machine-width interval.
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;  // interval collapsed in doubles
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0};
    if (flo * fm < 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
    if (hi - lo < 1e-15 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))))
      break;
  }
  // Secant finish (bracketed endpoints make this safe).
  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  for (int it = 0; it < 3 && f1 != f0; ++it) {
    const double xn = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(xn) || xn < lo || xn > hi) break;
    x0 = x1;
    f0 = f1;
    x1 = xn;
    f1 = f(xn);
    if (f1 == 0.0) break;
  }
  const double best = (std::abs(f1) <= std::abs(f0)) ? x1 : x0;
  return {best, std::abs(f(best))};
}

std::vector<ScalarRoot> scan_roots(const std::function<double(double)>& f,
                                   double lo, double hi, int n) {
  if (!(hi > lo) || n < 2) {
    throw std::invalid_argument("scan_roots: need hi > lo and n >= 2");
  }
  std::vector<ScalarRoot> roots;
  const double dx = (hi - lo) / (n - 1);
  double xa = lo;
  double fa = f(xa);
  for (int i = 1; i < n; ++i) {
    const double xb = lo + i * dx;
    const double fb = f(xb);
    if (fa == 0.0) {
      if (roots.empty() || std::abs(roots.back().x - xa) > 0.5 * dx)
        roots.push_back({xa, 0.0});
    } else if (fa * fb < 0.0) {
      roots.push_back(polish_root(f, xa, xb));
    }
    xa = xb;
    fa = fb;
  }
  if (fa == 0.0 &&
      (roots.empty() || std::abs(roots.back().x - xa) > 0.5 * dx)) {
    roots.push_back({xa, 0.0});
  }
  std::sort(roots.begin(), roots.end(),
            [](const ScalarRoot& a, const ScalarRoot& b) { return a.x < b.x; });
  return roots;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need matching sizes >= 2");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw NumericalError("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

}  // namespace enso
