#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace enso {

/// Thrown when an iterative numerical procedure fails (bracket not found,
/// polish stalls above the requested residual, integrator abort surfaced to a
/// caller that cannot continue, ...). Distinct from std::invalid_argument,
/// which is reserved for malformed inputs.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// tanh with saturation clamp: for |u| > 40 returns ±1 exactly. The true value
/// differs from ±1 by less than 1e-34 there, far below double round-off, and
/// clamping keeps downstream sech² arithmetic free of spurious denormals.
[[nodiscard]] double tanh_safe(double u) noexcept;

/// sech²(u) = 1 - tanh²(u), sharing the clamp of tanh_safe (0 for |u| > 40).
[[nodiscard]] double sech2_safe(double u) noexcept;

// ---------------------------------------------------------------------------
// Small dense eigenproblems
// ---------------------------------------------------------------------------

/// Eigenvalues of a real 2x2 matrix.
struct Eig2 {
  std::complex<double> lambda1;  ///< smaller real part first (real case: ascending)
  std::complex<double> lambda2;
  bool real = true;        ///< discriminant >= +tol: two real eigenvalues
  bool degenerate = false; ///< |discriminant| < tol: repeated-root regime
};

/// Quadratic-formula eigensolver with a cancellation-safe discriminant
/// ((a11-a22)² + 4·a12·a21) and the det/λ trick for the small root.
/// `disc_tol` is the discriminant magnitude below which the pair is flagged
/// degenerate (repeated eigenvalue tr/2 is then reported for both).
[[nodiscard]] Eig2 eig_2x2(double a11, double a12, double a21, double a22,
                           double disc_tol = 1e-10);

/// Real eigenvector of a real 2x2 matrix for real eigenvalue lambda,
/// normalized to unit length. Picks the numerically larger of the two
/// candidate row constructions.
[[nodiscard]] std::array<double, 2> eigvec_2x2(double a11, double a12,
                                               double a21, double a22,
                                               double lambda);

/// Roots of the monic cubic λ³ + p2·λ² + p1·λ + p0 with real coefficients.
/// Closed form (trigonometric / Cardano) followed by one Newton polish per
/// real root; the complex pair comes from stable deflation. Roots are ordered
/// by ascending real part (ties by imaginary part).
[[nodiscard]] std::array<std::complex<double>, 3> cubic_roots(double p2,
                                                              double p1,
                                                              double p0);

/// Eigenvalues of a real 3x3 matrix via its characteristic cubic.
[[nodiscard]] std::array<std::complex<double>, 3>
eig_3x3(const std::array<std::array<double, 3>, 3>& m);

// ---------------------------------------------------------------------------
// Scalar root finding
// ---------------------------------------------------------------------------

/// One polished root of a scalar function together with its residual |f(x)|.
struct ScalarRoot {
  double x = 0.0;
  double residual = 0.0;
};

/// Bisection on a sign-change bracket [lo, hi] down to a relative interval
/// width of ~1e-15, finished with a couple of secant steps. Requires
/// f(lo)·f(hi) <= 0; throws NumericalError otherwise.
[[nodiscard]] ScalarRoot polish_root(const std::function<double(double)>& f,
                                     double lo, double hi);

/// All roots of f on [lo, hi] found by an n-point uniform sign scan with
/// bisection/secant polish of every bracketed crossing. Roots are returned in
/// ascending order. Even-multiplicity touchpoints without a sign change are
/// invisible to the scan, which is acceptable for the transversal crossings
/// this toolkit solves for.
[[nodiscard]] std::vector<ScalarRoot>
scan_roots(const std::function<double(double)>& f, double lo, double hi,
           int n = 4001);

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

/// Least-squares straight line y = slope·x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

[[nodiscard]] LineFit fit_line(const std::vector<double>& x,
                               const std::vector<double>& y);

/// Central finite-difference Jacobian of a callable mapping
/// std::array<double,N> -> std::array<double,M>. Step per component:
/// 1e-6·(1+|x_j|), a good compromise for doubles with the smooth fields here.
template <std::size_t M, std::size_t N, class F>
[[nodiscard]] std::array<std::array<double, N>, M>
fd_jacobian(F&& f, const std::array<double, N>& x) {
  std::array<std::array<double, N>, M> jac{};
  for (std::size_t j = 0; j < N; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(x[j]));
    auto xp = x;
    auto xm = x;
    xp[j] += h;
    xm[j] -= h;
    const auto fp = f(xp);
    const auto fm = f(xm);
    for (std::size_t i = 0; i < M; ++i) {
      jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
    }
  }
  return jac;
}

}  // namespace enso
