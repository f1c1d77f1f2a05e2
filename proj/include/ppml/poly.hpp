#ifndef PPML_POLY_HPP_
#define PPML_POLY_HPP_

#include <cstdint>
#include <functional>
#include <vector>

namespace ppml {

using RealFn = std::function<double(double)>;

/// -x ln x, with the value 0 at x = 0.
double neg_x_log_x(double x);
/// |x - c|
RealFn abs_x_minus(double c);

/// Best (or near-best) uniform polynomial approximation on [lo, hi].
/// Coefficients are in the monomial basis of the original variable.
struct PolyApprox {
  int degree = 0;
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> coeffs;  // b_0 .. b_degree
  double sup_error = 0.0;
  bool near_best_only = false;   // Chebyshev-interpolation fallback was used
  bool interval_clamped = false; // config interval was truncated to [0, 1]

  double eval(double x) const;
};

/// Remez exchange with Chebyshev-node initialization. Falls back to plain
/// Chebyshev interpolation (flagged `near_best_only`) if the exchange fails
/// to settle within `max_iters`.
PolyApprox best_uniform_approx(const RealFn& g, int degree, double lo, double hi,
                               double rel_tol = 1e-9, int max_iters = 50);

/// Unbiased estimator of the polynomial evaluated at the unknown success
/// probability p, from a Binomial(n, p) count n_y. b_i multiplies the ratio
/// of falling powers n_y^(i) / n^(i); the constant b_0 passes through.
/// `raw_monomials` substitutes the plain powers (n_y/n)^i instead (biased;
/// kept for side-by-side comparison). `include_constant=false` drops b_0.
double falling_factorial_estimate(const PolyApprox& pa, std::uint64_t n_y,
                                  std::uint64_t n, bool raw_monomials = false,
                                  bool include_constant = true);

struct PolyConfig {
  double alpha = 0.5;
  double c1 = 70.0;  // entropy default; distance-to-uniformity uses 71
  double c2 = 35.0;
  std::uint64_t n = 0;
  std::uint64_t N = 0;
};

/// Degree L = max(1, round(0.25 * alpha * ln n)).
int poly_degree(const PolyConfig& cfg);

/// Approximation of -x ln x on [0, c1 ln N / n] (clamped to [0,1]).
/// Results are cached per (kind, degree, interval).
PolyApprox entropy_poly_config(const PolyConfig& cfg);

/// 1 when 1/N < c2 ln N / n (interval near 0), else 2 (interval centered
/// at 1/N).
int dtu_case(const PolyConfig& cfg);

/// Approximation of |x - 1/N| on the case-dependent interval:
/// case 1: [0, 2 c1 ln N / n]; case 2: [max(0, 1/N - r), 1/N + r] with
/// r = sqrt(c1 ln N / (N n)).
PolyApprox dtu_poly_config(const PolyConfig& cfg, int case_id);

/// max_{i>=1} |b_i * hi^i|: the coefficient magnitude after rescaling the
/// interval to [0, 1]. The entropy configuration keeps this below n^alpha.
double max_normalized_coeff(const PolyApprox& pa);

struct EquioscillationReport {
  int alternations = 0;      // alternating near-extremal touches found
  double max_abs_error = 0;  // dense-grid sup of |g - P|
};

/// Scans a dense grid for alternating points where the error reaches
/// (1 - tol) * sup_error.
EquioscillationReport check_equioscillation(const PolyApprox& pa, const RealFn& g,
                                            int grid_points = 8000, double tol = 1e-6);

}  // namespace ppml

#endif  // PPML_POLY_HPP_
