#include "ppml/poly.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace ppml {

double neg_x_log_x(double x) { return x > 0.0 ? -x * std::log(x) : 0.0; }

RealFn abs_x_minus(double c) {
  return [c](double x) { return std::fabs(x - c); };
}

double PolyApprox::eval(double x) const {
  double acc = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

namespace {

// Gaussian elimination with partial pivoting; A is row-major n x n.
bool solve_linear(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (std::fabs(a[piv * n + col]) < 1e-300) return false;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
      std::swap(b[col], b[piv]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
    b[r] = s / a[r * n + r];
  }
  return true;
}

double cheb_eval(const std::vector<double>& c, double t) {
  // Clenshaw recurrence.
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[i];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}

struct Scaler {
  double mid, halfw;
  double to_x(double t) const { return mid + halfw * t; }
  double to_t(double x) const { return (x - mid) / halfw; }
};

double golden_max_abs(const std::function<double(double)>& err, double a, double b,
                      double& arg_out) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = std::fabs(err(x1));
  double f2 = std::fabs(err(x2));
  for (int it = 0; it < 60 && (b - a) > 1e-15; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = std::fabs(err(x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = std::fabs(err(x1));
    }
  }
  arg_out = (a + b) / 2;
  return std::fabs(err(arg_out));
}

// Converts Chebyshev coefficients on t in [-1,1] to monomial coefficients in
// the original variable x = mid + halfw * t.
std::vector<double> cheb_to_monomial(const std::vector<double>& c, const Scaler& sc) {
  const int n = static_cast<int>(c.size());
  // Monomial coefficients in t.
  std::vector<double> mono_t(n, 0.0);
  std::vector<double> tkm1{1.0}, tk{0.0, 1.0};  // T_0, T_1
  for (int k = 0; k < n; ++k) {
    const std::vector<double>& tcur = (k == 0) ? tkm1 : tk;
    for (std::size_t i = 0; i < tcur.size(); ++i) mono_t[i] += c[k] * tcur[i];
    if (k >= 1 && k + 1 < n) {
      std::vector<double> tnext(k + 2, 0.0);
      for (std::size_t i = 0; i < tk.size(); ++i) tnext[i + 1] += 2.0 * tk[i];
      for (std::size_t i = 0; i < tkm1.size(); ++i) tnext[i] -= tkm1[i];
      tkm1 = tk;
      tk = std::move(tnext);
    }
  }
  // Substitute t = (x - mid)/halfw = u + v x.
  const double u = -sc.mid / sc.halfw;
  const double v = 1.0 / sc.halfw;
  std::vector<double> mono_x(n, 0.0);
  std::vector<double> tpow{1.0};  // (u + v x)^j
  for (int j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < tpow.size(); ++i) mono_x[i] += mono_t[j] * tpow[i];
    if (j + 1 < n) {
      std::vector<double> next(tpow.size() + 1, 0.0);
      for (std::size_t i = 0; i < tpow.size(); ++i) {
        next[i] += tpow[i] * u;
        next[i + 1] += tpow[i] * v;
      }
      tpow = std::move(next);
    }
  }
  return mono_x;
}

PolyApprox chebyshev_fallback(const RealFn& g, int degree, double lo, double hi,
                              const Scaler& sc, const std::vector<double>& scan_t) {
  const int m = degree + 1;
  std::vector<double> fk(m);
  const double pi = std::acos(-1.0);
  std::vector<double> nodes(m);
  for (int k = 0; k < m; ++k) {
    nodes[k] = std::cos(pi * (2 * k + 1) / (2.0 * m));
    fk[k] = g(sc.to_x(nodes[k]));
  }
  std::vector<double> c(m, 0.0);
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += fk[k] * std::cos(pi * j * (2 * k + 1) / (2.0 * m));
    c[j] = s * 2.0 / m;
  }
  c[0] /= 2.0;

  PolyApprox out;
  out.degree = degree;
  out.lo = lo;
  out.hi = hi;
  out.near_best_only = true;
  out.coeffs = cheb_to_monomial(c, sc);
  double sup = 0.0;
  for (double t : scan_t) {
    const double e = std::fabs(g(sc.to_x(t)) - cheb_eval(c, t));
    sup = std::max(sup, e);
  }
  out.sup_error = sup;
  return out;
}

}  // namespace

PolyApprox best_uniform_approx(const RealFn& g, int degree, double lo, double hi,
                               double rel_tol, int max_iters) {
  if (degree < 0) throw std::invalid_argument("best_uniform_approx: negative degree");
  if (!(hi > lo) || hi - lo < 1e-15)
    throw std::invalid_argument("best_uniform_approx: degenerate interval");

  const Scaler sc{(lo + hi) / 2, (hi - lo) / 2};
  const int nref = degree + 2;
  const double pi = std::acos(-1.0);

  // Chebyshev-distributed scan grid (dense near the endpoints).
  const int m = std::max(4000, 1200 * nref);
  std::vector<double> scan_t(m + 1);
  for (int i = 0; i <= m; ++i) scan_t[i] = -std::cos(pi * i / m);

  auto f = [&](double t) { return g(sc.to_x(t)); };

  double fscale = 0.0;
  for (int i = 0; i <= m; i += 16) fscale = std::max(fscale, std::fabs(f(scan_t[i])));
  const double tiny = 1e-14 * std::max(1.0, fscale);

  // Initial reference: extrema of T_{degree+1}.
  std::vector<double> ref(nref);
  for (int k = 0; k < nref; ++k) ref[k] = -std::cos(pi * k / (nref - 1));

  std::vector<double> cheb;  // current coefficients
  double levelled = 0.0;
  bool converged = false;
  double sup = 0.0;

  for (int iter = 0; iter < max_iters; ++iter) {
    // Solve for coefficients and the levelled error E.
    std::vector<double> a(nref * nref), rhs(nref);
    for (int r = 0; r < nref; ++r) {
      double tprev = 1.0, tcur = ref[r];
      for (int cidx = 0; cidx <= degree; ++cidx) {
        double val;
        if (cidx == 0) {
          val = 1.0;
        } else if (cidx == 1) {
          val = tcur;
        } else {
          val = 2.0 * ref[r] * tcur - tprev;
          tprev = tcur;
          tcur = val;
        }
        a[r * nref + cidx] = val;
      }
      a[r * nref + degree + 1] = (r % 2 == 0) ? 1.0 : -1.0;
      rhs[r] = f(ref[r]);
    }
    if (!solve_linear(a, rhs, nref))
      return chebyshev_fallback(g, degree, lo, hi, sc, scan_t);
    cheb.assign(rhs.begin(), rhs.begin() + degree + 1);
    levelled = std::fabs(rhs[degree + 1]);

    auto err = [&](double t) { return f(t) - cheb_eval(cheb, t); };

    // Locate the extrema of the error on the scan grid, refine each one.
    std::vector<double> evals(m + 1);
    for (int i = 0; i <= m; ++i) evals[i] = err(scan_t[i]);
    struct Ext {
      double t, e;
    };
    std::vector<Ext> ext;
    for (int i = 0; i <= m; ++i) {
      const double ae = std::fabs(evals[i]);
      const bool left_ok = (i == 0) || ae >= std::fabs(evals[i - 1]);
      const bool right_ok = (i == m) || ae >= std::fabs(evals[i + 1]);
      if (!(left_ok && right_ok)) continue;
      const double a_lo = scan_t[std::max(0, i - 1)];
      const double a_hi = scan_t[std::min(m, i + 1)];
      double targ = scan_t[i];
      double best = ae;
      if (a_hi > a_lo) {
        double cand_arg;
        const double cand = golden_max_abs(err, a_lo, a_hi, cand_arg);
        if (cand > best) {
          best = cand;
          targ = cand_arg;
        }
      }
      ext.push_back({targ, err(targ)});
    }
    // Compress to a sign-alternating sequence, keeping the largest of each run.
    std::vector<Ext> alt;
    for (const Ext& e : ext) {
      if (std::fabs(e.e) < tiny) continue;
      if (!alt.empty() && ((alt.back().e > 0) == (e.e > 0))) {
        if (std::fabs(e.e) > std::fabs(alt.back().e)) alt.back() = e;
      } else {
        alt.push_back(e);
      }
    }

    sup = 0.0;
    for (const Ext& e : alt) sup = std::max(sup, std::fabs(e.e));
    for (int i = 0; i <= m; ++i) sup = std::max(sup, std::fabs(evals[i]));

    if (sup <= tiny) {
      // g is (numerically) a polynomial of degree <= L.
      converged = true;
      break;
    }
    if (static_cast<int>(alt.size()) < nref)
      return chebyshev_fallback(g, degree, lo, hi, sc, scan_t);

    // Trim to exactly nref alternating points.
    while (static_cast<int>(alt.size()) > nref) {
      if (static_cast<int>(alt.size()) == nref + 1) {
        // Drop the weaker endpoint.
        if (std::fabs(alt.front().e) <= std::fabs(alt.back().e))
          alt.erase(alt.begin());
        else
          alt.pop_back();
      } else {
        std::size_t imin = 0;
        for (std::size_t i = 1; i < alt.size(); ++i)
          if (std::fabs(alt[i].e) < std::fabs(alt[imin].e)) imin = i;
        if (imin == 0) {
          alt.erase(alt.begin());
        } else if (imin + 1 == alt.size()) {
          alt.pop_back();
        } else {
          // Removing an interior point leaves two same-signed neighbors;
          // keep the stronger of those.
          const std::size_t weaker =
              std::fabs(alt[imin - 1].e) < std::fabs(alt[imin + 1].e) ? imin - 1 : imin + 1;
          const std::size_t hi_idx = std::max(imin, weaker);
          const std::size_t lo_idx = std::min(imin, weaker);
          alt.erase(alt.begin() + hi_idx);
          alt.erase(alt.begin() + lo_idx);
        }
      }
    }

    for (int k = 0; k < nref; ++k) ref[k] = alt[k].t;

    if (sup - levelled <= rel_tol * sup + 1e-15 * std::max(1.0, fscale)) {
      converged = true;
      break;
    }
  }

  if (!converged && sup - levelled > 1e-3 * std::max(sup, tiny))
    return chebyshev_fallback(g, degree, lo, hi, sc, scan_t);

  PolyApprox out;
  out.degree = degree;
  out.lo = lo;
  out.hi = hi;
  out.coeffs = cheb_to_monomial(cheb, sc);
  out.sup_error = sup;
  // A result that stalled short of the exchange tolerance is still close to
  // best, but may not carry a clean equioscillation certificate.
  out.near_best_only = !converged;
  return out;
}

double falling_factorial_estimate(const PolyApprox& pa, std::uint64_t n_y,
                                  std::uint64_t n, bool raw_monomials,
                                  bool include_constant) {
  if (n < 1) throw std::invalid_argument("falling_factorial_estimate: n must be >= 1");
  if (n_y > n) throw std::invalid_argument("falling_factorial_estimate: n_y > n");
  double acc = include_constant && !pa.coeffs.empty() ? pa.coeffs[0] : 0.0;
  const double ratio = static_cast<double>(n_y) / static_cast<double>(n);
  for (std::size_t i = 1; i < pa.coeffs.size(); ++i) {
    if (pa.coeffs[i] == 0.0) continue;
    double term;
    if (raw_monomials) {
      term = std::pow(ratio, static_cast<double>(i));
    } else if (n_y < i || i > n) {
      term = 0.0;  // falling power of the count vanishes
    } else {
      term = 1.0;
      for (std::uint64_t r = 0; r < i; ++r)
        term *= static_cast<double>(n_y - r) / static_cast<double>(n - r);
    }
    acc += pa.coeffs[i] * term;
  }
  return acc;
}

int poly_degree(const PolyConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("poly_degree: n must be > 1");
  const double l = 0.25 * cfg.alpha * std::log(static_cast<double>(cfg.n));
  return std::max(1, static_cast<int>(std::lround(l)));
}

namespace {

std::mutex g_cache_mutex;
// Keyed by (kind, degree, lo, hi, shift c); kind 0 = entropy, 1 = dtu.
std::map<std::tuple<int, int, double, double, double>, PolyApprox> g_cache;

PolyApprox cached_approx(int kind, const RealFn& g, int degree, double lo, double hi,
                         double c) {
  const auto key = std::make_tuple(kind, degree, lo, hi, c);
  {
    std::lock_guard<std::mutex> lk(g_cache_mutex);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  PolyApprox pa = best_uniform_approx(g, degree, lo, hi);
  std::lock_guard<std::mutex> lk(g_cache_mutex);
  g_cache.emplace(key, pa);
  return pa;
}

}  // namespace

PolyApprox entropy_poly_config(const PolyConfig& cfg) {
  if (cfg.n < 2 || cfg.N < 2)
    throw std::invalid_argument("entropy_poly_config: need n > 1 and N > 1");
  const int degree = poly_degree(cfg);
  const double hi_raw = cfg.c1 * std::log(static_cast<double>(cfg.N)) /
                        static_cast<double>(cfg.n);
  const bool clamped = hi_raw >= 1.0;
  const double hi = clamped ? 1.0 : hi_raw;
  PolyApprox pa = cached_approx(0, [](double x) { return neg_x_log_x(x); }, degree,
                                0.0, hi, 0.0);
  pa.interval_clamped = clamped;
  return pa;
}

int dtu_case(const PolyConfig& cfg) {
  if (cfg.n < 2 || cfg.N < 2) throw std::invalid_argument("dtu_case: need n, N >= 2");
  const double lhs = 1.0 / static_cast<double>(cfg.N);
  const double rhs = cfg.c2 * std::log(static_cast<double>(cfg.N)) /
                     static_cast<double>(cfg.n);
  return lhs < rhs ? 1 : 2;
}

PolyApprox dtu_poly_config(const PolyConfig& cfg, int case_id) {
  if (cfg.n < 2 || cfg.N < 2)
    throw std::invalid_argument("dtu_poly_config: need n, N >= 2");
  if (case_id != 1 && case_id != 2)
    throw std::invalid_argument("dtu_poly_config: case must be 1 or 2");
  const double c = 1.0 / static_cast<double>(cfg.N);
  const int degree = poly_degree(cfg);
  const double logN = std::log(static_cast<double>(cfg.N));
  double lo, hi;
  if (case_id == 1) {
    lo = 0.0;
    hi = std::min(1.0, 2.0 * cfg.c1 * logN / static_cast<double>(cfg.n));
  } else {
    const double r = std::sqrt(cfg.c1 * logN /
                               (static_cast<double>(cfg.N) * static_cast<double>(cfg.n)));
    lo = std::max(0.0, c - r);
    hi = std::min(1.0, c + r);
  }
  return cached_approx(1, abs_x_minus(c), degree, lo, hi, c);
}

double max_normalized_coeff(const PolyApprox& pa) {
  double best = 0.0;
  double scale = pa.hi;
  double pw = 1.0;
  for (std::size_t i = 1; i < pa.coeffs.size(); ++i) {
    pw *= scale;
    best = std::max(best, std::fabs(pa.coeffs[i]) * pw);
  }
  return best;
}

EquioscillationReport check_equioscillation(const PolyApprox& pa, const RealFn& g,
                                            int grid_points, double tol) {
  EquioscillationReport rep;
  const double pi = std::acos(-1.0);
  const double mid = (pa.lo + pa.hi) / 2, halfw = (pa.hi - pa.lo) / 2;
  std::vector<double> es(grid_points + 1);
  for (int i = 0; i <= grid_points; ++i) {
    const double x = mid - halfw * std::cos(pi * i / grid_points);
    es[i] = g(x) - pa.eval(x);
    rep.max_abs_error = std::max(rep.max_abs_error, std::fabs(es[i]));
  }
  const double bar = (1.0 - tol) * std::max(pa.sup_error, rep.max_abs_error);
  int last_sign = 0;
  for (int i = 0; i <= grid_points; ++i) {
    if (std::fabs(es[i]) < bar) continue;
    const int s = es[i] > 0 ? 1 : -1;
    if (s != last_sign) {
      ++rep.alternations;
      last_sign = s;
    }
  }
  return rep;
}

}  // namespace ppml
