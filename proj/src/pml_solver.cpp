#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "ppml/mathutil.hpp"
#include "ppml/pml.hpp"

namespace ppml {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double logaddexp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double log1pexp(double z) {
  if (z > 35.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

// Levels under optimization: values p, multiplicities x (integral, kept as
// doubles), and the mass q outside S.
struct LevelState {
  std::vector<double> p;
  std::vector<double> x;
  double q = 0.0;
};

// ln n! - sum_t k_t ln(j_t!) - ln R!
double log_prefactor(const PseudoView& v) {
  double lp = log_factorial(v.n) - log_factorial(v.remainder());
  for (std::size_t t = 0; t < v.freqs.size(); ++t)
    lp -= static_cast<double>(v.counts[t]) * log_factorial(v.freqs[t]);
  return lp;
}

// ---------------------------------------------------------------------------
// Exact assignment sum: ln sum_a prod_v C(x_v; a_v.) prod p_v^{j_t a_vt}
// over couplings with column sums k_t. DP over levels with the vector of
// still-unassigned counts as state.
// ---------------------------------------------------------------------------

std::uint64_t dp_states(const PseudoView& v) {
  std::uint64_t s = 1;
  for (std::uint64_t k : v.counts) {
    if (s > (1ull << 40) / (k + 1)) return 1ull << 40;  // saturate
    s *= k + 1;
  }
  return s;
}

class ExactCoupling {
 public:
  ExactCoupling(const PseudoView& view, const LevelState& st)
      : view_(view), st_(st), d_(view.freqs.size()), nlev_(st.p.size()) {
    strides_.assign(d_, 1);
    for (std::size_t t = 1; t < d_; ++t)
      strides_[t] = strides_[t - 1] * (view_.counts[t - 1] + 1);
    states_ = 1;
    for (std::size_t t = 0; t < d_; ++t) states_ *= view_.counts[t] + 1;
    memo_.assign(nlev_ * states_, std::numeric_limits<double>::quiet_NaN());
    lp_.resize(nlev_);
    for (std::size_t v = 0; v < nlev_; ++v) lp_[v] = std::log(st_.p[v]);
  }

  double run() {
    std::vector<std::uint64_t> rem(view_.counts.begin(), view_.counts.end());
    return rec(0, rem);
  }

 private:
  std::uint64_t encode(const std::vector<std::uint64_t>& rem) const {
    std::uint64_t idx = 0;
    for (std::size_t t = 0; t < d_; ++t) idx += strides_[t] * rem[t];
    return idx;
  }

  double rec(std::size_t v, std::vector<std::uint64_t>& rem) {
    bool empty = true;
    for (std::uint64_t r : rem)
      if (r) {
        empty = false;
        break;
      }
    if (v == nlev_) return empty ? 0.0 : kNegInf;
    const std::uint64_t key = v * states_ + encode(rem);
    if (!std::isnan(memo_[key])) return memo_[key];

    const auto x_v = static_cast<std::uint64_t>(std::llround(st_.x[v]));
    double total = kNegInf;
    std::vector<std::uint64_t> a(d_, 0);
    // Enumerate compositions a_t <= rem_t with sum <= x_v.
    std::function<void(std::size_t, std::uint64_t, double)> walk =
        [&](std::size_t t, std::uint64_t used, double acc) {
          if (t == d_) {
            const double below = rec(v + 1, rem);
            if (below == kNegInf) return;
            double comb = log_factorial(x_v);
            comb -= log_factorial(x_v - used);
            for (std::size_t tt = 0; tt < d_; ++tt) comb -= log_factorial(a[tt]);
            total = logaddexp(total, acc + comb + below);
            return;
          }
          const std::uint64_t lim = std::min<std::uint64_t>(rem[t], x_v - used);
          const std::uint64_t orig = rem[t];
          for (std::uint64_t take = 0; take <= lim; ++take) {
            a[t] = take;
            rem[t] = orig - take;
            walk(t + 1, used + take,
                 acc + static_cast<double>(take * view_.freqs[t]) * lp_[v]);
          }
          rem[t] = orig;
          a[t] = 0;
        };
    walk(0, 0, 0.0);
    memo_[key] = total;
    return total;
  }

  const PseudoView& view_;
  const LevelState& st_;
  std::size_t d_, nlev_;
  std::uint64_t states_ = 1;
  std::vector<std::uint64_t> strides_;
  std::vector<double> memo_;
  std::vector<double> lp_;
};

// Exact ln P for a level state, or nullopt when the DP would be too large.
std::optional<double> exact_level_loglik(const PseudoView& view, const LevelState& st,
                                         std::uint64_t work_cap) {
  const std::uint64_t r = view.remainder();
  double tail = 0.0;
  if (r > 0) {
    if (st.q <= 0.0) return kNegInf;
    tail = static_cast<double>(r) * std::log(st.q);
  }

  // Single level: the coupling is forced.
  if (st.p.size() == 1) {
    const auto x0 = static_cast<std::uint64_t>(std::llround(st.x[0]));
    const std::uint64_t d = view.distinct();
    if (d > x0) return kNegInf;
    double val = log_prefactor(view) + tail + log_falling(x0, d);
    for (std::size_t t = 0; t < view.freqs.size(); ++t) {
      val -= log_factorial(view.counts[t]);
      // C(x; k_1..k_d) = x! / ((x-D)! prod k_t!) was folded in above; the
      // level exponent remains.
      val += static_cast<double>(view.freqs[t] * view.counts[t]) * std::log(st.p[0]);
    }
    return val;
  }

  const std::uint64_t states = dp_states(view);
  const std::uint64_t nlev = st.p.size();
  // Transition count is bounded by `states` per cell; the memo holds
  // nlev * states doubles.
  if (states >= (1ull << 20) ||
      states * states > work_cap / std::max<std::uint64_t>(1, nlev))
    return std::nullopt;

  ExactCoupling dp(view, st);
  const double sum = dp.run();
  if (sum == kNegInf) return kNegInf;
  return log_prefactor(view) + tail + sum;
}

// ---------------------------------------------------------------------------
// Relaxed coupling via iterative scaling in log space.
// ---------------------------------------------------------------------------

struct CouplingSolution {
  std::vector<double> log_u;  // per level
  std::vector<double> log_w;  // per frequency class
  double objective = 0.0;     // continuous-entropy form (monotone under ascent)
  double objective_lgamma = 0.0;  // same coupling scored with exact lgamma terms
  bool converged = true;
  int sweeps = 0;
};

CouplingSolution solve_coupling(const PseudoView& view, const LevelState& st,
                                double tol, int max_sweeps,
                                const std::vector<double>* warm_log_u) {
  const std::size_t nlev = st.p.size();
  const std::size_t d = view.freqs.size();
  CouplingSolution sol;
  sol.log_u.resize(nlev);
  sol.log_w.assign(d, 0.0);
  if (d == 0) {
    for (std::size_t v = 0; v < nlev; ++v) sol.log_u[v] = std::log(st.x[v]);
    sol.objective = 0.0;
    return sol;
  }
  std::vector<double> lp(nlev), lx(nlev);
  for (std::size_t v = 0; v < nlev; ++v) {
    lp[v] = std::log(st.p[v]);
    lx[v] = std::log(st.x[v]);
  }
  if (warm_log_u && warm_log_u->size() == nlev)
    sol.log_u = *warm_log_u;
  else
    for (std::size_t v = 0; v < nlev; ++v) sol.log_u[v] = lx[v] - std::log(2.0);

  std::vector<double> lk(d);
  for (std::size_t t = 0; t < d; ++t) lk[t] = std::log(static_cast<double>(view.counts[t]));

  // When the multiplicities exactly cover the observed elements there is no
  // unseen share and the row constraints become equalities (plain two-sided
  // scaling, which also avoids the slow drift of u toward zero).
  double total_x = 0.0, total_k = 0.0;
  for (double xv : st.x) total_x += xv;
  for (std::uint64_t kt : view.counts) total_k += static_cast<double>(kt);
  const bool tight = total_x - total_k < 1e-9 * std::max(1.0, total_x);

  int sweep = 0;
  bool settled = false;
  for (; sweep < max_sweeps && !settled; ++sweep) {
    // Column scalings (make the column sums exact for the current u).
    for (std::size_t t = 0; t < d; ++t) {
      double m = kNegInf;
      for (std::size_t v = 0; v < nlev; ++v)
        m = std::max(m, sol.log_u[v] + static_cast<double>(view.freqs[t]) * lp[v]);
      double s = 0.0;
      for (std::size_t v = 0; v < nlev; ++v)
        s += std::exp(sol.log_u[v] + static_cast<double>(view.freqs[t]) * lp[v] - m);
      sol.log_w[t] = lk[t] - m - std::log(s);
    }
    // Row scalings / unseen shares.
    for (std::size_t v = 0; v < nlev; ++v) {
      double m = kNegInf;
      for (std::size_t t = 0; t < d; ++t)
        m = std::max(m, sol.log_w[t] + static_cast<double>(view.freqs[t]) * lp[v]);
      double s = 0.0;
      for (std::size_t t = 0; t < d; ++t)
        s += std::exp(sol.log_w[t] + static_cast<double>(view.freqs[t]) * lp[v] - m);
      const double z = m + std::log(s);  // ln sum_t w p^j
      sol.log_u[v] = tight ? lx[v] - z : lx[v] - log1pexp(z);
    }
    // Converged when the u-update left the column sums (the coupling itself)
    // essentially intact; this also catches the slow drift of u toward a
    // boundary, where a has long stopped moving.
    double res = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
      double m = kNegInf;
      for (std::size_t v = 0; v < nlev; ++v)
        m = std::max(m, sol.log_u[v] + static_cast<double>(view.freqs[t]) * lp[v]);
      double s = 0.0;
      for (std::size_t v = 0; v < nlev; ++v)
        s += std::exp(sol.log_u[v] + static_cast<double>(view.freqs[t]) * lp[v] - m);
      const double colsum = std::exp(sol.log_w[t] + m) * s;
      res = std::max(res, std::fabs(colsum / static_cast<double>(view.counts[t]) - 1.0));
    }
    settled = res < tol;
  }
  sol.sweeps = sweep;
  sol.converged = settled;

  // One last column normalization so the coupling meets the column sums
  // exactly, then evaluate the objective.
  for (std::size_t t = 0; t < d; ++t) {
    double m = kNegInf;
    for (std::size_t v = 0; v < nlev; ++v)
      m = std::max(m, sol.log_u[v] + static_cast<double>(view.freqs[t]) * lp[v]);
    double s = 0.0;
    for (std::size_t v = 0; v < nlev; ++v)
      s += std::exp(sol.log_u[v] + static_cast<double>(view.freqs[t]) * lp[v] - m);
    sol.log_w[t] = lk[t] - m - std::log(s);
  }

  double obj = 0.0, obj_lg = 0.0;
  for (std::size_t v = 0; v < nlev; ++v) {
    double assigned = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
      const double la =
          sol.log_u[v] + sol.log_w[t] + static_cast<double>(view.freqs[t]) * lp[v];
      const double a = std::exp(la);
      if (a > 0.0) {
        const double jlp = a * static_cast<double>(view.freqs[t]) * lp[v];
        obj += -a * la + jlp;
        obj_lg += -std::lgamma(a + 1.0) + jlp;
        assigned += a;
      }
    }
    const double u = std::max(st.x[v] - assigned, 0.0);
    obj += xlogx(st.x[v]) - xlogx(std::max(u, 1e-300));
    obj_lg += std::lgamma(st.x[v] + 1.0) - std::lgamma(u + 1.0);
  }
  sol.objective = obj;
  sol.objective_lgamma = obj_lg;
  return sol;
}

double relaxed_level_loglik(const PseudoView& view, const LevelState& st, double tol,
                            int max_sweeps, bool lgamma_form = true,
                            bool* converged = nullptr) {
  const std::uint64_t r = view.remainder();
  double tail = 0.0;
  if (r > 0) {
    if (st.q <= 0.0) return kNegInf;
    tail = static_cast<double>(r) * std::log(st.q);
  }
  double total_x = 0.0;
  for (double xv : st.x) total_x += xv;
  if (total_x + 1e-9 < static_cast<double>(view.distinct())) return kNegInf;
  CouplingSolution cs = solve_coupling(view, st, tol, max_sweeps, nullptr);
  if (converged) *converged = cs.converged;
  return log_prefactor(view) + tail +
         (lgamma_form ? cs.objective_lgamma : cs.objective);
}

// ---------------------------------------------------------------------------
// Alternating ascent for a fixed support budget.
// ---------------------------------------------------------------------------

struct AscentOutcome {
  LevelState st;
  double objective = kNegInf;  // continuous-entropy surrogate at the final state
  double score = kNegInf;      // lgamma-scored surrogate used for ranking
  int rounds = 0;
  bool converged = false;
  bool coupling_warning = false;
  std::vector<double> trace;
};

double level_floor(const PseudoView& view) {
  const double nn = static_cast<double>(std::max<std::uint64_t>(view.n, 1)) *
                    static_cast<double>(std::max<std::uint64_t>(view.domain_size, 1));
  return std::max(1e-300, 1e-3 / nn);
}

// Projects values onto {p >= min_p, sum x p = target_mass}: exact KKT
// water-filling for the weighted-log objective.
void project_levels(std::vector<double>& p, const std::vector<double>& x,
                    const std::vector<double>& weight, double target_mass,
                    double min_p) {
  const std::size_t nlev = p.size();
  std::vector<bool> clamped(nlev, false);
  for (int pass = 0; pass < static_cast<int>(nlev) + 1; ++pass) {
    double clamped_mass = 0.0, free_weight = 0.0;
    for (std::size_t v = 0; v < nlev; ++v) {
      if (clamped[v])
        clamped_mass += x[v] * min_p;
      else
        free_weight += weight[v];
    }
    const double free_mass = target_mass - clamped_mass;
    bool changed = false;
    for (std::size_t v = 0; v < nlev; ++v) {
      if (clamped[v]) {
        p[v] = min_p;
        continue;
      }
      p[v] = free_weight > 0.0 ? free_mass * (weight[v] / free_weight) / x[v] : min_p;
      if (p[v] < min_p) {
        clamped[v] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  for (std::size_t v = 0; v < nlev; ++v) p[v] = std::max(p[v], min_p);
}

AscentOutcome ascend(const PseudoView& view, LevelState st, const SolverOptions& opts) {
  AscentOutcome out;
  const std::size_t nlev = st.p.size();
  const std::size_t d = view.freqs.size();
  const double floor_p = std::max(level_floor(view), opts.min_prob);
  const double target_mass = 1.0 - st.q;
  const double tail =
      view.remainder() > 0 ? static_cast<double>(view.remainder()) * std::log(st.q) : 0.0;
  const double prefactor = log_prefactor(view);

  CouplingSolution cs =
      solve_coupling(view, st, opts.coupling_tol, opts.coupling_max_sweeps, nullptr);
  if (!cs.converged) out.coupling_warning = true;
  double prev = prefactor + tail + cs.objective;
  out.score = prefactor + tail + cs.objective_lgamma;
  out.trace.push_back(prev);

  for (int round = 0; round < opts.max_rounds; ++round) {
    // Closed-form value update: p_v proportional to the coupled frequency
    // mass per element, projected onto the floor/min-probability box.
    std::vector<double> nmass(nlev, 0.0);
    for (std::size_t v = 0; v < nlev; ++v)
      for (std::size_t t = 0; t < d; ++t)
        nmass[v] += std::exp(cs.log_u[v] + cs.log_w[t] +
                             static_cast<double>(view.freqs[t]) * std::log(st.p[v])) *
                    static_cast<double>(view.freqs[t]);
    LevelState trial = st;
    project_levels(trial.p, trial.x, nmass, target_mass, floor_p);
    for (double& pv : trial.p) pv = std::min(pv, 1.0);

    CouplingSolution cs2 = solve_coupling(view, trial, opts.coupling_tol,
                                          opts.coupling_max_sweeps, &cs.log_u);
    if (!cs2.converged) out.coupling_warning = true;
    const double value = prefactor + tail + cs2.objective;

    if (value < prev - 1e-12) {
      // Safeguard: coordinate step failed to improve; keep the last state.
      out.converged = true;
      break;
    }
    st = trial;
    cs = std::move(cs2);
    out.trace.push_back(value);
    out.rounds = round + 1;
    out.score = prefactor + tail + cs.objective_lgamma;
    if (value - prev < opts.round_tol) {
      out.converged = true;
      prev = value;
      break;
    }
    prev = value;
  }
  out.objective = prev;
  out.st = std::move(st);
  return out;
}

// ---------------------------------------------------------------------------
// Candidate construction
// ---------------------------------------------------------------------------

std::uint64_t snap_index(double p, double ratio, std::uint64_t imax) {
  const double idx = -std::log(p) / std::log(ratio);
  const auto i = static_cast<std::int64_t>(std::llround(idx));
  return static_cast<std::uint64_t>(std::clamp<std::int64_t>(
      i, 0, static_cast<std::int64_t>(imax)));
}

LevelState initial_state(const PseudoView& view, std::uint64_t budget,
                         const SolverOptions& opts, std::uint64_t grid_levels) {
  const std::uint64_t distinct = view.distinct();
  const double n = static_cast<double>(view.n);
  LevelState st;
  st.q = view.n > 0 ? static_cast<double>(view.remainder()) / n : 0.0;

  std::vector<std::pair<double, double>> raw;  // (value, multiplicity)
  for (std::size_t t = 0; t < view.freqs.size(); ++t)
    raw.emplace_back(static_cast<double>(view.freqs[t]) / n,
                     static_cast<double>(view.counts[t]));
  if (budget > distinct) {
    const double extra = static_cast<double>(budget - distinct);
    std::uint64_t phi1 = 0;
    if (!view.freqs.empty() && view.freqs.front() == 1) phi1 = view.counts.front();
    const double missing = (static_cast<double>(phi1) + 1.0) / n;
    raw.emplace_back(std::max(level_floor(view), missing / extra), extra);
  }

  // Snap to the geometric grid and merge colliding levels.
  const double ratio = opts.grid_ratio;
  std::map<std::uint64_t, double> by_index;
  for (const auto& [val, mult] : raw)
    by_index[snap_index(std::min(val, 1.0), ratio, grid_levels - 1)] += mult;
  for (const auto& [idx, mult] : by_index) {
    st.p.push_back(std::pow(ratio, -static_cast<double>(idx)));
    st.x.push_back(mult);
  }
  // Rescale onto the mass constraint.
  double cur = 0.0;
  for (std::size_t v = 0; v < st.p.size(); ++v) cur += st.p[v] * st.x[v];
  const double target = 1.0 - st.q;
  if (cur > 0.0 && target > 0.0)
    for (double& pv : st.p) pv *= target / cur;
  if (opts.min_prob > 0.0) {
    std::vector<double> weight(st.p.size());
    for (std::size_t v = 0; v < st.p.size(); ++v) weight[v] = st.p[v] * st.x[v];
    project_levels(st.p, st.x, weight, target, opts.min_prob);
  }
  for (double& pv : st.p) pv = std::min(pv, 1.0);
  return st;
}

std::vector<std::uint64_t> support_budgets(const PseudoView& view,
                                           const SolverOptions& opts,
                                           std::uint64_t cap) {
  const std::uint64_t distinct = view.distinct();
  std::vector<std::uint64_t> budgets;
  if (cap <= distinct) return {distinct};
  const std::uint64_t extra = cap - distinct;
  if (opts.min_prob > 0.0 && extra <= 256) {
    for (std::uint64_t m = distinct; m <= cap; ++m) budgets.push_back(m);
    return budgets;
  }
  budgets.push_back(distinct);
  for (double f : {0.02, 0.05, 0.1, 0.2, 0.35, 0.55, 0.75, 1.0}) {
    const auto add = static_cast<std::uint64_t>(
        std::max<double>(1.0, std::llround(f * static_cast<double>(extra))));
    budgets.push_back(distinct + std::min(add, extra));
  }
  // Chao-style suggestion from the low-frequency structure.
  std::uint64_t phi1 = 0, phi2 = 0;
  for (std::size_t t = 0; t < view.freqs.size(); ++t) {
    if (view.freqs[t] == 1) phi1 = view.counts[t];
    if (view.freqs[t] == 2) phi2 = view.counts[t];
  }
  if (phi1 > 0) {
    const double boost = phi2 > 0 ? static_cast<double>(phi1) * phi1 / (2.0 * phi2)
                                  : static_cast<double>(phi1) * (phi1 - 1) / 2.0;
    const auto add = static_cast<std::uint64_t>(std::llround(boost));
    budgets.push_back(distinct + std::min(add, extra));
  }
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  return budgets;
}

// ---------------------------------------------------------------------------
// Tiny exhaustive path
// ---------------------------------------------------------------------------

std::uint64_t tiny_grid_levels(std::uint64_t n, const SolverOptions& opts) {
  const double span = static_cast<double>(std::max<std::uint64_t>(n, 1)) *
                      static_cast<double>(opts.domain_size);
  return static_cast<std::uint64_t>(
             std::ceil(std::log(span) / std::log(opts.tiny_grid_ratio))) +
         1;
}

}  // namespace

std::vector<std::vector<DiscreteDistribution::Level>> tiny_candidate_family(
    std::uint64_t n, const SolverOptions& opts, std::uint64_t min_support) {
  const std::uint64_t levels = tiny_grid_levels(n, opts);
  const double ratio = opts.tiny_grid_ratio;
  std::vector<std::vector<DiscreteDistribution::Level>> out;

  std::vector<std::uint64_t> idx;  // non-decreasing grid indices, idx[0] == 0
  std::function<void(std::uint64_t, std::uint64_t)> walk = [&](std::uint64_t next_min,
                                                               std::uint64_t left) {
    if (left == 0) {
      if (idx.size() < std::max<std::uint64_t>(min_support, 1)) return;
      double total = 0.0;
      for (std::uint64_t i : idx) total += std::pow(ratio, -static_cast<double>(i));
      std::vector<DiscreteDistribution::Level> lv;
      std::uint64_t run = 1;
      for (std::size_t j = 1; j <= idx.size(); ++j) {
        if (j < idx.size() && idx[j] == idx[j - 1]) {
          ++run;
          continue;
        }
        lv.push_back({std::pow(ratio, -static_cast<double>(idx[j - 1])) / total, run});
        run = 1;
      }
      out.push_back(std::move(lv));
      return;
    }
    for (std::uint64_t i = next_min; i < levels; ++i) {
      idx.push_back(i);
      walk(i, left - 1);
      idx.pop_back();
    }
  };

  for (std::uint64_t size = std::max<std::uint64_t>(min_support, 1);
       size <= opts.domain_size; ++size) {
    idx.clear();
    idx.push_back(0);  // canonical representative: smallest index present is 0
    walk(0, size - 1);
  }
  return out;
}

double surrogate_log_likelihood(const DiscreteDistribution& dist, const Profile& phi,
                                bool force_relaxed) {
  const PseudoView view = make_view(phi, dist.domain_size);
  LevelState st;
  for (const auto& lvl : dist.levels) {
    st.p.push_back(lvl.p);
    st.x.push_back(static_cast<double>(lvl.count));
  }
  st.q = 0.0;
  if (!force_relaxed) {
    if (auto exact = exact_level_loglik(view, st, 2000000)) return *exact;
  }
  return relaxed_level_loglik(view, st, 1e-8, 1000);
}

double surrogate_log_likelihood(const DiscreteDistribution& dist,
                                const PseudoProfile& phi_s, bool force_relaxed) {
  const PseudoView view = make_view(phi_s, dist.domain_size);
  LevelState st;
  double mass = 0.0;
  for (const auto& lvl : dist.levels) {
    st.p.push_back(lvl.p);
    st.x.push_back(static_cast<double>(lvl.count));
    mass += lvl.p * static_cast<double>(lvl.count);
  }
  st.q = std::max(0.0, 1.0 - mass);
  if (st.x.size() > 0) {
    double sup = 0.0;
    for (double xv : st.x) sup += xv;
    if (sup > static_cast<double>(view.s_size))
      throw std::invalid_argument(
          "surrogate_log_likelihood: level support exceeds |S|");
  }
  if (!force_relaxed) {
    if (auto exact = exact_level_loglik(view, st, 2000000)) return *exact;
  }
  return relaxed_level_loglik(view, st, 1e-8, 1000);
}

namespace {

PmlResult finish_result(const PseudoView& view, const LevelState& st, double loglik,
                        SolverStats stats) {
  PmlResult res;
  res.log_likelihood = loglik;
  res.stats = std::move(stats);
  res.outside_mass = st.q;

  std::vector<std::pair<double, std::uint64_t>> lv;
  for (std::size_t v = 0; v < st.p.size(); ++v) {
    const auto cnt = static_cast<std::uint64_t>(std::llround(st.x[v]));
    if (cnt == 0) continue;
    lv.emplace_back(st.p[v], cnt);
  }
  std::sort(lv.begin(), lv.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  // Merge numerically identical values.
  std::vector<DiscreteDistribution::Level> merged;
  for (const auto& [p, c] : lv) {
    if (!merged.empty() &&
        std::fabs(merged.back().p - p) <= 1e-12 * std::max(merged.back().p, p))
      merged.back().count += c;
    else
      merged.push_back({p, c});
  }
  res.s_level_count = merged.size();
  res.distribution.levels = std::move(merged);
  res.distribution.domain_size = view.domain_size;

  if (st.q > 0.0) {
    const std::uint64_t outside_count = view.domain_size - view.s_size;
    if (outside_count > 0)
      res.distribution.levels.push_back(
          {st.q / static_cast<double>(outside_count), outside_count});
  }
  return res;
}

PmlResult solve_view(const PseudoView& view, const SolverOptions& opts) {
  if (opts.domain_size == 0)
    throw std::invalid_argument("SolverOptions.domain_size must be set");
  if (opts.grid_ratio <= 1.0 + 1e-12 || opts.tiny_grid_ratio <= 1.0 + 1e-12)
    throw std::invalid_argument("SolverOptions: grid ratios must exceed 1");
  if (view.distinct() > view.s_size)
    throw std::invalid_argument("approximate_pml: profile has more distinct "
                                "elements than |S|");

  // Degenerate profiles.
  if (view.freqs.empty()) {
    SolverStats stats;
    stats.exact_scored = true;
    stats.objective_trace = {0.0};
    if (view.n == 0 || view.remainder() == 0) {
      // Conventional default: uniform over the domain.
      LevelState st;
      st.p = {1.0 / static_cast<double>(view.domain_size)};
      st.x = {static_cast<double>(view.domain_size)};
      st.q = 0.0;
      PseudoView full = view;
      full.s_size = view.domain_size;
      return finish_result(full, st, 0.0, stats);
    }
    // Nothing of S was ever seen: all mass sits outside.
    LevelState st;
    st.q = 1.0;
    return finish_result(view, st, 0.0, stats);
  }

  const std::uint64_t distinct = view.distinct();

  // Tiny instances: exhaustive search over the grid family, scored exactly.
  const bool plain = view.s_size == view.domain_size && view.remainder() == 0;
  if (plain && opts.min_prob == 0.0 && view.n <= opts.tiny_exhaustive_limit &&
      view.domain_size <= 8) {
    auto family = tiny_candidate_family(view.n, opts, distinct);
    double best = kNegInf;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      LevelState st;
      for (const auto& lvl : family[i]) {
        st.p.push_back(lvl.p);
        st.x.push_back(static_cast<double>(lvl.count));
      }
      const auto val = exact_level_loglik(view, st, 1ull << 32);
      if (val && *val > best) {
        best = *val;
        best_idx = i;
      }
    }
    SolverStats stats;
    stats.exact_scored = true;
    stats.candidates_scored = family.size();
    stats.grid_size = tiny_grid_levels(view.n, opts);
    stats.objective_trace = {best};
    LevelState st;
    for (const auto& lvl : family[best_idx]) {
      st.p.push_back(lvl.p);
      st.x.push_back(static_cast<double>(lvl.count));
    }
    PmlResult res = finish_result(view, st, best, stats);
    res.beta_certificate = 1.0;
    return res;
  }

  // Iterative path: alternating ascent per support budget.
  std::uint64_t cap = view.s_size;
  if (opts.min_prob > 0.0)
    cap = std::min(cap, static_cast<std::uint64_t>(std::floor(
                            (1.0 + 1e-12) / opts.min_prob)));
  const double lg = std::log(static_cast<double>(std::max<std::uint64_t>(view.n, 2)) *
                             static_cast<double>(view.domain_size)) /
                    std::log(opts.grid_ratio);
  const auto grid_levels = static_cast<std::uint64_t>(std::ceil(lg)) + 1;

  const std::vector<std::uint64_t> budgets = support_budgets(view, opts, cap);

  // Rank all budgets with one scorer: the exact DP when every candidate fits
  // the work cap, otherwise the relaxed surrogate for every candidate. Dense
  // constrained-support scans stop once the score has fallen for three
  // consecutive budgets (the likelihood drops geometrically past the peak).
  const bool dense_scan = opts.min_prob > 0.0 && budgets.size() > 8;
  std::vector<AscentOutcome> outcomes;
  outcomes.reserve(budgets.size());
  double scan_best = kNegInf;
  int scan_drops = 0;
  for (std::uint64_t m : budgets) {
    outcomes.push_back(ascend(view, initial_state(view, m, opts, grid_levels), opts));
    if (!dense_scan) continue;
    const double sc = outcomes.back().score;
    if (sc < scan_best) {
      if (++scan_drops >= 3) break;
    } else {
      scan_best = sc;
      scan_drops = 0;
    }
  }

  bool exact_ok = true;
  std::vector<double> exact_scores(outcomes.size(), kNegInf);
  for (std::size_t i = 0; i < outcomes.size() && exact_ok; ++i) {
    const auto val = exact_level_loglik(view, outcomes[i].st, opts.exact_work_cap);
    if (!val)
      exact_ok = false;
    else
      exact_scores[i] = *val;
  }

  std::size_t best_idx = 0;
  double best = kNegInf;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const double score = exact_ok ? exact_scores[i] : outcomes[i].score;
    if (score > best) {
      best = score;
      best_idx = i;
    }
  }

  SolverStats stats;
  stats.rounds = outcomes[best_idx].rounds;
  stats.converged = outcomes[best_idx].converged;
  stats.coupling_warning = outcomes[best_idx].coupling_warning;
  stats.grid_size = grid_levels;
  stats.candidates_scored = outcomes.size();
  stats.exact_scored = exact_ok;
  stats.objective_trace = outcomes[best_idx].trace;
  return finish_result(view, outcomes[best_idx].st, best, stats);
}

}  // namespace

PmlResult approximate_pml(const Profile& phi, const SolverOptions& opts) {
  return solve_view(make_view(phi, opts.domain_size), opts);
}

PmlResult approximate_pml(const PseudoProfile& phi_s, const SolverOptions& opts) {
  return solve_view(make_view(phi_s, opts.domain_size), opts);
}

PmlResult constrained_pml_support(const Profile& phi, std::uint64_t k,
                                  const SolverOptions& opts) {
  const PseudoView view = make_view(phi, opts.domain_size);
  if (k < view.distinct())
    throw std::invalid_argument(
        "constrained_pml_support: k below the number of distinct observed "
        "elements; the constraint is infeasible");
  SolverOptions o = opts;
  o.min_prob = 1.0 / static_cast<double>(k);
  return solve_view(view, o);
}

}  // namespace ppml
