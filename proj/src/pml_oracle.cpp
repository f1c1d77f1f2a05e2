#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppml/mathutil.hpp"
#include "ppml/pml.hpp"

namespace ppml {

namespace {

constexpr std::uint64_t kOracleCap = 8;

double factorial(std::uint64_t m) {
  double f = 1.0;
  for (std::uint64_t i = 2; i <= m; ++i) f *= static_cast<double>(i);
  return f;
}

void require_oracle_scale(std::uint64_t domain_size, std::uint64_t n, const char* who) {
  if (domain_size > kOracleCap || n > kOracleCap)
    throw std::runtime_error(std::string(who) +
                             ": exact oracle is capped at N <= 8 and n <= 8; "
                             "use the approximate solver instead");
}

// Sum over ways to give each frequency class a set of distinct symbols
// (disjoint across classes, drawn from `symbols`) of prod p^j.
double assignment_sum(const std::vector<double>& probs,
                      const std::vector<Symbol>& symbols,
                      const std::vector<std::uint64_t>& freqs,
                      const std::vector<std::uint64_t>& counts, std::size_t klass,
                      std::vector<bool>& used, std::size_t pick_from) {
  if (klass == freqs.size()) return 1.0;
  const std::uint64_t want = counts[klass];
  // Choose `want` unused symbols with indices >= pick_from for this class.
  double total = 0.0;
  // Recursive combination enumeration.
  struct Rec {
    const std::vector<double>& probs;
    const std::vector<Symbol>& symbols;
    const std::vector<std::uint64_t>& freqs;
    const std::vector<std::uint64_t>& counts;
    std::vector<bool>& used;
    std::size_t klass;
    double run(std::size_t start, std::uint64_t left, double acc) {
      if (left == 0) {
        double below = assignment_sum(probs, symbols, freqs, counts, klass + 1, used, 0);
        return acc * below;
      }
      double sum = 0.0;
      for (std::size_t i = start; i < symbols.size() && i + left <= symbols.size();
           ++i) {
        if (used[i]) continue;
        const double p = probs[symbols[i]];
        double term = std::pow(p, static_cast<double>(freqs[klass]));
        if (term == 0.0) continue;
        used[i] = true;
        sum += run(i + 1, left - 1, acc * term);
        used[i] = false;
      }
      return sum;
    }
  } rec{probs, symbols, freqs, counts, used, klass};
  total = rec.run(pick_from, want, 1.0);
  return total;
}

double profile_likelihood_over(const std::vector<double>& probs,
                               const std::vector<Symbol>& subset_symbols,
                               const std::map<std::uint64_t, std::uint64_t>& phi,
                               std::uint64_t n, double outside_mass) {
  std::vector<std::uint64_t> freqs, counts;
  std::uint64_t occupied = 0;
  for (const auto& [j, c] : phi) {
    if (c == 0) continue;
    if (j == 0) throw std::invalid_argument("profile contains a zero frequency");
    freqs.push_back(j);
    counts.push_back(c);
    occupied += j * c;
  }
  if (occupied > n) return 0.0;
  const std::uint64_t rem = n - occupied;
  if (rem > 0 && outside_mass <= 0.0) return 0.0;

  double prefactor = factorial(n) / factorial(rem);
  for (std::size_t t = 0; t < freqs.size(); ++t)
    prefactor /= std::pow(factorial(freqs[t]), static_cast<double>(counts[t]));
  const double tail = rem == 0 ? 1.0 : std::pow(outside_mass, static_cast<double>(rem));

  std::vector<bool> used(subset_symbols.size(), false);
  const double assignments =
      assignment_sum(probs, subset_symbols, freqs, counts, 0, used, 0);
  return prefactor * tail * assignments;
}

}  // namespace

double sequence_probability(const DiscreteDistribution& dist, const SampleSequence& seq) {
  if (!dist.assignment)
    throw std::invalid_argument("sequence_probability: assignment required");
  double p = 1.0;
  for (Symbol x : seq.symbols) p *= dist.prob_of(x);
  return p;
}

double profile_probability_exact(const DiscreteDistribution& dist, const Profile& phi) {
  require_oracle_scale(dist.domain_size, phi.length, "profile_probability_exact");
  const std::vector<double> probs = dist.to_dense();
  std::vector<Symbol> everyone(dist.domain_size);
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = static_cast<Symbol>(i);
  // Plain profiles pin every domain symbol, so there is no outside mass and
  // any unoccupied sample positions are impossible.
  return profile_likelihood_over(probs, everyone, phi.phi, phi.length, 0.0);
}

double pseudo_profile_probability_exact(const DiscreteDistribution& dist,
                                        const PseudoProfile& phi_s) {
  require_oracle_scale(dist.domain_size, phi_s.length, "pseudo_profile_probability_exact");
  const std::vector<double> probs = dist.to_dense();
  double inside = 0.0;
  for (Symbol x : phi_s.subset) inside += probs[x];
  const double outside = std::max(0.0, 1.0 - inside);
  const bool full_domain = phi_s.subset.size() == dist.domain_size;
  return profile_likelihood_over(probs, phi_s.subset, phi_s.phi_s, phi_s.length,
                                 full_domain ? 0.0 : outside);
}

std::vector<Profile> all_profiles(std::uint64_t n, std::uint64_t max_parts) {
  std::vector<Profile> out;
  std::vector<std::uint64_t> parts;
  // Partitions of n in non-increasing part order.
  struct Rec {
    std::uint64_t n, max_parts;
    std::vector<Profile>& out;
    std::vector<std::uint64_t>& parts;
    void run(std::uint64_t left, std::uint64_t max_part) {
      if (left == 0) {
        Profile p;
        p.length = n;
        for (std::uint64_t v : parts) ++p.phi[v];
        out.push_back(std::move(p));
        return;
      }
      if (parts.size() == max_parts) return;
      for (std::uint64_t v = std::min(left, max_part); v >= 1; --v) {
        parts.push_back(v);
        run(left - v, v);
        parts.pop_back();
      }
    }
  } rec{n, max_parts, out, parts};
  rec.run(n, n);
  return out;
}

std::uint64_t PseudoView::distinct() const {
  std::uint64_t d = 0;
  for (std::uint64_t k : counts) d += k;
  return d;
}

std::uint64_t PseudoView::occupied() const {
  std::uint64_t s = 0;
  for (std::size_t t = 0; t < freqs.size(); ++t) s += freqs[t] * counts[t];
  return s;
}

std::uint64_t PseudoView::remainder() const { return n - occupied(); }

PseudoView make_view(const Profile& phi, std::uint64_t domain_size) {
  PseudoView v;
  v.n = phi.length;
  v.domain_size = domain_size;
  v.s_size = domain_size;
  for (const auto& [j, c] : phi.phi) {
    if (c == 0) continue;
    v.freqs.push_back(j);
    v.counts.push_back(c);
  }
  if (v.occupied() != v.n)
    throw std::invalid_argument("make_view: profile mass does not match its length");
  if (v.distinct() > domain_size)
    throw std::invalid_argument("make_view: more distinct elements than the domain");
  return v;
}

PseudoView make_view(const PseudoProfile& phi_s, std::uint64_t domain_size) {
  PseudoView v;
  v.n = phi_s.length;
  v.domain_size = domain_size;
  v.s_size = phi_s.subset.size();
  for (const auto& [j, c] : phi_s.phi_s) {
    if (c == 0) continue;
    v.freqs.push_back(j);
    v.counts.push_back(c);
  }
  if (v.occupied() > v.n)
    throw std::invalid_argument("make_view: pseudo-profile mass exceeds its length");
  if (v.distinct() > v.s_size)
    throw std::invalid_argument("make_view: more occupied elements than |S|");
  return v;
}

}  // namespace ppml
