#ifndef PPML_PML_HPP_
#define PPML_PML_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "ppml/distribution.hpp"
#include "ppml/types.hpp"

namespace ppml {

// ---------------------------------------------------------------------------
// Exact likelihood oracle (tiny instances only)
// ---------------------------------------------------------------------------

/// prod_x p_x^{f(seq, x)}. Requires an assignment for every symbol drawn.
double sequence_probability(const DiscreteDistribution& dist, const SampleSequence& seq);

/// Exact profile probability: sum of sequence probabilities over all length-n
/// sequences whose profile equals `phi`, computed by enumerating assignments
/// of frequency classes to domain symbols. Enforced to N <= 8 and n <= 8.
double profile_probability_exact(const DiscreteDistribution& dist, const Profile& phi);

/// Exact pseudo-profile probability: symbols outside S are unconstrained.
double pseudo_profile_probability_exact(const DiscreteDistribution& dist,
                                        const PseudoProfile& phi_s);

/// All profiles of length n with at most `max_parts` distinct observed
/// elements (integer partitions of n into at most max_parts parts).
std::vector<Profile> all_profiles(std::uint64_t n, std::uint64_t max_parts);

// ---------------------------------------------------------------------------
// Normal form shared by the surrogate and the solver
// ---------------------------------------------------------------------------

/// Frequency classes of a (pseudo-)profile plus the sizes the likelihood
/// depends on. A plain profile is the s_size == domain_size, remainder == 0
/// special case.
struct PseudoView {
  std::vector<std::uint64_t> freqs;   // distinct frequencies, ascending
  std::vector<std::uint64_t> counts;  // elements at each frequency
  std::uint64_t n = 0;                // sequence length
  std::uint64_t s_size = 0;           // |S|
  std::uint64_t domain_size = 0;      // N

  std::uint64_t distinct() const;
  std::uint64_t occupied() const;     // sum_t j_t * k_t
  std::uint64_t remainder() const;    // n - occupied(): samples outside S
};

PseudoView make_view(const Profile& phi, std::uint64_t domain_size);
PseudoView make_view(const PseudoProfile& phi_s, std::uint64_t domain_size);

// ---------------------------------------------------------------------------
// Surrogate likelihood and the approximate solver
// ---------------------------------------------------------------------------

struct SolverOptions {
  std::uint64_t domain_size = 0;  // required
  double grid_ratio = 1.05;       // geometric level grid step
  double tiny_grid_ratio = 1.25;  // grid used by the exhaustive tiny path
  std::uint64_t tiny_exhaustive_limit = 8;  // tiny path when n and N are <= this
  int max_rounds = 500;
  double round_tol = 1e-8;
  // Inner scaling budget per ascent round. The standalone surrogate op uses
  // a 1000-sweep cap; inside the ascent a truncated solve is plenty (the
  // value update changes the problem every round anyway).
  int coupling_max_sweeps = 80;
  double coupling_tol = 1e-8;
  double min_prob = 0.0;     // constrained support mode: levels >= 1/k
  bool pin_s_mass = true;    // S keeps its empirical mass (the free optimum agrees)
  std::uint64_t seed = 0;    // determinism token; the solver draws no randomness
  std::uint64_t exact_work_cap = 20000000;  // exact scoring budget
};

struct SolverStats {
  int rounds = 0;
  std::uint64_t grid_size = 0;
  std::uint64_t candidates_scored = 0;
  bool converged = true;
  bool exact_scored = false;  // candidate scores came from the exact DP
  bool coupling_warning = false;
  /// Surrogate value after every ascent round of the winning candidate.
  std::vector<double> objective_trace;
};

struct PmlResult {
  /// S-part levels sorted by descending value; when outside_mass > 0 one
  /// extra level spreading that mass uniformly over the complement of S is
  /// appended so the distribution is a complete object over the domain.
  DiscreteDistribution distribution;
  std::size_t s_level_count = 0;
  double outside_mass = 0.0;
  double log_likelihood = 0.0;
  std::optional<double> beta_certificate;
  SolverStats stats;
};

/// Log of the surrogate (pseudo-)profile likelihood of a given distribution.
/// The distribution's levels are read as the S-part; any missing mass is the
/// outside mass. Uses exact dynamic programming whenever the frequency/level
/// structure is small enough, otherwise the scaled continuous relaxation.
/// `force_relaxed` pins the relaxation (used to test its quality band).
double surrogate_log_likelihood(const DiscreteDistribution& dist, const Profile& phi,
                                bool force_relaxed = false);
double surrogate_log_likelihood(const DiscreteDistribution& dist,
                                const PseudoProfile& phi_s, bool force_relaxed = false);

PmlResult approximate_pml(const Profile& phi, const SolverOptions& opts);
PmlResult approximate_pml(const PseudoProfile& phi_s, const SolverOptions& opts);

/// Approximate PML under the constraint that every level is >= 1/k. The
/// support of the returned distribution is the plug-in support estimate.
PmlResult constrained_pml_support(const Profile& phi, std::uint64_t k,
                                  const SolverOptions& opts);

/// The candidate family the tiny exhaustive path searches: all normalized
/// multisets of geometric-grid values (ratio `opts.tiny_grid_ratio`, floor
/// 1/(n*N)) of size up to the domain size, canonicalized so the smallest
/// grid index present is zero. Exposed so tests can sweep the same family.
std::vector<std::vector<DiscreteDistribution::Level>> tiny_candidate_family(
    std::uint64_t n, const SolverOptions& opts, std::uint64_t min_support);

}  // namespace ppml

#endif  // PPML_PML_HPP_
