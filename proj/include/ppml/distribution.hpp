#ifndef PPML_DISTRIBUTION_HPP_
#define PPML_DISTRIBUTION_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "ppml/types.hpp"

namespace ppml {

/// Sentinel assignment for symbols with probability zero.
inline constexpr std::uint32_t kNoLevel = 0xffffffffu;

/// A distribution over [0, N) described as probability levels with integer
/// multiplicities. The optional assignment maps each symbol to its level;
/// without it the representation is label-free (sufficient for symmetric
/// properties).
struct DiscreteDistribution {
  struct Level {
    double p = 0.0;            // in (0, 1]
    std::uint64_t count = 0;   // number of domain elements at this value
  };

  std::vector<Level> levels;
  std::uint64_t domain_size = 0;
  std::optional<std::vector<std::uint32_t>> assignment;  // symbol -> level idx

  /// Groups an explicit probability vector into levels; zero entries stay
  /// unassigned. The vector length becomes the domain size.
  static DiscreteDistribution from_probabilities(const std::vector<double>& probs);

  double mass() const;
  std::uint64_t support() const;

  double prob_of(Symbol x) const;

  /// Explicit per-symbol vector. Uses the assignment when present, otherwise
  /// fills levels over consecutive symbol ids starting at 0.
  std::vector<double> to_dense() const;

  /// Checks mass within 1e-9 of one and support <= domain size.
  void validate() const;
};

}  // namespace ppml

#endif  // PPML_DISTRIBUTION_HPP_
