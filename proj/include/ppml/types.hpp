#ifndef PPML_TYPES_HPP_
#define PPML_TYPES_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ppml {

using Symbol = std::uint32_t;

/// A sequence of i.i.d. draws from a distribution over the domain [0, N).
struct SampleSequence {
  std::vector<Symbol> symbols;
  std::uint64_t domain_size = 0;

  std::uint64_t size() const { return symbols.size(); }
};

/// Per-symbol counts. Sparse: symbols with count zero are absent.
struct Histogram {
  std::map<Symbol, std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t domain_size = 0;

  std::uint64_t count_of(Symbol x) const {
    auto it = counts.find(x);
    return it == counts.end() ? 0 : it->second;
  }
};

/// Multiset of frequencies: phi[j] = number of domain elements seen exactly
/// j times. Entries for j = 0 are never stored and all stored values are >= 1.
struct Profile {
  std::map<std::uint64_t, std::uint64_t> phi;
  std::uint64_t length = 0;  // n

  std::uint64_t count_at(std::uint64_t j) const {
    auto it = phi.find(j);
    return it == phi.end() ? 0 : it->second;
  }
};

/// Profile restricted to a subset S of the domain. Frequencies are taken in
/// the second sample half; elements of S unseen there occupy no bucket.
struct PseudoProfile {
  std::vector<Symbol> subset;  // S, sorted ascending
  std::map<std::uint64_t, std::uint64_t> phi_s;
  std::uint64_t length = 0;  // n = total of the underlying histogram

  std::uint64_t subset_size() const { return subset.size(); }
};

/// Union of disjoint closed integer intervals [lo, hi].
class FrequencySet {
 public:
  FrequencySet() = default;
  explicit FrequencySet(std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals);

  static FrequencySet empty_set() { return FrequencySet(); }
  /// [0, hi]
  static FrequencySet up_to(std::uint64_t hi);
  /// Single interval [lo, hi].
  static FrequencySet interval(std::uint64_t lo, std::uint64_t hi);

  bool contains(std::uint64_t j) const;
  bool empty() const { return intervals_.empty(); }
  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& intervals() const {
    return intervals_;
  }
  /// Number of integers covered.
  std::uint64_t cardinality() const;

 private:
  std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals_;  // sorted by lo
};

Histogram build_histogram(const SampleSequence& seq);

Profile profile_of(const Histogram& hist);

std::set<std::uint64_t> freq_set(const Profile& p);
std::set<std::uint64_t> freq_set(const PseudoProfile& p);

/// Number of distinct observed elements, sum_j phi(j).
std::uint64_t distinct_count(const Profile& p);
std::uint64_t distinct_count(const PseudoProfile& p);

/// Splits an even-length sequence into its first and second halves.
std::pair<SampleSequence, SampleSequence> split_samples(const SampleSequence& seq);

/// S = {x in [0,N) : hist1.count_of(x) in F}, S_bar = complement. Symbols
/// never observed have count 0 and land in S exactly when 0 is in F.
std::pair<std::vector<Symbol>, std::vector<Symbol>> partition_domain(
    const Histogram& hist1, const FrequencySet& f);

PseudoProfile pseudo_profile(const Histogram& hist2, std::vector<Symbol> subset);

}  // namespace ppml

#endif  // PPML_TYPES_HPP_
