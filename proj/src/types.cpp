#include "ppml/types.hpp"

#include <algorithm>
#include <string>

namespace ppml {

FrequencySet::FrequencySet(std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals)
    : intervals_(std::move(intervals)) {
  std::sort(intervals_.begin(), intervals_.end());
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (intervals_[i].first > intervals_[i].second)
      throw std::invalid_argument("FrequencySet: interval with lo > hi");
    if (i > 0 && intervals_[i].first <= intervals_[i - 1].second)
      throw std::invalid_argument("FrequencySet: overlapping intervals");
  }
}

FrequencySet FrequencySet::up_to(std::uint64_t hi) {
  return FrequencySet({{0, hi}});
}

FrequencySet FrequencySet::interval(std::uint64_t lo, std::uint64_t hi) {
  return FrequencySet({{lo, hi}});
}

bool FrequencySet::contains(std::uint64_t j) const {
  for (const auto& [lo, hi] : intervals_) {
    if (j < lo) return false;
    if (j <= hi) return true;
  }
  return false;
}

std::uint64_t FrequencySet::cardinality() const {
  std::uint64_t c = 0;
  for (const auto& [lo, hi] : intervals_) c += hi - lo + 1;
  return c;
}

Histogram build_histogram(const SampleSequence& seq) {
  Histogram h;
  h.domain_size = seq.domain_size;
  h.total = seq.symbols.size();
  for (Symbol x : seq.symbols) {
    if (x >= seq.domain_size)
      throw std::out_of_range("build_histogram: symbol " + std::to_string(x) +
                              " outside domain of size " + std::to_string(seq.domain_size));
    ++h.counts[x];
  }
  return h;
}

Profile profile_of(const Histogram& hist) {
  Profile p;
  p.length = hist.total;
  for (const auto& [sym, c] : hist.counts) {
    (void)sym;
    if (c > 0) ++p.phi[c];
  }
  return p;
}

std::set<std::uint64_t> freq_set(const Profile& p) {
  std::set<std::uint64_t> out;
  for (const auto& [j, c] : p.phi)
    if (c > 0) out.insert(j);
  return out;
}

std::set<std::uint64_t> freq_set(const PseudoProfile& p) {
  std::set<std::uint64_t> out;
  for (const auto& [j, c] : p.phi_s)
    if (c > 0) out.insert(j);
  return out;
}

std::uint64_t distinct_count(const Profile& p) {
  std::uint64_t d = 0;
  for (const auto& [j, c] : p.phi) {
    (void)j;
    d += c;
  }
  return d;
}

std::uint64_t distinct_count(const PseudoProfile& p) {
  std::uint64_t d = 0;
  for (const auto& [j, c] : p.phi_s) {
    (void)j;
    d += c;
  }
  return d;
}

std::pair<SampleSequence, SampleSequence> split_samples(const SampleSequence& seq) {
  if (seq.symbols.size() % 2 != 0)
    throw std::invalid_argument("split_samples: sequence length must be even");
  const std::size_t half = seq.symbols.size() / 2;
  SampleSequence a, b;
  a.domain_size = b.domain_size = seq.domain_size;
  a.symbols.assign(seq.symbols.begin(), seq.symbols.begin() + half);
  b.symbols.assign(seq.symbols.begin() + half, seq.symbols.end());
  return {std::move(a), std::move(b)};
}

std::pair<std::vector<Symbol>, std::vector<Symbol>> partition_domain(
    const Histogram& hist1, const FrequencySet& f) {
  std::vector<Symbol> s, s_bar;
  const bool zero_in_f = f.contains(0);
  // Walk observed symbols (sorted) and the gaps of unobserved ones between
  // them, so the pass is O(N) without a map lookup per symbol.
  Symbol next = 0;
  auto flush_unseen_until = [&](Symbol end) {
    if (zero_in_f)
      for (Symbol x = next; x < end; ++x) s.push_back(x);
    else
      for (Symbol x = next; x < end; ++x) s_bar.push_back(x);
  };
  for (const auto& [sym, c] : hist1.counts) {
    flush_unseen_until(sym);
    (f.contains(c) ? s : s_bar).push_back(sym);
    next = sym + 1;
  }
  flush_unseen_until(static_cast<Symbol>(hist1.domain_size));
  return {std::move(s), std::move(s_bar)};
}

PseudoProfile pseudo_profile(const Histogram& hist2, std::vector<Symbol> subset) {
  for (Symbol x : subset)
    if (x >= hist2.domain_size)
      throw std::out_of_range("pseudo_profile: subset symbol outside domain");
  PseudoProfile pp;
  pp.length = hist2.total;
  pp.subset = std::move(subset);
  std::sort(pp.subset.begin(), pp.subset.end());
  for (Symbol x : pp.subset) {
    const std::uint64_t c = hist2.count_of(x);
    if (c > 0) ++pp.phi_s[c];
  }
  return pp;
}

}  // namespace ppml
