#include "ppml/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ppml {

DiscreteDistribution DiscreteDistribution::from_probabilities(
    const std::vector<double>& probs) {
  DiscreteDistribution d;
  d.domain_size = probs.size();
  std::map<double, std::uint64_t, std::greater<double>> groups;
  for (double p : probs) {
    if (p < 0.0 || p > 1.0)
      throw std::invalid_argument("from_probabilities: value outside [0, 1]");
    if (p > 0.0) ++groups[p];
  }
  std::vector<std::uint32_t> asg(probs.size(), kNoLevel);
  std::map<double, std::uint32_t, std::greater<double>> level_of;
  for (const auto& [p, c] : groups) {
    level_of[p] = static_cast<std::uint32_t>(d.levels.size());
    d.levels.push_back({p, c});
  }
  for (std::size_t i = 0; i < probs.size(); ++i)
    if (probs[i] > 0.0) asg[i] = level_of[probs[i]];
  d.assignment = std::move(asg);
  d.validate();
  return d;
}

double DiscreteDistribution::mass() const {
  double m = 0.0;
  for (const Level& l : levels) m += l.p * static_cast<double>(l.count);
  return m;
}

std::uint64_t DiscreteDistribution::support() const {
  std::uint64_t s = 0;
  for (const Level& l : levels) s += l.count;
  return s;
}

double DiscreteDistribution::prob_of(Symbol x) const {
  if (!assignment) throw std::logic_error("prob_of: distribution has no assignment");
  if (x >= assignment->size()) return 0.0;
  const std::uint32_t lvl = (*assignment)[x];
  return lvl == kNoLevel ? 0.0 : levels[lvl].p;
}

std::vector<double> DiscreteDistribution::to_dense() const {
  std::vector<double> out(domain_size, 0.0);
  if (assignment) {
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::uint32_t lvl = (*assignment)[i];
      if (lvl != kNoLevel) out[i] = levels[lvl].p;
    }
  } else {
    std::size_t idx = 0;
    for (const Level& l : levels)
      for (std::uint64_t c = 0; c < l.count && idx < out.size(); ++c) out[idx++] = l.p;
  }
  return out;
}

void DiscreteDistribution::validate() const {
  if (support() > domain_size)
    throw std::invalid_argument("DiscreteDistribution: support exceeds domain size");
  const double m = mass();
  if (std::fabs(m - 1.0) > 1e-9)
    throw std::invalid_argument("DiscreteDistribution: mass " + std::to_string(m) +
                                " not within 1e-9 of 1");
  for (const Level& l : levels)
    if (!(l.p > 0.0) || l.p > 1.0 + 1e-12)
      throw std::invalid_argument("DiscreteDistribution: level value outside (0, 1]");
}

}  // namespace ppml
