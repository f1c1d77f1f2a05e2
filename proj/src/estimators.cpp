#include "ppml/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppml {

Property Property::entropy(std::uint64_t domain_size) {
  return {PropertyKind::Entropy, domain_size, 0};
}

Property Property::distance_to_uniformity(std::uint64_t domain_size) {
  return {PropertyKind::DistanceToUniformity, domain_size, 0};
}

Property Property::support(std::uint64_t domain_size, std::uint64_t k) {
  return {PropertyKind::Support, domain_size, k};
}

double Property::g(double p) const {
  switch (kind) {
    case PropertyKind::Entropy:
      return p > 0.0 ? -p * std::log(p) : 0.0;
    case PropertyKind::DistanceToUniformity:
      return std::fabs(p - 1.0 / static_cast<double>(domain_size));
    case PropertyKind::Support:
      return p > 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double Property::max_value() const {
  switch (kind) {
    case PropertyKind::Entropy:
      return std::log(static_cast<double>(domain_size));
    case PropertyKind::DistanceToUniformity:
      return 2.0;
    case PropertyKind::Support:
      return static_cast<double>(
          support_cap > 0 ? std::min(support_cap, domain_size) : domain_size);
  }
  return 0.0;
}

double plugin_property(const DiscreteDistribution& dist, const Property& prop) {
  double acc = 0.0;
  std::uint64_t placed = 0;
  for (const auto& lvl : dist.levels) {
    acc += static_cast<double>(lvl.count) * prop.g(lvl.p);
    placed += lvl.count;
  }
  if (placed < dist.domain_size)
    acc += static_cast<double>(dist.domain_size - placed) * prop.g(0.0);
  return acc;
}

double plugin_property(const DiscreteDistribution& dist, const Property& prop,
                       const std::vector<Symbol>& subset) {
  double acc = 0.0;
  for (Symbol x : subset) acc += prop.g(dist.prob_of(x));
  return acc;
}

double plugin_property_levels(const std::vector<DiscreteDistribution::Level>& levels,
                              std::uint64_t subset_size, const Property& prop) {
  double acc = 0.0;
  std::uint64_t placed = 0;
  for (const auto& lvl : levels) {
    acc += static_cast<double>(lvl.count) * prop.g(lvl.p);
    placed += lvl.count;
  }
  if (placed > subset_size)
    throw std::invalid_argument("plugin_property_levels: levels exceed subset");
  acc += static_cast<double>(subset_size - placed) * prop.g(0.0);
  return acc;
}

double empirical_plugin(const Histogram& hist, const Property& prop,
                        const std::vector<Symbol>& subset) {
  const double n = static_cast<double>(hist.total);
  double acc = 0.0;
  for (Symbol x : subset) {
    const std::uint64_t c = hist.count_of(x);
    acc += prop.g(n > 0 ? static_cast<double>(c) / n : 0.0);
  }
  return acc;
}

double bias_correction_value(const Histogram& hist, const Property& prop,
                             const std::vector<Symbol>& subset, BiasCorrection corr) {
  if (prop.kind != PropertyKind::Entropy) return 0.0;
  if (hist.total == 0) return 0.0;
  const double n = static_cast<double>(hist.total);
  switch (corr) {
    case BiasCorrection::None:
      return 0.0;
    case BiasCorrection::PerSymbolHalf: {
      std::uint64_t seen = 0;
      for (Symbol x : subset)
        if (hist.count_of(x) > 0) ++seen;
      return static_cast<double>(seen) / (2.0 * n);
    }
    case BiasCorrection::SBarOverN:
      return static_cast<double>(subset.size()) / n;
  }
  return 0.0;
}

double empirical_with_bias(const Histogram& hist, const Property& prop,
                           const std::vector<Symbol>& subset, BiasCorrection corr) {
  return empirical_plugin(hist, prop, subset) +
         bias_correction_value(hist, prop, subset, corr);
}

namespace {

enum class Branch { Poly, Zero, Empirical };

struct BranchRule {
  // Entropy (and distance-to-uniformity case 1) thresholds on raw counts.
  bool centered = false;
  double t1 = 0.0;  // first-half threshold
  double t2 = 0.0;  // second-half threshold
  double center = 0.0;
  std::uint64_t n = 0;

  Branch classify(std::uint64_t n1, std::uint64_t n2) const {
    if (!centered) {
      const auto a = static_cast<double>(n1);
      const auto b = static_cast<double>(n2);
      if (a < t1) return b < t2 ? Branch::Poly : Branch::Zero;
      return Branch::Empirical;
    }
    const double nn = static_cast<double>(n);
    const double d1 = std::fabs(static_cast<double>(n1) / nn - center);
    const double d2 = std::fabs(static_cast<double>(n2) / nn - center);
    if (d1 < t1) return d2 < t2 ? Branch::Poly : Branch::Zero;
    return Branch::Empirical;
  }
};

}  // namespace

double per_symbol_estimator(const Histogram& hist1, const Histogram& hist2,
                            const std::vector<Symbol>& subset, const Property& prop,
                            const PolyConfig& cfg) {
  if (prop.kind == PropertyKind::Support)
    throw std::invalid_argument("per_symbol_estimator: support is not piecewise");
  const std::uint64_t n = cfg.n;
  if (n == 0 || hist2.total != n)
    throw std::invalid_argument("per_symbol_estimator: cfg.n must equal hist2 total");

  const bool is_entropy = prop.kind == PropertyKind::Entropy;
  const double logN = std::log(static_cast<double>(cfg.N));

  PolyApprox pa;
  BranchRule rule;
  rule.n = n;
  if (is_entropy) {
    pa = entropy_poly_config(cfg);
    rule.t1 = cfg.c2 * logN;
    rule.t2 = cfg.c1 * logN;
  } else {
    const int c = dtu_case(cfg);
    pa = dtu_poly_config(cfg, c);
    if (c == 1) {
      rule.t1 = cfg.c2 * logN;
      rule.t2 = cfg.c1 * logN;
    } else {
      rule.centered = true;
      rule.center = 1.0 / static_cast<double>(cfg.N);
      const double nn = static_cast<double>(n);
      rule.t1 = std::sqrt(cfg.c2 * logN / (static_cast<double>(cfg.N) * nn));
      rule.t2 = std::sqrt(cfg.c1 * logN / (static_cast<double>(cfg.N) * nn));
    }
  }
  // Entropy drops the fitted constant so a never-seen symbol contributes
  // its true g(0) = 0; |x - 1/N| keeps it, since g(0) = 1/N is real signal
  // for unseen symbols.
  const bool keep_constant = !is_entropy;
  const double g_n = is_entropy ? 1.0 / (2.0 * static_cast<double>(n)) : 0.0;

  auto symbol_value = [&](std::uint64_t n1, std::uint64_t n2) {
    switch (rule.classify(n1, n2)) {
      case Branch::Poly:
        return falling_factorial_estimate(pa, n2, n, false, keep_constant);
      case Branch::Zero:
        return 0.0;
      case Branch::Empirical: {
        const double freq = static_cast<double>(n2) / static_cast<double>(n);
        return prop.g(freq) + (n2 >= 1 ? g_n : 0.0);
      }
    }
    return 0.0;
  };

  // Symbols of S untouched by both halves share one value.
  const double untouched_value = symbol_value(0, 0);
  double acc = 0.0;
  std::uint64_t touched = 0;
  for (Symbol x : subset) {
    const std::uint64_t n1 = hist1.count_of(x);
    const std::uint64_t n2 = hist2.count_of(x);
    if (n1 == 0 && n2 == 0) continue;
    ++touched;
    acc += symbol_value(n1, n2);
  }
  acc += static_cast<double>(subset.size() - touched) * untouched_value;

  const double f_max = prop.max_value();
  return std::max(0.0, std::min(acc, f_max));
}

}  // namespace ppml
