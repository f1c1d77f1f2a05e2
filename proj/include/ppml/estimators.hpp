#ifndef PPML_ESTIMATORS_HPP_
#define PPML_ESTIMATORS_HPP_

#include <cstdint>
#include <vector>

#include "ppml/distribution.hpp"
#include "ppml/poly.hpp"
#include "ppml/types.hpp"

namespace ppml {

enum class PropertyKind { Entropy, DistanceToUniformity, Support };

/// A separable symmetric property f(p) = sum_x g(p_x). Natural logarithms
/// throughout; base conversion is a display concern.
struct Property {
  PropertyKind kind = PropertyKind::Entropy;
  std::uint64_t domain_size = 0;  // N
  std::uint64_t support_cap = 0;  // k (support kind only)

  static Property entropy(std::uint64_t domain_size);
  static Property distance_to_uniformity(std::uint64_t domain_size);
  static Property support(std::uint64_t domain_size, std::uint64_t k);

  double g(double p) const;
  double max_value() const;
};

enum class BiasCorrection {
  None,
  PerSymbolHalf,  // 1/(2n) per subset symbol seen in the sample
  SBarOverN,      // |subset| / n
};

/// Property value of an explicit distribution, full domain. Unplaced domain
/// elements have probability zero (g(0) contributes for distance to
/// uniformity).
double plugin_property(const DiscreteDistribution& dist, const Property& prop);

/// Restriction to a symbol subset; requires a symbol-level assignment.
double plugin_property(const DiscreteDistribution& dist, const Property& prop,
                       const std::vector<Symbol>& subset);

/// f_S for a label-free level multiset covering part of a subset of size
/// subset_size; the remaining subset_size - sum(count) elements sit at zero.
double plugin_property_levels(const std::vector<DiscreteDistribution::Level>& levels,
                              std::uint64_t subset_size, const Property& prop);

/// Plain empirical plug-in sum over the subset (no correction).
double empirical_plugin(const Histogram& hist, const Property& prop,
                        const std::vector<Symbol>& subset);

/// The additive correction alone. Distance to uniformity always gets zero.
double bias_correction_value(const Histogram& hist, const Property& prop,
                             const std::vector<Symbol>& subset, BiasCorrection corr);

/// empirical_plugin + bias_correction_value.
double empirical_with_bias(const Histogram& hist, const Property& prop,
                           const std::vector<Symbol>& subset, BiasCorrection corr);

/// Piecewise per-symbol estimator over S built from the two sample halves:
/// polynomial (unbiased falling powers) where both counts are small, zero in
/// the disagreement band, empirical plug-in (with first-order correction for
/// entropy) where the first-half count is large. The total is clamped to
/// [0, f_max]. For distance to uniformity the thresholds switch to the
/// centered form when the case-2 regime applies.
double per_symbol_estimator(const Histogram& hist1, const Histogram& hist2,
                            const std::vector<Symbol>& subset, const Property& prop,
                            const PolyConfig& cfg);

}  // namespace ppml

#endif  // PPML_ESTIMATORS_HPP_
