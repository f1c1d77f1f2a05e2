#ifndef PPML_FRAMEWORK_HPP_
#define PPML_FRAMEWORK_HPP_

#include <cstdint>
#include <optional>

#include "ppml/estimators.hpp"
#include "ppml/pml.hpp"
#include "ppml/poly.hpp"
#include "ppml/types.hpp"

namespace ppml {

enum class BadSetMethod { PseudoPml, PerSymbolPoly };
enum class SplitMode { Halves, None };
enum class Preset { PaperTheory, PaperExperiment };

struct FrameworkConfig {
  Property property;
  std::optional<FrequencySet> frequency_set;  // resolved from the preset if unset
  Preset preset = Preset::PaperExperiment;
  std::uint64_t threshold = 18;  // experiment-preset frequency cutoff
  SolverOptions solver;
  PolyConfig poly;  // alpha/c1/c2 (n and N are filled in per call)
  BiasCorrection correction = BiasCorrection::PerSymbolHalf;
  BadSetMethod bad_set_method = BadSetMethod::PseudoPml;
  SplitMode split = SplitMode::Halves;
  bool keep_pml_result = false;  // retain the solver result for debugging dumps
};

struct EstimateDiagnostics {
  std::uint64_t s_size = 0;
  std::uint64_t s_bar_size = 0;
  double emp_frac = 0.0;
  std::uint64_t n = 0;
  SolverStats solver_stats;
  std::optional<PmlResult> pml;  // only when keep_pml_result is set
};

struct Estimate {
  double value = 0.0;            // clamped combination
  double bad_set_value = 0.0;    // f_S of the pseudo-PML (or per-symbol) part
  double good_set_value = 0.0;   // empirical plug-in over the complement
  double bias_correction = 0.0;  // additive correction
  EstimateDiagnostics diagnostics;
};

/// Frequency set used to split the domain. The experiment preset reproduces
/// the fixed cutoff [0, threshold] for entropy and support; the theory preset
/// derives the interval from n and the constants: entropy [0, round(c1 ln n)],
/// distance to uniformity the interval of radius sqrt(c1 n ln n / N) around
/// n/N (distance to uniformity always uses its centered form; there is no
/// published fixed-cutoff variant for it).
FrequencySet default_frequency_set(const Property& prop, std::uint64_t n,
                                   std::uint64_t domain_size, Preset preset,
                                   std::uint64_t threshold = 18, double c1 = 70.0);

/// Fraction of estimation-half samples whose symbol falls outside S, i.e. the
/// share handled by the empirical estimator.
double emp_frac(const Histogram& hist1, const Histogram& hist2, const FrequencySet& f);

/// The full pipeline: split (or reuse) the sample, partition the domain by
/// first-half frequencies, pseudo-PML (or per-symbol polynomial) on the bad
/// set, empirical with correction on the good set, combine and clamp.
Estimate estimate(const SampleSequence& sample, const FrameworkConfig& cfg);

/// Support via the minimum-probability-constrained PML plug-in.
std::uint64_t support_estimate(const SampleSequence& sample, std::uint64_t k,
                               const SolverOptions& opts);

}  // namespace ppml

#endif  // PPML_FRAMEWORK_HPP_
