#include "ppml/framework.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ppml {

FrequencySet default_frequency_set(const Property& prop, std::uint64_t n,
                                   std::uint64_t domain_size, Preset preset,
                                   std::uint64_t threshold, double c1) {
  if (n < 1 || domain_size < 1)
    throw std::invalid_argument("default_frequency_set: need n >= 1 and N >= 1");
  const double nn = static_cast<double>(n);
  if (prop.kind == PropertyKind::DistanceToUniformity) {
    const double center = nn / static_cast<double>(domain_size);
    const double radius = std::sqrt(c1 * nn * std::log(nn) / static_cast<double>(domain_size));
    const double lo = std::max(0.0, std::floor(center - radius));
    const double hi = std::min(nn, std::ceil(center + radius));
    return FrequencySet::interval(static_cast<std::uint64_t>(lo),
                                  static_cast<std::uint64_t>(hi));
  }
  if (preset == Preset::PaperExperiment) return FrequencySet::up_to(threshold);
  const auto hi = static_cast<std::uint64_t>(std::llround(c1 * std::log(nn)));
  return FrequencySet::up_to(hi);
}

double emp_frac(const Histogram& hist1, const Histogram& hist2, const FrequencySet& f) {
  if (hist2.total == 0) return 0.0;
  std::uint64_t outside = 0;
  for (const auto& [sym, c2] : hist2.counts) {
    if (!f.contains(hist1.count_of(sym))) outside += c2;
  }
  return static_cast<double>(outside) / static_cast<double>(hist2.total);
}

Estimate estimate(const SampleSequence& sample, const FrameworkConfig& cfg) {
  if (cfg.property.kind == PropertyKind::Support)
    throw std::invalid_argument("estimate: support goes through support_estimate");
  Histogram h1, h2;
  if (cfg.split == SplitMode::Halves) {
    auto [first, second] = split_samples(sample);
    h1 = build_histogram(first);
    h2 = build_histogram(second);
  } else {
    h1 = build_histogram(sample);
    h2 = h1;
  }
  const std::uint64_t n = h2.total;
  const std::uint64_t domain_size = sample.domain_size;

  FrequencySet f = cfg.frequency_set
                       ? *cfg.frequency_set
                       : default_frequency_set(cfg.property, std::max<std::uint64_t>(n, 1),
                                               domain_size, cfg.preset, cfg.threshold,
                                               cfg.poly.c1);

  auto [s, s_bar] = partition_domain(h1, f);

  Estimate est;
  est.diagnostics.s_size = s.size();
  est.diagnostics.s_bar_size = s_bar.size();
  est.diagnostics.n = n;
  est.diagnostics.emp_frac = emp_frac(h1, h2, f);

  // Bad set: pseudo PML plug-in (or the per-symbol polynomial baseline).
  if (s.empty()) {
    est.bad_set_value = 0.0;
  } else if (cfg.bad_set_method == BadSetMethod::PseudoPml) {
    PseudoProfile pp = pseudo_profile(h2, s);
    SolverOptions opts = cfg.solver;
    opts.domain_size = domain_size;
    PmlResult res = approximate_pml(pp, opts);
    std::vector<DiscreteDistribution::Level> s_levels(
        res.distribution.levels.begin(),
        res.distribution.levels.begin() + static_cast<std::ptrdiff_t>(res.s_level_count));
    est.bad_set_value = plugin_property_levels(s_levels, s.size(), cfg.property);
    est.diagnostics.solver_stats = res.stats;
    if (cfg.keep_pml_result) est.diagnostics.pml = std::move(res);
  } else {
    PolyConfig pc = cfg.poly;
    pc.n = n;
    pc.N = domain_size;
    est.bad_set_value = per_symbol_estimator(h1, h2, s, cfg.property, pc);
  }

  est.good_set_value = empirical_plugin(h2, cfg.property, s_bar);
  est.bias_correction = bias_correction_value(h2, cfg.property, s_bar, cfg.correction);

  const double raw = est.bad_set_value + est.good_set_value + est.bias_correction;
  est.value = std::max(0.0, std::min(raw, cfg.property.max_value()));
  return est;
}

std::uint64_t support_estimate(const SampleSequence& sample, std::uint64_t k,
                               const SolverOptions& opts) {
  if (k < 1) throw std::invalid_argument("support_estimate: k must be >= 1");
  const Histogram h = build_histogram(sample);
  const Profile phi = profile_of(h);
  SolverOptions o = opts;
  if (o.domain_size == 0) o.domain_size = sample.domain_size;
  const PmlResult res = constrained_pml_support(phi, k, o);
  return res.distribution.support();
}

}  // namespace ppml
