#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ppml/bench.hpp"
#include "ppml/framework.hpp"

using namespace ppml;

namespace {

SampleSequence zipf_sample(std::uint64_t domain, std::uint64_t n, std::uint64_t seed) {
  SyntheticDist d{SyntheticDist::Kind::Zipf, domain, 1.0};
  return Sampler(make_distribution(d)).draw(n, seed);
}

std::vector<Symbol> whole_domain(std::uint64_t domain) {
  std::vector<Symbol> v(domain);
  for (std::uint64_t i = 0; i < domain; ++i) v[i] = static_cast<Symbol>(i);
  return v;
}

}  // namespace

TEST_SUITE("framework") {

TEST_CASE("default frequency sets") {
  const Property ent = Property::entropy(100000);

  const FrequencySet exp_set =
      default_frequency_set(ent, 1000, 100000, Preset::PaperExperiment);
  CHECK(exp_set.contains(0));
  CHECK(exp_set.contains(18));
  CHECK(!exp_set.contains(19));

  // Theory preset: [0, round(c1 ln n)] with c1 = 40, n = e^10.
  const auto n_e10 = static_cast<std::uint64_t>(std::llround(std::exp(10.0)));
  const FrequencySet theory =
      default_frequency_set(ent, n_e10, 100000, Preset::PaperTheory, 18, 40.0);
  CHECK(theory.contains(400));
  CHECK(!theory.contains(401));

  // Distance to uniformity: centered interval, clamped at zero.
  const Property dtu = Property::distance_to_uniformity(1000);
  const FrequencySet f =
      default_frequency_set(dtu, 10000, 1000, Preset::PaperTheory, 18, 40.0);
  REQUIRE(f.intervals().size() == 1);
  CHECK(f.intervals()[0].first == 0);
  CHECK(f.intervals()[0].second == 71);
}

TEST_CASE("degenerate F = [0, n]: pure PML plug-in, bit for bit") {
  const auto seq = zipf_sample(50, 400, 7);
  const Histogram h = build_histogram(seq);

  FrameworkConfig cfg;
  cfg.property = Property::entropy(50);
  cfg.split = SplitMode::None;
  cfg.frequency_set = FrequencySet::up_to(400);
  const Estimate est = estimate(seq, cfg);

  SolverOptions opts;
  opts.domain_size = 50;
  const PmlResult direct = approximate_pml(profile_of(h), opts);
  std::vector<DiscreteDistribution::Level> levels(
      direct.distribution.levels.begin(),
      direct.distribution.levels.begin() + direct.s_level_count);
  const double baseline = plugin_property_levels(levels, 50, cfg.property);
  const double clamped = std::max(0.0, std::min(baseline, std::log(50.0)));

  CHECK(est.bad_set_value == baseline);
  CHECK(est.good_set_value == 0.0);
  CHECK(est.bias_correction == 0.0);
  CHECK(est.value == clamped);
  CHECK(est.diagnostics.emp_frac == 0.0);
}

TEST_CASE("degenerate F = empty: pure corrected MLE, bit for bit") {
  const auto seq = zipf_sample(50, 400, 11);
  const Histogram h = build_histogram(seq);

  FrameworkConfig cfg;
  cfg.property = Property::entropy(50);
  cfg.split = SplitMode::None;
  cfg.frequency_set = FrequencySet::empty_set();
  const Estimate est = estimate(seq, cfg);

  const auto everyone = whole_domain(50);
  const double plain = empirical_plugin(h, cfg.property, everyone);
  const double bias =
      bias_correction_value(h, cfg.property, everyone, BiasCorrection::PerSymbolHalf);

  CHECK(est.bad_set_value == 0.0);
  CHECK(est.good_set_value == plain);
  CHECK(est.bias_correction == bias);
  CHECK(est.value == std::max(0.0, std::min(plain + bias, std::log(50.0))));
  CHECK(est.diagnostics.emp_frac == 1.0);
}

TEST_CASE("decomposition is exact and diagnostics are conserved") {
  const auto seq = zipf_sample(200, 1000, 3);
  FrameworkConfig cfg;
  cfg.property = Property::entropy(200);
  cfg.split = SplitMode::None;
  const Estimate est = estimate(seq, cfg);

  const double raw = est.bad_set_value + est.good_set_value + est.bias_correction;
  CHECK(est.value == std::max(0.0, std::min(raw, std::log(200.0))));
  CHECK(est.diagnostics.s_size + est.diagnostics.s_bar_size == 200);

  // Every estimation-half sample is accounted for exactly once.
  const Histogram h = build_histogram(seq);
  const FrequencySet f =
      default_frequency_set(cfg.property, 1000, 200, cfg.preset, cfg.threshold);
  auto [s, sbar] = partition_domain(h, f);
  std::uint64_t in_s = 0, in_sbar = 0;
  for (Symbol x : s) in_s += h.count_of(x);
  for (Symbol x : sbar) in_sbar += h.count_of(x);
  CHECK(in_s + in_sbar == 1000);
  CHECK(est.diagnostics.emp_frac ==
        doctest::Approx(static_cast<double>(in_sbar) / 1000.0).epsilon(1e-15));
}

TEST_CASE("estimate is deterministic bit for bit") {
  const auto seq = zipf_sample(300, 800, 5);
  FrameworkConfig cfg;
  cfg.property = Property::entropy(300);
  cfg.split = SplitMode::None;
  const Estimate a = estimate(seq, cfg);
  const Estimate b = estimate(seq, cfg);
  CHECK(a.value == b.value);
  CHECK(a.bad_set_value == b.bad_set_value);
  CHECK(a.good_set_value == b.good_set_value);
  CHECK(a.bias_correction == b.bias_correction);
}

TEST_CASE("estimate is invariant under symbol relabeling") {
  const auto seq = zipf_sample(100, 600, 9);
  FrameworkConfig cfg;
  cfg.property = Property::entropy(100);
  cfg.split = SplitMode::None;
  const Estimate base = estimate(seq, cfg);

  SampleSequence mapped = seq;
  for (Symbol& s : mapped.symbols) s = static_cast<Symbol>(99 - s);
  const Estimate flipped = estimate(mapped, cfg);
  CHECK(flipped.value == doctest::Approx(base.value).epsilon(1e-9));
}

TEST_CASE("split mode splits and validates") {
  SampleSequence odd;
  odd.domain_size = 4;
  odd.symbols = {0, 1, 2};
  FrameworkConfig cfg;
  cfg.property = Property::entropy(4);
  cfg.split = SplitMode::Halves;
  CHECK_THROWS_AS(estimate(odd, cfg), std::invalid_argument);

  const auto seq = zipf_sample(60, 800, 13);
  FrameworkConfig split_cfg = cfg;
  split_cfg.property = Property::entropy(60);
  const Estimate with_split = estimate(seq, split_cfg);
  CHECK(with_split.diagnostics.n == 400);

  FrameworkConfig whole_cfg = split_cfg;
  whole_cfg.split = SplitMode::None;
  const Estimate without = estimate(seq, whole_cfg);
  CHECK(without.diagnostics.n == 800);
}

TEST_CASE("experiment preset on uniform data stays near ln N") {
  SyntheticDist u{SyntheticDist::Kind::Uniform, 100, 1.0};
  const Sampler sampler(make_distribution(u));
  FrameworkConfig cfg;
  cfg.property = Property::entropy(100);
  cfg.split = SplitMode::None;
  double err = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto seq = sampler.draw(200000, seed);
    err += std::fabs(estimate(seq, cfg).value - std::log(100.0));
  }
  CHECK(err / 10.0 < 0.02);
}

TEST_CASE("support estimate basics") {
  SampleSequence rep;
  rep.domain_size = 10;
  rep.symbols = {5, 5, 5, 5};
  SolverOptions opts;
  opts.domain_size = 10;
  CHECK(support_estimate(rep, 1, opts) == 1);

  SampleSequence distinct;
  distinct.domain_size = 10;
  distinct.symbols = {0, 1, 2, 3};
  CHECK(support_estimate(distinct, 4, opts) == 4);

  CHECK_THROWS_AS(support_estimate(distinct, 2, opts), std::invalid_argument);
}

TEST_CASE("emp_frac degenerate cases") {
  const auto seq = zipf_sample(40, 300, 21);
  const Histogram h = build_histogram(seq);
  CHECK(emp_frac(h, h, FrequencySet::up_to(300)) == 0.0);
  CHECK(emp_frac(h, h, FrequencySet::empty_set()) == 1.0);
}

}  // TEST_SUITE

TEST_SUITE("framework") {

TEST_CASE("distance to uniformity near zero on uniform data") {
  SyntheticDist u{SyntheticDist::Kind::Uniform, 100, 1.0};
  const auto seq = Sampler(make_distribution(u)).draw(200000, 2);
  FrameworkConfig cfg;
  cfg.property = Property::distance_to_uniformity(100);
  cfg.split = SplitMode::None;
  const Estimate est = estimate(seq, cfg);
  CHECK(est.value >= 0.0);
  CHECK(est.value < 0.05);
}

TEST_CASE("distance to uniformity detects a point mass") {
  SampleSequence seq;
  seq.domain_size = 50;
  seq.symbols.assign(5000, 7);
  FrameworkConfig cfg;
  cfg.property = Property::distance_to_uniformity(50);
  cfg.split = SplitMode::None;
  const Estimate est = estimate(seq, cfg);
  CHECK(est.value == doctest::Approx(2.0 * (1.0 - 1.0 / 50)).epsilon(0.02));
}

TEST_CASE("support property must use support_estimate") {
  SampleSequence seq;
  seq.domain_size = 4;
  seq.symbols = {0, 1};
  FrameworkConfig cfg;
  cfg.property = Property::support(4, 4);
  CHECK_THROWS_AS(estimate(seq, cfg), std::invalid_argument);
}

}  // TEST_SUITE
