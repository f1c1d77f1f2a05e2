#ifndef PPML_BENCH_HPP_
#define PPML_BENCH_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ppml/distribution.hpp"
#include "ppml/framework.hpp"
#include "ppml/types.hpp"

namespace ppml {

struct SyntheticDist {
  enum class Kind { Uniform, MixTwoUniforms, Zipf } kind = Kind::Uniform;
  std::uint64_t domain_size = 0;
  double alpha = 1.0;  // Zipf exponent

  std::string name() const;
};

/// Explicit normalized probability vector. Mix-of-two-uniforms puts half the
/// mass on the first N/10 symbols; Zipf(alpha) has p_i proportional to
/// 1/(i+1)^alpha over symbol ids i.
DiscreteDistribution make_distribution(const SyntheticDist& spec);

/// Inverse-CDF sampler over a cached cumulative table; deterministic per
/// (distribution, n, seed) via SplitMix64.
class Sampler {
 public:
  explicit Sampler(const DiscreteDistribution& dist);
  SampleSequence draw(std::uint64_t n, std::uint64_t seed) const;

 private:
  std::vector<double> cdf_;
  std::uint64_t domain_size_;
};

SampleSequence sample(const DiscreteDistribution& dist, std::uint64_t n,
                      std::uint64_t seed);

enum class EstimatorId { PseudoPml, MleCorrected, PerSymbolPoly, PmlPlugin };

std::string estimator_name(EstimatorId id);

struct BenchSpec {
  std::vector<EstimatorId> estimators;
  std::vector<SyntheticDist> dists;
  std::vector<std::uint64_t> sizes;  // sample sizes n
  std::uint64_t trials = 50;
  std::uint64_t seed_base = 1;
  PropertyKind property = PropertyKind::Entropy;
  std::uint64_t threshold = 18;
  SplitMode split = SplitMode::None;  // the experiments do not split
  BiasCorrection correction = BiasCorrection::PerSymbolHalf;
  bool timing = false;  // real per-trial seconds (breaks byte-determinism)
};

struct TrialReport {
  std::string estimator;
  SyntheticDist dist;
  std::uint64_t n = 0;
  std::uint64_t trials = 0;
  double rmse = 0.0;
  double mean_error = 0.0;
  double emp_frac_mean = 0.0;
  double seconds_per_trial = 0.0;
  std::uint64_t seed_base = 0;
  std::uint64_t failures = 0;
};

/// Runs trials x (estimator, dist, n); the same seeded sample is reused by
/// every estimator of a cell so comparisons are paired. Truth comes from
/// the exact probability vector, never from samples.
std::vector<TrialReport> run_benchmark(const BenchSpec& spec);

/// CSV with the fixed header
/// estimator,dist,N,alpha,n,trials,rmse,mean_error,emp_frac,seconds_per_trial,seed_base
void write_csv(std::ostream& out, const std::vector<TrialReport>& rows);

struct EmpFracPoint {
  std::uint64_t n = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::uint64_t trials = 0;
};

/// EmpFrac sweep without running any estimator (histogram work only).
std::vector<EmpFracPoint> emp_frac_sweep(const SyntheticDist& dist,
                                         std::uint64_t threshold,
                                         const std::vector<std::uint64_t>& sizes,
                                         std::uint64_t trials, std::uint64_t seed_base);

}  // namespace ppml

#endif  // PPML_BENCH_HPP_
