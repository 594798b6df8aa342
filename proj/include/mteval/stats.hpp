#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mteval/classify.hpp"
#include "mteval/dataset.hpp"

namespace mteval {

// Per-system Gaussian score generator: each system draws a mean uniformly
// from [mean_low, mean_high], then every segment score is N(mean, stddev^2)
// rounded to the nearest integer. Same seed + same systems/segs = same table,
// on every platform.
struct RandomBaselineParams {
  double mean_low = 0.0;
  double mean_high = 9.0;
  double stddev = 2.0;
  std::uint64_t seed = 1;
};

// Generator identifier recorded in reports so runs state how their synthetic
// scores were drawn.
inline constexpr const char* kRandomAlgorithm =
    "per-system mt19937_64 (splitmix64-of-seed-xor-fnv1a64(system)) + box-muller, "
    "round half away from zero";

ScoreTable random_sysname(const std::vector<std::string>& systems,
                          const std::vector<long long>& segs, const RandomBaselineParams& params,
                          std::map<std::string, double>* drawn_means = nullptr);

// Tie-corrected rank correlation (tau-b). nullopt when either list is
// constant; throws ValidationError on length mismatch or fewer than 2 items.
std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Linear correlation. nullopt when either list has zero variance.
std::optional<double> pearson_rho(std::span<const double> x, std::span<const double> y);

// Pairwise ranking accuracy that rewards predicting ties: a pair counts as
// correct when the metric ties (|dx| <= tie_eps) exactly the pairs the humans
// tie, and otherwise orders them the same way. Human-side ties are exact.
double acc_eq(std::span<const double> x, std::span<const double> y, double tie_eps = 0.0);

struct EpsCalibration {
  double tie_eps = 0.0;
  double accuracy = 0.0;
};

// Exhaustive search for the tie_eps maximizing acc_eq on one pair of lists;
// ties on accuracy resolve to the smallest eps.
EpsCalibration calibrate_tie_eps(std::span<const double> x, std::span<const double> y);

enum class Coefficient { KendallTauB, PearsonRho, AccEq };

struct GroupedCorrelation {
  double value = 0.0;
  int groups_used = 0;
  int groups_skipped = 0;  // fewer than 2 entries, or coefficient undefined
};

// Coefficient computed within each segment group (same source, scores across
// systems) and averaged over the groups where it is defined. Throws
// ValidationError when no group defines it.
GroupedCorrelation segment_grouped_correlation(const Dataset& ds, const std::string& metric,
                                               Coefficient coefficient, double tie_eps = 0.0);

// Grouped acc_eq eps calibration: one eps shared by all groups, chosen to
// maximize the grouped mean accuracy. Candidate set is the observed |dx|
// values (plus 0), subsampled evenly when larger than max_candidates.
EpsCalibration calibrate_grouped_tie_eps(const Dataset& ds, const std::string& metric,
                                         std::size_t max_candidates = 1024);

struct DeltaStats {
  std::vector<double> deltas;  // human score minus class threshold, one per FP
  std::optional<double> mean;
  std::optional<double> stddev;  // sample (n-1); absent when n < 2
  struct Bin {
    double lo = 0.0;
    double hi = 0.0;
    long long count = 0;
  };
  std::vector<Bin> histogram;  // contiguous bins, last one ending at 0
};

// How far below the class threshold the metric's false positives sit at
// threshold tau. Bins are [i*w, (i+1)*w) aligned so the top bin ends at 0.
DeltaStats fp_delta_distribution(const Dataset& ds, const std::string& metric, double tau,
                                 const ClassSpec& spec, double bin_width = 1.0);

}  // namespace mteval
