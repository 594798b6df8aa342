#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mteval/dataset.hpp"

namespace mteval {

// Raw binary-classifier counts: the metric predicts positive iff its score
// clears the threshold; the human label comes from the class spec.
struct ConfusionCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;

  long long total() const { return tp + fp + fn + tn; }
};

// Default F-measure beta (1/sqrt(2)): weighs precision twice as much as
// recall, matching F = 1.5*P*R / (0.5*P + R).
inline constexpr double kDefaultBeta = 0.7071067811865476;

struct ClassifySettings {
  ClassSpec spec = ClassSpec::good();
  double beta = kDefaultBeta;
};

// Precision or recall is absent when its denominator is zero (nothing
// predicted positive / no positives in the data).
struct PrPair {
  std::optional<double> precision;
  std::optional<double> recall;
};

struct SystemPr {
  std::string system;
  std::optional<double> precision;
  std::optional<double> recall;
};

// Result of evaluating one metric at one threshold under system grouping:
// P and R are computed per system, averaged over the systems where they are
// defined, and F combines the two averages.
struct ThresholdResult {
  double tau = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f;
  std::vector<SystemPr> per_system;
  int systems_without_precision = 0;
  int systems_without_recall = 0;
  // True when precision was undefined for every system (the metric predicted
  // nothing positive anywhere); P, R and F are then absent.
  bool degenerate = false;
};

ConfusionCounts confusion(const Dataset& ds, const std::string& metric, const std::string& system,
                          double tau, const ClassSpec& spec);

PrPair prf(const ConfusionCounts& counts);

// F_beta on values in [0, 1]. Defined whenever P + R > 0 and both are
// defined; callers pass only defined P/R here.
double f_beta(double precision, double recall, double beta);

ThresholdResult system_grouped_prf(const Dataset& ds, const std::string& metric, double tau,
                                   const ClassifySettings& settings);

// Sorted unique observed scores of the metric; the exhaustive candidate set
// for threshold search (any threshold between two observed scores yields the
// same classification as one of these).
std::vector<double> candidate_thresholds(const Dataset& ds, const std::string& metric);

// Exhaustive search over candidate_thresholds maximizing F; ties on F are
// broken toward the largest threshold. Throws ValidationError when F is
// undefined at every candidate.
ThresholdResult optimize_threshold(const Dataset& ds, const std::string& metric,
                                   const ClassifySettings& settings);

// system_grouped_prf with an externally chosen threshold (e.g. tuned on a
// dev set). tau need not be an observed score.
ThresholdResult evaluate_with_threshold(const Dataset& ds, const std::string& metric, double tau,
                                        const ClassifySettings& settings);

}  // namespace mteval
