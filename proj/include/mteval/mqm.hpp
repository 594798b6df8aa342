#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>

#include <vector>

namespace mteval {

enum class Severity { Major, Minor };

// One annotated translation error. Span offsets are informational only and
// never affect scoring.
struct ErrorSpan {
  Severity severity = Severity::Minor;
  std::string category;
  std::optional<std::pair<long long, long long>> span;
};

// Scalar segment-level quality score in penalty units. 0 means "no errors
// found"; more negative is worse.
struct MqmScore {
  double value = 0.0;
};

// A binary labeling rule over human scores: a translation is positive iff
// score >= human_threshold.
struct ClassSpec {
  std::string name;
  double human_threshold = 0.0;

  static ClassSpec good() { return {"good", -4.0}; }
  static ClassSpec perfect() { return {"perfect", -1.0}; }
  static ClassSpec at_least(double threshold);
};

// Tolerance for human-threshold comparisons. Scores are multiples of 0.1, so
// the exact class boundaries (e.g. -4.0) must not flip on float noise.
inline constexpr double kScoreEps = 1e-9;

// Penalty for a single error under the severity/category weighting:
//   Major, category "non-translation"  -> -25
//   Major, anything else               ->  -5
//   Minor, category "punctuation"      ->  -0.1
//   Minor, anything else               ->  -1
// Category matching is case-insensitive and accepts hierarchical names that
// end in the special token ("fluency/punctuation" counts as punctuation).
double error_penalty(const ErrorSpan& err);

// Sum of per-error penalties over one rater's annotations for one translation.
// Empty list -> 0 (a genuine "no errors" score).
MqmScore score_mqm(std::span<const ErrorSpan> errors);

// Mean of several raters' scores for the same translation. Throws
// ValidationError when the list is empty.
MqmScore aggregate_ratings(std::span<const MqmScore> per_rater);

// True iff the score clears spec.human_threshold (within kScoreEps).
bool binarize(MqmScore score, const ClassSpec& spec);

}  // namespace mteval
