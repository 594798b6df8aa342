#include "mteval/mqm.hpp"

#include <string_view>

#include "mteval/errors.hpp"
#include "mteval/text_format.hpp"

namespace mteval {

namespace {

bool matches_token(std::string_view category, std::string_view token) {
  std::string c = lower(trim(category));
  if (c == token) return true;
  return c.size() > token.size() && c.compare(c.size() - token.size(), token.size(), token) == 0;
}

// Penalties in tenths of a point, so a segment score is summed in integers
// and divided exactly once. Keeps -0.1 accumulation from drifting off the
// 0.1 grid that the class boundaries sit on.
long long penalty_tenths(const ErrorSpan& err) {
  if (err.severity == Severity::Major) {
    return matches_token(err.category, "non-translation") ? -250 : -50;
  }
  return matches_token(err.category, "punctuation") ? -1 : -10;
}

}  // namespace

ClassSpec ClassSpec::at_least(double threshold) {
  return {"h>=" + format_double(threshold), threshold};
}

double error_penalty(const ErrorSpan& err) {
  return static_cast<double>(penalty_tenths(err)) / 10.0;
}

MqmScore score_mqm(std::span<const ErrorSpan> errors) {
  long long tenths = 0;
  for (const ErrorSpan& err : errors) tenths += penalty_tenths(err);
  return MqmScore{static_cast<double>(tenths) / 10.0};
}

MqmScore aggregate_ratings(std::span<const MqmScore> per_rater) {
  if (per_rater.empty()) throw ValidationError("no ratings");
  double sum = 0.0;
  for (const MqmScore& s : per_rater) sum += s.value;
  return MqmScore{sum / static_cast<double>(per_rater.size())};
}

bool binarize(MqmScore score, const ClassSpec& spec) {
  return score.value >= spec.human_threshold - kScoreEps;
}

}  // namespace mteval
