#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mteval/errors.hpp"
#include "mteval/mqm.hpp"

using namespace mteval;

namespace {

ErrorSpan err(Severity sev, const char* category) {
  return ErrorSpan{sev, category, std::nullopt};
}

}  // namespace

TEST_CASE("single-error weights are exact") {
  CHECK(error_penalty(err(Severity::Major, "non-translation")) == -25.0);
  CHECK(error_penalty(err(Severity::Major, "accuracy/mistranslation")) == -5.0);
  CHECK(error_penalty(err(Severity::Minor, "punctuation")) == -0.1);
  CHECK(error_penalty(err(Severity::Minor, "fluency/grammar")) == -1.0);

  std::vector<ErrorSpan> one;
  one.push_back(err(Severity::Major, "non-translation"));
  CHECK(score_mqm(one).value == -25.0);
}

TEST_CASE("category matching is case-insensitive and suffix-based") {
  CHECK(error_penalty(err(Severity::Major, "Accuracy/Non-translation")) == -25.0);
  CHECK(error_penalty(err(Severity::Major, "NON-TRANSLATION")) == -25.0);
  CHECK(error_penalty(err(Severity::Minor, "Fluency/Punctuation")) == -0.1);
  CHECK(error_penalty(err(Severity::Minor, "  punctuation  ")) == -0.1);
  // The special categories only discount their own severity class.
  CHECK(error_penalty(err(Severity::Major, "fluency/punctuation")) == -5.0);
  CHECK(error_penalty(err(Severity::Minor, "accuracy/non-translation")) == -1.0);
  // Prefix or infix occurrences do not count.
  CHECK(error_penalty(err(Severity::Minor, "punctuation/spacing")) == -1.0);
}

TEST_CASE("span offsets never change the penalty") {
  ErrorSpan with_span{Severity::Minor, "punctuation", std::make_pair(3LL, 7LL)};
  CHECK(error_penalty(with_span) == error_penalty(err(Severity::Minor, "punctuation")));
}

TEST_CASE("additive combination stays on the 0.1 grid") {
  std::vector<ErrorSpan> errors{
      err(Severity::Major, "accuracy/mistranslation"),
      err(Severity::Minor, "style/awkward"),
      err(Severity::Minor, "fluency/punctuation"),
  };
  CHECK(score_mqm(errors).value == -6.1);

  // 25 minor punctuation errors: naive double accumulation of -0.1 would
  // drift off -2.5; the tenth-point summation must not.
  std::vector<ErrorSpan> punct(25, err(Severity::Minor, "punctuation"));
  CHECK(score_mqm(punct).value == -2.5);

  CHECK(score_mqm(std::vector<ErrorSpan>{}).value == 0.0);
}

TEST_CASE("aggregate_ratings is the plain mean") {
  std::vector<MqmScore> two{{0.0}, {-1.0}};
  CHECK(aggregate_ratings(two).value == -0.5);
  std::vector<MqmScore> one{{-3.2}};
  CHECK(aggregate_ratings(one).value == -3.2);
  std::vector<MqmScore> none;
  CHECK_THROWS_AS(aggregate_ratings(none), ValidationError);
}

TEST_CASE("binarize boundaries are inclusive") {
  const ClassSpec good = ClassSpec::good();
  const ClassSpec perfect = ClassSpec::perfect();
  CHECK(binarize({0.0}, good));
  CHECK(binarize({-4.0}, good));
  CHECK_FALSE(binarize({-4.1}, good));
  CHECK(binarize({-1.0}, perfect));
  CHECK_FALSE(binarize({-1.1}, perfect));
  CHECK_FALSE(binarize({-25.0}, good));

  // A score that is -4.0 up to accumulated float error still counts.
  CHECK(binarize({-4.0 - 1e-12}, good));
  CHECK(binarize({std::nextafter(-4.0, -5.0)}, good));

  const ClassSpec custom = ClassSpec::at_least(-2.5);
  CHECK(custom.name == "h>=-2.5");
  CHECK(binarize({-2.5}, custom));
  CHECK_FALSE(binarize({-2.6}, custom));
}

TEST_CASE("forty punctuation errors sit exactly on the good boundary") {
  std::vector<ErrorSpan> punct(40, err(Severity::Minor, "punctuation"));
  const MqmScore s = score_mqm(punct);
  CHECK(s.value == -4.0);
  CHECK(binarize(s, ClassSpec::good()));
}

TEST_CASE("random error lists score on the tenth grid and never positive") {
  std::mt19937 rng(2024);
  const char* categories[] = {"accuracy/mistranslation", "non-translation", "punctuation",
                              "fluency/grammar",         "style/awkward",   "terminology"};
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<ErrorSpan> errors;
    const int n = static_cast<int>(rng() % 12);
    double penalty_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      ErrorSpan e{rng() % 2 ? Severity::Major : Severity::Minor, categories[rng() % 6],
                  std::nullopt};
      penalty_sum += error_penalty(e);
      errors.push_back(std::move(e));
    }
    const double total = score_mqm(errors).value;
    CHECK(total <= 0.0);
    CHECK(std::fabs(total - penalty_sum) < 1e-9);
    // Multiple of 0.1: scaling by 10 lands on an integer.
    CHECK(std::fabs(total * 10.0 - std::round(total * 10.0)) < 1e-9);
  }
}
