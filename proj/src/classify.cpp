#include "mteval/classify.hpp"

#include <algorithm>
#include <set>

#include "mteval/errors.hpp"

namespace mteval {

namespace {

// Flat per-system view of one metric's scores with precomputed human labels;
// both the single-threshold evaluation and the optimizer sweep run on this,
// so they produce bit-identical numbers.
struct SystemView {
  std::string system;
  std::vector<double> scores;
  std::vector<char> positive;
  long long npos = 0;
};

std::vector<SystemView> build_views(const Dataset& ds, const std::string& metric,
                                    const ClassSpec& spec) {
  const ScoreTable& table = ds.metric(metric);
  std::vector<SystemView> views;
  for (const auto& [key, score] : table.scores) {  // key order: systems are contiguous
    if (views.empty() || views.back().system != key.system) {
      views.push_back(SystemView{key.system, {}, {}, 0});
    }
    SystemView& v = views.back();
    v.scores.push_back(score);
    const bool pos = binarize(ds.human.at(key), spec);
    v.positive.push_back(pos ? 1 : 0);
    if (pos) ++v.npos;
  }
  return views;
}

ThresholdResult eval_views(const std::vector<SystemView>& views, double tau,
                           const ClassifySettings& settings) {
  ThresholdResult res;
  res.tau = tau;
  double p_sum = 0.0;
  double r_sum = 0.0;
  int p_n = 0;
  int r_n = 0;
  for (const SystemView& v : views) {
    long long tp = 0;
    long long predicted = 0;
    for (std::size_t i = 0; i < v.scores.size(); ++i) {
      if (v.scores[i] >= tau) {
        ++predicted;
        if (v.positive[i]) ++tp;
      }
    }
    SystemPr pr{v.system, std::nullopt, std::nullopt};
    if (predicted > 0) {
      pr.precision = static_cast<double>(tp) / static_cast<double>(predicted);
      p_sum += *pr.precision;
      ++p_n;
    } else {
      ++res.systems_without_precision;
    }
    if (v.npos > 0) {
      pr.recall = static_cast<double>(tp) / static_cast<double>(v.npos);
      r_sum += *pr.recall;
      ++r_n;
    } else {
      ++res.systems_without_recall;
    }
    res.per_system.push_back(std::move(pr));
  }
  if (p_n > 0) res.precision = p_sum / p_n;
  if (r_n > 0) res.recall = r_sum / r_n;
  res.degenerate = (p_n == 0);
  if (res.precision && res.recall && *res.precision + *res.recall > 0.0) {
    res.f = f_beta(*res.precision, *res.recall, settings.beta);
  }
  return res;
}

}  // namespace

ConfusionCounts confusion(const Dataset& ds, const std::string& metric, const std::string& system,
                          double tau, const ClassSpec& spec) {
  if (!std::binary_search(ds.systems.begin(), ds.systems.end(), system)) {
    throw ValidationError("unknown system: " + system);
  }
  const ScoreTable& table = ds.metric(metric);
  ConfusionCounts c;
  for (const auto& [key, score] : table.scores) {
    if (key.system != system) continue;
    const bool predicted = score >= tau;
    const bool actual = binarize(ds.human.at(key), spec);
    if (predicted && actual) ++c.tp;
    if (predicted && !actual) ++c.fp;
    if (!predicted && actual) ++c.fn;
    if (!predicted && !actual) ++c.tn;
  }
  return c;
}

PrPair prf(const ConfusionCounts& counts) {
  PrPair out;
  if (counts.tp + counts.fp > 0) {
    out.precision = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fp);
  }
  if (counts.tp + counts.fn > 0) {
    out.recall = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  }
  return out;
}

double f_beta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

ThresholdResult system_grouped_prf(const Dataset& ds, const std::string& metric, double tau,
                                   const ClassifySettings& settings) {
  return eval_views(build_views(ds, metric, settings.spec), tau, settings);
}

std::vector<double> candidate_thresholds(const Dataset& ds, const std::string& metric) {
  const ScoreTable& table = ds.metric(metric);
  std::set<double> uniq;
  for (const auto& [key, score] : table.scores) uniq.insert(score);
  return std::vector<double>(uniq.begin(), uniq.end());
}

ThresholdResult optimize_threshold(const Dataset& ds, const std::string& metric,
                                   const ClassifySettings& settings) {
  const std::vector<double> candidates = candidate_thresholds(ds, metric);
  if (candidates.empty()) throw ValidationError("no scores for metric: " + metric);

  const std::vector<SystemView> views = build_views(ds, metric, settings.spec);
  std::optional<ThresholdResult> best;
  for (const double tau : candidates) {  // ascending, so >= keeps the largest tying tau
    ThresholdResult res = eval_views(views, tau, settings);
    if (!res.f) continue;
    if (!best || *res.f >= *best->f) best = std::move(res);
  }
  if (!best) {
    throw ValidationError("F undefined at every candidate threshold for " + metric + " (" +
                          settings.spec.name + ")");
  }
  return *best;
}

ThresholdResult evaluate_with_threshold(const Dataset& ds, const std::string& metric, double tau,
                                        const ClassifySettings& settings) {
  return system_grouped_prf(ds, metric, tau, settings);
}

}  // namespace mteval
