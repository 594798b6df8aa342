#include "mteval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "mteval/errors.hpp"
#include "mteval/text_format.hpp"

namespace mteval {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits of one engine draw.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller instead of std::normal_distribution: the standard pins down
// mt19937_64 but not the distribution adaptors, and the generated baseline
// must be reproducible across standard libraries.
double unit_normal(std::mt19937_64& rng) {
  double u1 = 0.0;
  do {
    u1 = unit_uniform(rng);
  } while (u1 <= 0.0);
  const double u2 = unit_uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

void check_paired(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("paired lists differ in length");
  if (x.size() < 2) throw ValidationError("need at least 2 paired values");
}

}  // namespace

ScoreTable random_sysname(const std::vector<std::string>& systems,
                          const std::vector<long long>& segs, const RandomBaselineParams& params,
                          std::map<std::string, double>* drawn_means) {
  if (systems.empty() || segs.empty()) {
    throw ValidationError("random baseline needs at least one system and one segment");
  }
  if (!(params.mean_low <= params.mean_high) || !(params.stddev > 0.0)) {
    throw ValidationError("invalid random baseline parameters");
  }
  {
    std::set<std::string> uniq(systems.begin(), systems.end());
    if (uniq.size() != systems.size()) throw ValidationError("duplicate system name");
  }

  ScoreTable table;
  table.metric_name = "Random-sysname";
  for (const std::string& system : systems) {
    // Independent substream per system: reordering or subsetting the system
    // list never changes another system's scores.
    std::mt19937_64 rng(splitmix64(params.seed ^ fnv1a64(system)));
    const double mean =
        params.mean_low + unit_uniform(rng) * (params.mean_high - params.mean_low);
    if (drawn_means) (*drawn_means)[system] = mean;
    for (const long long seg : segs) {
      const double raw = mean + params.stddev * unit_normal(rng);
      table.scores.emplace(SegKey{system, seg}, std::round(raw) + 0.0);  // +0.0 drops -0
    }
  }
  return table;
}

std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  check_paired(x, y);
  const std::size_t n = x.size();
  long long concordant = 0;
  long long discordant = 0;
  long long tied_x = 0;  // pairs tied in x (including both-tied)
  long long tied_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++tied_x;
      if (dy == 0.0) ++tied_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
  const double denom = std::sqrt(static_cast<double>(n0 - tied_x)) *
                       std::sqrt(static_cast<double>(n0 - tied_y));
  if (denom == 0.0) return std::nullopt;
  return static_cast<double>(concordant - discordant) / denom;
}

std::optional<double> pearson_rho(std::span<const double> x, std::span<const double> y) {
  check_paired(x, y);
  const std::size_t n = x.size();
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mean_x;
    const double dy = y[i] - mean_y;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

double acc_eq(std::span<const double> x, std::span<const double> y, double tie_eps) {
  check_paired(x, y);
  if (tie_eps < 0.0) throw ValidationError("negative tie_eps");
  const std::size_t n = x.size();
  long long correct = 0;
  long long total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const bool metric_tie = std::fabs(dx) <= tie_eps;
      const bool human_tie = dy == 0.0;
      ++total;
      if (human_tie) {
        correct += metric_tie ? 1 : 0;
      } else {
        correct += (!metric_tie && (dx > 0.0) == (dy > 0.0)) ? 1 : 0;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(total);
}

EpsCalibration calibrate_tie_eps(std::span<const double> x, std::span<const double> y) {
  check_paired(x, y);
  std::set<double> candidates{0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) candidates.insert(std::fabs(x[i] - x[j]));
  }
  EpsCalibration best{0.0, -1.0};
  for (const double eps : candidates) {  // ascending: ties keep the smallest eps
    const double acc = acc_eq(x, y, eps);
    if (acc > best.accuracy) best = {eps, acc};
  }
  return best;
}

namespace {

struct GroupLists {
  std::vector<double> metric;
  std::vector<double> human;
};

std::vector<GroupLists> grouped_lists(const Dataset& ds, const std::string& metric) {
  const ScoreTable& table = ds.metric(metric);
  std::vector<GroupLists> groups;
  for (const long long seg : ds.segs) {
    GroupLists g;
    for (const std::string& system : ds.systems) {
      auto it = table.scores.find(SegKey{system, seg});
      if (it == table.scores.end()) continue;
      g.metric.push_back(it->second);
      g.human.push_back(ds.human.at(it->first).value);
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

double grouped_acc_eq(const std::vector<GroupLists>& groups, double eps, int* used = nullptr,
                      int* skipped = nullptr) {
  double sum = 0.0;
  int n = 0;
  int skip = 0;
  for (const GroupLists& g : groups) {
    if (g.metric.size() < 2) {
      ++skip;
      continue;
    }
    sum += acc_eq(g.metric, g.human, eps);
    ++n;
  }
  if (used) *used = n;
  if (skipped) *skipped = skip;
  if (n == 0) throw ValidationError("every segment group has fewer than 2 entries");
  return sum / static_cast<double>(n);
}

}  // namespace

GroupedCorrelation segment_grouped_correlation(const Dataset& ds, const std::string& metric,
                                               Coefficient coefficient, double tie_eps) {
  const std::vector<GroupLists> groups = grouped_lists(ds, metric);
  GroupedCorrelation out;
  if (coefficient == Coefficient::AccEq) {
    out.value = grouped_acc_eq(groups, tie_eps, &out.groups_used, &out.groups_skipped);
    return out;
  }
  double sum = 0.0;
  for (const GroupLists& g : groups) {
    if (g.metric.size() < 2) {
      ++out.groups_skipped;
      continue;
    }
    const std::optional<double> value = coefficient == Coefficient::KendallTauB
                                            ? kendall_tau_b(g.metric, g.human)
                                            : pearson_rho(g.metric, g.human);
    if (!value) {
      ++out.groups_skipped;
      continue;
    }
    sum += *value;
    ++out.groups_used;
  }
  if (out.groups_used == 0) {
    throw ValidationError("correlation undefined in every segment group for " + metric);
  }
  out.value = sum / static_cast<double>(out.groups_used);
  return out;
}

EpsCalibration calibrate_grouped_tie_eps(const Dataset& ds, const std::string& metric,
                                         std::size_t max_candidates) {
  if (max_candidates == 0) throw ValidationError("max_candidates must be positive");
  const std::vector<GroupLists> groups = grouped_lists(ds, metric);
  std::set<double> uniq{0.0};
  for (const GroupLists& g : groups) {
    for (std::size_t i = 0; i < g.metric.size(); ++i) {
      for (std::size_t j = i + 1; j < g.metric.size(); ++j) {
        uniq.insert(std::fabs(g.metric[i] - g.metric[j]));
      }
    }
  }
  std::vector<double> candidates(uniq.begin(), uniq.end());
  if (max_candidates == 1) {
    candidates.resize(1);  // keep eps = 0 only
  } else if (candidates.size() > max_candidates) {
    // Even quantile subsample; keeps the endpoints.
    std::vector<double> picked;
    picked.reserve(max_candidates);
    for (std::size_t k = 0; k < max_candidates; ++k) {
      picked.push_back(candidates[k * (candidates.size() - 1) / (max_candidates - 1)]);
    }
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    candidates = std::move(picked);
  }
  EpsCalibration best{0.0, -1.0};
  for (const double eps : candidates) {
    const double acc = grouped_acc_eq(groups, eps);
    if (acc > best.accuracy) best = {eps, acc};
  }
  return best;
}

DeltaStats fp_delta_distribution(const Dataset& ds, const std::string& metric, double tau,
                                 const ClassSpec& spec, double bin_width) {
  if (!(bin_width > 0.0)) throw ValidationError("bin width must be positive");
  const ScoreTable& table = ds.metric(metric);
  DeltaStats out;
  for (const auto& [key, score] : table.scores) {
    if (score < tau) continue;  // predicted negative
    const MqmScore h = ds.human.at(key);
    if (binarize(h, spec)) continue;  // true positive
    out.deltas.push_back(h.value - spec.human_threshold);
  }
  if (out.deltas.empty()) return out;

  double sum = 0.0;
  for (const double d : out.deltas) sum += d;
  out.mean = sum / static_cast<double>(out.deltas.size());
  if (out.deltas.size() > 1) {
    double ss = 0.0;
    for (const double d : out.deltas) ss += (d - *out.mean) * (d - *out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(out.deltas.size() - 1));
  }

  // Every false positive has h strictly below the threshold, so all deltas
  // are negative and the bins run from floor(min/w) up to the bin ending at 0.
  long long lo_idx = 0;
  for (const double d : out.deltas) {
    lo_idx = std::min(lo_idx, static_cast<long long>(std::floor(d / bin_width)));
  }
  out.histogram.assign(static_cast<std::size_t>(-lo_idx), DeltaStats::Bin{});
  for (long long i = lo_idx; i < 0; ++i) {
    DeltaStats::Bin& bin = out.histogram[static_cast<std::size_t>(i - lo_idx)];
    bin.lo = static_cast<double>(i) * bin_width;
    bin.hi = static_cast<double>(i + 1) * bin_width;
  }
  for (const double d : out.deltas) {
    const long long idx = static_cast<long long>(std::floor(d / bin_width));
    ++out.histogram[static_cast<std::size_t>(idx - lo_idx)].count;
  }
  return out;
}

}  // namespace mteval
