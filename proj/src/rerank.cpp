#include "mteval/rerank.hpp"

#include <algorithm>

#include "mteval/errors.hpp"

namespace mteval {

std::set<std::string> best_set(const std::map<std::string, double>& scores, double tie_tol) {
  if (scores.empty()) throw ValidationError("best_set of empty score map");
  if (tie_tol < 0.0) throw ValidationError("negative tie tolerance");
  double max_score = scores.begin()->second;
  for (const auto& [name, score] : scores) max_score = std::max(max_score, score);
  std::set<std::string> best;
  for (const auto& [name, score] : scores) {
    if (score >= max_score - tie_tol) best.insert(name);
  }
  return best;
}

namespace {

SegPrecision score_group(const SegGroup& group, double tie_tol) {
  if (group.entries.empty()) throw ValidationError("empty segment group");
  std::map<std::string, double> metric_scores;
  std::map<std::string, double> human_scores;
  for (const SegEntry& e : group.entries) {
    if (!metric_scores.emplace(e.system, e.metric_score).second) {
      throw ValidationError("duplicate system in segment group: " + e.system);
    }
    human_scores.emplace(e.system, e.human.value);
  }
  const std::set<std::string> metric_best = best_set(metric_scores, tie_tol);
  const std::set<std::string> human_best = best_set(human_scores, 0.0);

  SegPrecision out;
  out.seg = group.seg;
  out.metric_best = metric_best.size();
  out.human_best = human_best.size();
  std::size_t hits = 0;
  double selected_sum = 0.0;
  for (const std::string& system : metric_best) {
    if (human_best.count(system)) ++hits;
    selected_sum += human_scores.at(system);
  }
  out.precision = static_cast<double>(hits) / static_cast<double>(metric_best.size());
  out.selected_mqm = selected_sum / static_cast<double>(metric_best.size());
  return out;
}

RerankReport report_from_groups(const std::vector<SegGroup>& groups, double tie_tol) {
  if (groups.empty()) throw ValidationError("no segment groups");
  RerankReport report;
  double rrp_sum = 0.0;
  double mqm_sum = 0.0;
  for (const SegGroup& group : groups) {
    SegPrecision sp = score_group(group, tie_tol);
    rrp_sum += sp.precision;
    mqm_sum += sp.selected_mqm;
    report.per_seg.push_back(sp);
  }
  report.rrp = rrp_sum / static_cast<double>(groups.size());
  report.avg_selected_mqm = mqm_sum / static_cast<double>(groups.size());
  return report;
}

}  // namespace

double rrp_segment(const SegGroup& group, double tie_tol) {
  return score_group(group, tie_tol).precision;
}

SegGroup seg_group(const Dataset& ds, const std::string& metric, long long seg) {
  if (!std::binary_search(ds.segs.begin(), ds.segs.end(), seg)) {
    throw ValidationError("unknown seg: " + std::to_string(seg));
  }
  const ScoreTable& table = ds.metric(metric);
  SegGroup group;
  group.seg = seg;
  for (const std::string& system : ds.systems) {
    auto it = table.scores.find(SegKey{system, seg});
    if (it == table.scores.end()) continue;
    group.entries.push_back(SegEntry{system, it->second, ds.human.at(it->first)});
  }
  return group;
}

RerankReport rerank_report(const Dataset& ds, const std::string& metric, double tie_tol) {
  std::vector<SegGroup> groups;
  groups.reserve(ds.segs.size());
  for (const long long seg : ds.segs) groups.push_back(seg_group(ds, metric, seg));
  return report_from_groups(groups, tie_tol);
}

std::map<std::string, double> mbr_utilities(const PairwiseScoreTable& pairwise, long long seg,
                                            const std::vector<std::string>& systems) {
  if (systems.size() < 2) {
    throw ValidationError("MBR needs at least 2 candidates at seg " + std::to_string(seg));
  }
  std::map<std::string, double> utilities;
  for (const std::string& hyp : systems) {
    double sum = 0.0;
    for (const std::string& ref : systems) {
      if (ref == hyp) continue;
      auto it = pairwise.scores.find(PairKey{seg, hyp, ref});
      if (it == pairwise.scores.end()) {
        throw ValidationError("missing pair " + std::to_string(seg) + ":" + hyp + ":" + ref);
      }
      sum += it->second;
    }
    utilities.emplace(hyp, sum / static_cast<double>(systems.size() - 1));
  }
  return utilities;
}

RerankReport mbr_rerank_report(const Dataset& ds, const PairwiseScoreTable& pairwise,
                               double tie_tol) {
  std::vector<SegGroup> groups;
  groups.reserve(ds.segs.size());
  for (const long long seg : ds.segs) {
    std::vector<std::string> systems;
    for (const std::string& system : ds.systems) {
      if (ds.human.count(SegKey{system, seg})) systems.push_back(system);
    }
    const std::map<std::string, double> utilities = mbr_utilities(pairwise, seg, systems);
    SegGroup group;
    group.seg = seg;
    for (const std::string& system : systems) {
      group.entries.push_back(
          SegEntry{system, utilities.at(system), ds.human.at(SegKey{system, seg})});
    }
    groups.push_back(std::move(group));
  }
  return report_from_groups(groups, tie_tol);
}

}  // namespace mteval
