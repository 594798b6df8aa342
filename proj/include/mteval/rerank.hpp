#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mteval/dataset.hpp"

namespace mteval {

// One candidate translation inside a segment group.
struct SegEntry {
  std::string system;
  double metric_score = 0.0;
  MqmScore human;
};

// All candidate translations of one source segment, with one metric's scores
// attached.
struct SegGroup {
  long long seg = 0;
  std::vector<SegEntry> entries;
};

struct SegPrecision {
  long long seg = 0;
  double precision = 0.0;
  std::size_t metric_best = 0;  // |argmax set of the metric|
  std::size_t human_best = 0;   // |argmax set of the human scores|
  double selected_mqm = 0.0;    // mean human score over the metric's argmax set
};

// Segment-averaged re-ranking quality of one metric: how often the
// translation(s) it would pick are also human argmax picks.
struct RerankReport {
  double rrp = 0.0;
  double avg_selected_mqm = 0.0;
  std::vector<SegPrecision> per_seg;
};

// Keys whose value is within tie_tol of the maximum. tie_tol = 0 keeps exact
// ties only. Throws ValidationError on an empty map or negative tolerance.
std::set<std::string> best_set(const std::map<std::string, double>& scores, double tie_tol = 0.0);

// |metric argmax ∩ human argmax| / |metric argmax| for one segment group.
// tie_tol widens the metric's argmax set only; human ties are always exact.
double rrp_segment(const SegGroup& group, double tie_tol = 0.0);

// Group for one segment, drawing metric scores from the named table.
SegGroup seg_group(const Dataset& ds, const std::string& metric, long long seg);

// rrp_segment over every segment of the dataset; rrp and avg_selected_mqm are
// unweighted means over segments.
RerankReport rerank_report(const Dataset& ds, const std::string& metric, double tie_tol = 0.0);

// MBR utility of each candidate at one segment: mean pairwise score against
// every other candidate used as pseudo-reference. All off-diagonal pairs must
// be present.
std::map<std::string, double> mbr_utilities(const PairwiseScoreTable& pairwise, long long seg,
                                            const std::vector<std::string>& systems);

// Re-ranking report where the metric side is MBR utility derived from a
// pairwise score table instead of a per-segment table.
RerankReport mbr_rerank_report(const Dataset& ds, const PairwiseScoreTable& pairwise,
                               double tie_tol = 0.0);

}  // namespace mteval
