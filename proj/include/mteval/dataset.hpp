#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mteval/mqm.hpp"

namespace mteval {

// Identity of one translation: which system produced it, for which source
// segment. Ordered so maps iterate deterministically (system, then seg).
struct SegKey {
  std::string system;
  long long seg = 0;

  auto operator<=>(const SegKey&) const = default;
};

// Per-segment scores of one metric over some set of translations.
struct ScoreTable {
  std::string metric_name;
  std::map<SegKey, double> scores;
  // Declared score range; when present every entry must fall inside it.
  std::optional<std::pair<double, double>> range_meta;
};

// (segment, hypothesis, pseudo-reference) triple for pairwise metric scores.
struct PairKey {
  long long seg = 0;
  std::string hyp_system;
  std::string ref_system;

  auto operator<=>(const PairKey&) const = default;
};

// Pairwise scores of one metric: metric(seg, hyp, ref) where ref is another
// system's translation used as a pseudo-reference.
struct PairwiseScoreTable {
  std::string metric_name;
  std::map<PairKey, double> scores;
  // Self-pairs (hyp == ref) are accepted on parse but never used downstream.
  std::vector<PairKey> self_pairs;
};

// Join of human scores with zero or more metric score tables over a common
// (system x segment) grid. Built by assemble_dataset; treat as immutable.
struct Dataset {
  std::string lang_pair;
  std::vector<std::string> systems;  // sorted, unique
  std::vector<long long> segs;       // sorted, unique
  std::map<SegKey, MqmScore> human;
  std::map<std::string, ScoreTable> metrics;
  // Per input table: |table keys also scored by humans| / |human keys|.
  std::map<std::string, double> coverage;

  const ScoreTable& metric(const std::string& name) const;
  std::vector<std::string> metric_names() const;
};

}  // namespace mteval
