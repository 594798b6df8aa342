#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mteval/dataset.hpp"

namespace mteval {

// Error annotations grouped by translation, then rater. A rater entry with an
// empty span list is an explicit "no errors found" assessment and scores 0.
struct MqmAnnotations {
  std::map<SegKey, std::map<std::string, std::vector<ErrorSpan>>> by_key;
};

// Canonical annotation TSV. Columns (any order, matched by header name):
//   system  seg_id  rater  severity  category  [span_start  span_end]
// severity is one of major/minor/no-error, case-insensitive. A no-error row
// records the rater's assessment and carries no category.
MqmAnnotations parse_mqm_annotations(std::istream& in);

// Canonical score TSV: metric  system  seg_id  score. One metric per file.
// Optional columns min_score/max_score declare the metric's range.
ScoreTable parse_segment_scores(std::istream& in);

// Canonical pairwise TSV: metric  seg_id  hyp_system  ref_system  score.
PairwiseScoreTable parse_pairwise_scores(std::istream& in);

// Inverse of parse_segment_scores; rows come out in key order with scores
// printed as shortest round-trip decimals.
void serialize_segment_scores(const ScoreTable& table, std::ostream& out);

// Per-rater MQM scoring followed by cross-rater averaging.
std::map<SegKey, MqmScore> score_annotations(const MqmAnnotations& annotations);

enum class JoinMode {
  Strict,     // any table key missing from the human scores is an error
  Intersect,  // keep keys scored by humans and every table
};

// Joins human scores with the given tables onto a common key set. Strict mode
// additionally rejects table keys that humans never scored. The surviving key
// set must be non-empty and tables must not share a metric name.
Dataset assemble_dataset(const std::map<SegKey, MqmScore>& human,
                         const std::vector<ScoreTable>& tables, JoinMode mode,
                         const std::string& lang_pair = {});

// Dataset carrying only human scores (used by pipelines whose metric side is
// pairwise rather than per-segment).
Dataset dataset_from_human(const std::map<SegKey, MqmScore>& human,
                           const std::string& lang_pair = {});

struct WmtConvertSummary {
  std::size_t rows = 0;
  std::size_t systems = 0;
  std::size_t segments = 0;
  std::vector<std::string> dropped_columns;
};

// Projects a WMT-style annotation export (extra doc/source/target columns)
// onto the canonical annotation TSV. Severity and category text pass through
// untouched; only the layout changes.
WmtConvertSummary convert_wmt_export(std::istream& in, std::ostream& out);

}  // namespace mteval
