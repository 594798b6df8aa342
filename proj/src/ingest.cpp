#include "mteval/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "mteval/errors.hpp"
#include "mteval/text_format.hpp"

namespace mteval {

namespace {

// Header-indexed row access. Column names are matched case-insensitively;
// columns the caller never asks for are ignored.
struct Header {
  std::map<std::string, std::size_t> index;
  std::vector<std::string> names;  // original spelling, file order

  static Header read(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      auto fields = split_tsv_line(line);
      if (fields.size() == 1 && trim(fields[0]).empty()) continue;
      Header h;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        h.names.emplace_back(fields[i]);
        h.index.emplace(lower(trim(fields[i])), i);
      }
      return h;
    }
    throw ParseError("no header");
  }

  std::size_t require(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw ParseError("missing column: " + name, 1);
    return it->second;
  }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  std::size_t width() const { return names.size(); }
};

// Iterates data rows, skipping blank lines and checking the column count.
template <typename Fn>
void for_each_row(std::istream& in, const Header& header, Fn&& fn) {
  std::string line;
  std::size_t lineno = 1;  // header consumed already
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_tsv_line(line);
    if (fields.size() == 1 && trim(fields[0]).empty()) continue;
    if (fields.size() != header.width()) {
      throw ParseError("expected " + std::to_string(header.width()) + " columns, got " +
                           std::to_string(fields.size()),
                       lineno);
    }
    fn(fields, lineno);
  }
}

long long parse_seg_id(std::string_view text, std::size_t lineno) {
  auto seg = parse_int(trim(text));
  if (!seg || *seg < 0) throw ParseError("invalid seg_id: '" + std::string(text) + "'", lineno);
  return *seg;
}

std::string parse_system(std::string_view text, std::size_t lineno) {
  std::string sys(trim(text));
  if (sys.empty()) throw ParseError("empty system name", lineno);
  return sys;
}

double parse_score_field(std::string_view text, std::size_t lineno) {
  auto value = parse_double(trim(text));
  if (!value) throw ParseError("invalid score: '" + std::string(text) + "'", lineno);
  if (!std::isfinite(*value)) throw ParseError("non-finite score", lineno);
  return *value;
}

}  // namespace

MqmAnnotations parse_mqm_annotations(std::istream& in) {
  Header header = Header::read(in);
  const std::size_t c_system = header.require("system");
  const std::size_t c_seg = header.require("seg_id");
  const std::size_t c_rater = header.require("rater");
  const std::size_t c_severity = header.require("severity");
  const std::size_t c_category = header.require("category");
  const auto c_span_start = header.find("span_start");
  const auto c_span_end = header.find("span_end");

  MqmAnnotations out;
  for_each_row(in, header, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
    SegKey key{parse_system(f[c_system], lineno), parse_seg_id(f[c_seg], lineno)};
    std::string rater(trim(f[c_rater]));
    if (rater.empty()) throw ParseError("empty rater", lineno);

    auto& spans = out.by_key[key][rater];
    const std::string severity = lower(trim(f[c_severity]));
    if (severity == "no-error") return;  // explicit zero-penalty assessment

    ErrorSpan err;
    if (severity == "major") {
      err.severity = Severity::Major;
    } else if (severity == "minor") {
      err.severity = Severity::Minor;
    } else {
      throw ParseError("unknown severity: '" + std::string(f[c_severity]) + "'", lineno);
    }
    err.category = std::string(trim(f[c_category]));
    if (err.category.empty()) throw ParseError("empty category", lineno);
    if (c_span_start && c_span_end) {
      std::string_view s = trim(f[*c_span_start]);
      std::string_view e = trim(f[*c_span_end]);
      if (!s.empty() && !e.empty()) {
        auto sv = parse_int(s);
        auto ev = parse_int(e);
        if (!sv || !ev) throw ParseError("invalid span offsets", lineno);
        err.span = std::make_pair(*sv, *ev);
      }
    }
    spans.push_back(std::move(err));
  });
  return out;
}

ScoreTable parse_segment_scores(std::istream& in) {
  Header header = Header::read(in);
  const std::size_t c_metric = header.require("metric");
  const std::size_t c_system = header.require("system");
  const std::size_t c_seg = header.require("seg_id");
  const std::size_t c_score = header.require("score");
  const auto c_min = header.find("min_score");
  const auto c_max = header.find("max_score");
  if (c_min.has_value() != c_max.has_value()) {
    throw ParseError("min_score and max_score must be declared together", 1);
  }

  ScoreTable table;
  for_each_row(in, header, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
    std::string metric(trim(f[c_metric]));
    if (metric.empty()) throw ParseError("empty metric name", lineno);
    if (table.metric_name.empty()) {
      table.metric_name = metric;
    } else if (metric != table.metric_name) {
      throw ParseError("mixed metric names: '" + table.metric_name + "' vs '" + metric + "'",
                       lineno);
    }

    SegKey key{parse_system(f[c_system], lineno), parse_seg_id(f[c_seg], lineno)};
    const double score = parse_score_field(f[c_score], lineno);
    if (!table.scores.emplace(key, score).second) {
      throw ParseError("duplicate score for " + key.system + ":" + std::to_string(key.seg),
                       lineno);
    }

    if (c_min) {
      const double lo = parse_score_field(f[*c_min], lineno);
      const double hi = parse_score_field(f[*c_max], lineno);
      if (lo > hi) throw ParseError("min_score exceeds max_score", lineno);
      if (table.range_meta && (table.range_meta->first != lo || table.range_meta->second != hi)) {
        throw ParseError("inconsistent declared score range", lineno);
      }
      table.range_meta = std::make_pair(lo, hi);
      if (score < lo || score > hi) throw ParseError("score outside declared range", lineno);
    }
  });
  return table;
}

PairwiseScoreTable parse_pairwise_scores(std::istream& in) {
  Header header = Header::read(in);
  const std::size_t c_metric = header.require("metric");
  const std::size_t c_seg = header.require("seg_id");
  const std::size_t c_hyp = header.require("hyp_system");
  const std::size_t c_ref = header.require("ref_system");
  const std::size_t c_score = header.require("score");

  PairwiseScoreTable table;
  for_each_row(in, header, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
    std::string metric(trim(f[c_metric]));
    if (metric.empty()) throw ParseError("empty metric name", lineno);
    if (table.metric_name.empty()) {
      table.metric_name = metric;
    } else if (metric != table.metric_name) {
      throw ParseError("mixed metric names: '" + table.metric_name + "' vs '" + metric + "'",
                       lineno);
    }

    PairKey key;
    key.seg = parse_seg_id(f[c_seg], lineno);
    key.hyp_system = parse_system(f[c_hyp], lineno);
    key.ref_system = parse_system(f[c_ref], lineno);
    const double score = parse_score_field(f[c_score], lineno);
    if (!table.scores.emplace(key, score).second) {
      throw ParseError("duplicate pair " + std::to_string(key.seg) + ":" + key.hyp_system + ":" +
                           key.ref_system,
                       lineno);
    }
    if (key.hyp_system == key.ref_system) table.self_pairs.push_back(key);
  });
  return table;
}

void serialize_segment_scores(const ScoreTable& table, std::ostream& out) {
  out << "metric\tsystem\tseg_id\tscore\n";
  for (const auto& [key, score] : table.scores) {
    out << table.metric_name << '\t' << key.system << '\t' << key.seg << '\t'
        << format_double(score) << '\n';
  }
}

std::map<SegKey, MqmScore> score_annotations(const MqmAnnotations& annotations) {
  std::map<SegKey, MqmScore> out;
  for (const auto& [key, raters] : annotations.by_key) {
    std::vector<MqmScore> per_rater;
    per_rater.reserve(raters.size());
    for (const auto& [rater, spans] : raters) per_rater.push_back(score_mqm(spans));
    out.emplace(key, aggregate_ratings(per_rater));
  }
  return out;
}

namespace {

void validate_table(const ScoreTable& table) {
  const bool ranged = table.range_meta.has_value();
  double lo = 0.0;
  double hi = 0.0;
  if (ranged) {
    lo = table.range_meta->first;
    hi = table.range_meta->second;
    if (lo > hi) throw ValidationError("invalid declared range for " + table.metric_name);
  }
  for (const auto& [key, score] : table.scores) {
    if (!std::isfinite(score)) {
      throw ValidationError("non-finite score: " + table.metric_name + " " + key.system + ":" +
                            std::to_string(key.seg));
    }
    if (ranged && (score < lo || score > hi)) {
      throw ValidationError("score outside declared range: " + table.metric_name + " " +
                            key.system + ":" + std::to_string(key.seg));
    }
  }
}

std::string describe_keys(const std::vector<SegKey>& keys) {
  std::ostringstream msg;
  const std::size_t shown = std::min<std::size_t>(keys.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) msg << ", ";
    msg << keys[i].system << ":" << keys[i].seg;
  }
  if (keys.size() > shown) msg << ", and " << keys.size() - shown << " more";
  return msg.str();
}

}  // namespace

Dataset assemble_dataset(const std::map<SegKey, MqmScore>& human,
                         const std::vector<ScoreTable>& tables, JoinMode mode,
                         const std::string& lang_pair) {
  if (human.empty()) throw ValidationError("no human scores");
  if (tables.empty()) throw ValidationError("no score tables");

  std::set<std::string> names;
  for (const ScoreTable& table : tables) {
    if (table.metric_name.empty()) throw ValidationError("score table without metric name");
    if (!names.insert(table.metric_name).second) {
      throw ValidationError("duplicate metric table: " + table.metric_name);
    }
    validate_table(table);
    if (mode == JoinMode::Strict) {
      std::vector<SegKey> missing;
      for (const auto& [key, score] : table.scores) {
        if (!human.count(key)) missing.push_back(key);
      }
      if (!missing.empty()) {
        throw ValidationError(table.metric_name + " scores " + std::to_string(missing.size()) +
                              " translations with no human score: " + describe_keys(missing));
      }
    }
  }

  std::set<SegKey> keys;
  for (const auto& [key, score] : human) keys.insert(key);
  for (const ScoreTable& table : tables) {
    for (auto it = keys.begin(); it != keys.end();) {
      if (table.scores.count(*it)) {
        ++it;
      } else {
        it = keys.erase(it);
      }
    }
  }
  if (keys.empty()) {
    throw ValidationError("no translation is covered by the human scores and every score table");
  }

  Dataset ds;
  ds.lang_pair = lang_pair;
  std::set<std::string> systems;
  std::set<long long> segs;
  for (const SegKey& key : keys) {
    ds.human.emplace(key, human.at(key));
    systems.insert(key.system);
    segs.insert(key.seg);
  }
  ds.systems.assign(systems.begin(), systems.end());
  ds.segs.assign(segs.begin(), segs.end());

  for (const ScoreTable& table : tables) {
    ScoreTable kept;
    kept.metric_name = table.metric_name;
    kept.range_meta = table.range_meta;
    std::size_t overlap = 0;
    for (const auto& [key, score] : table.scores) {
      if (human.count(key)) ++overlap;
      if (keys.count(key)) kept.scores.emplace(key, score);
    }
    ds.coverage[table.metric_name] =
        static_cast<double>(overlap) / static_cast<double>(human.size());
    ds.metrics.emplace(table.metric_name, std::move(kept));
  }
  return ds;
}

Dataset dataset_from_human(const std::map<SegKey, MqmScore>& human, const std::string& lang_pair) {
  if (human.empty()) throw ValidationError("no human scores");
  Dataset ds;
  ds.lang_pair = lang_pair;
  ds.human = human;
  std::set<std::string> systems;
  std::set<long long> segs;
  for (const auto& [key, score] : human) {
    systems.insert(key.system);
    segs.insert(key.seg);
  }
  ds.systems.assign(systems.begin(), systems.end());
  ds.segs.assign(segs.begin(), segs.end());
  return ds;
}

WmtConvertSummary convert_wmt_export(std::istream& in, std::ostream& out) {
  Header header = Header::read(in);
  static const char* kCanonical[] = {"system", "seg_id", "rater", "severity", "category"};
  std::vector<std::size_t> cols;
  for (const char* name : kCanonical) {
    auto c = header.find(name);
    if (!c) throw ParseError(std::string("unrecognized layout: missing column '") + name + "'", 1);
    cols.push_back(*c);
  }

  WmtConvertSummary summary;
  std::set<std::size_t> kept(cols.begin(), cols.end());
  for (std::size_t i = 0; i < header.width(); ++i) {
    if (!kept.count(i)) summary.dropped_columns.push_back(header.names[i]);
  }

  std::set<std::string> systems;
  std::set<long long> segs;
  out << "system\tseg_id\trater\tseverity\tcategory\n";
  for_each_row(in, header, [&](const std::vector<std::string_view>& f, std::size_t lineno) {
    const long long seg = parse_seg_id(f[cols[1]], lineno);
    std::string system(trim(f[cols[0]]));
    if (system.empty()) throw ParseError("empty system name", lineno);
    systems.insert(system);
    segs.insert(seg);
    ++summary.rows;
    out << system << '\t' << seg << '\t' << trim(f[cols[2]]) << '\t' << trim(f[cols[3]]) << '\t'
        << trim(f[cols[4]]) << '\n';
  });
  summary.systems = systems.size();
  summary.segments = segs.size();
  return summary;
}

}  // namespace mteval
