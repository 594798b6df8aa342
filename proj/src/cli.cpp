#include "mteval/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mteval/classify.hpp"
#include "mteval/errors.hpp"
#include "mteval/ingest.hpp"
#include "mteval/rerank.hpp"
#include "mteval/stats.hpp"
#include "mteval/text_format.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace mteval {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return std::move(buf).str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("cannot write " + path.string());
}

// Tracks every file the command consumed, with a content digest, so the
// report pins down exactly what was evaluated.
struct Inputs {
  json records = json::array();

  std::string load(const std::string& label, const std::string& path) {
    std::string bytes = read_file(path);
    records.push_back(json{{"label", label}, {"path", path}, {"digest", digest_hex(bytes)}});
    return bytes;
  }
};

struct DataOpts {
  std::string mqm_path;
  std::string human_path;
  std::vector<std::string> score_paths;
  std::string join = "strict";
  std::string lp;
};

void add_human_flags(CLI::App* cmd, DataOpts& o) {
  cmd->add_option("--mqm", o.mqm_path, "Error annotation TSV (canonical layout)");
  cmd->add_option("--human-scores", o.human_path, "Precomputed human segment scores TSV");
  cmd->add_option("--lp", o.lp, "Language pair label recorded in the report");
}

void add_metric_flags(CLI::App* cmd, DataOpts& o) {
  cmd->add_option("--scores", o.score_paths,
                  "Metric score TSV, one metric per file (repeatable)");
  cmd->add_option("--join", o.join, "Key join mode")
      ->check(CLI::IsMember({"strict", "intersect"}))
      ->capture_default_str();
}

JoinMode join_mode(const std::string& name) {
  return name == "intersect" ? JoinMode::Intersect : JoinMode::Strict;
}

std::map<SegKey, MqmScore> load_human(const DataOpts& o, Inputs& inputs,
                                      const std::string& label_prefix = "") {
  const bool has_mqm = !o.mqm_path.empty();
  const bool has_scores = !o.human_path.empty();
  if (has_mqm == has_scores) {
    throw ValidationError("provide exactly one of --" + label_prefix + "mqm and --" +
                          label_prefix + "human-scores");
  }
  if (has_mqm) {
    std::istringstream in(inputs.load(label_prefix + "mqm", o.mqm_path));
    return score_annotations(parse_mqm_annotations(in));
  }
  std::istringstream in(inputs.load(label_prefix + "human-scores", o.human_path));
  const ScoreTable table = parse_segment_scores(in);
  std::map<SegKey, MqmScore> human;
  for (const auto& [key, score] : table.scores) human.emplace(key, MqmScore{score});
  return human;
}

std::vector<ScoreTable> load_tables(const std::vector<std::string>& paths, Inputs& inputs,
                                    const std::string& label) {
  std::vector<ScoreTable> tables;
  for (const std::string& path : paths) {
    std::istringstream in(inputs.load(label, path));
    tables.push_back(parse_segment_scores(in));
  }
  return tables;
}

Dataset load_dataset(const DataOpts& o, Inputs& inputs, const std::string& label_prefix = "") {
  if (o.score_paths.empty()) {
    throw ValidationError("at least one --" + label_prefix + "scores file is required");
  }
  const auto human = load_human(o, inputs, label_prefix);
  const auto tables = load_tables(o.score_paths, inputs, label_prefix + "scores");
  return assemble_dataset(human, tables, join_mode(o.join), o.lp);
}

ClassSpec parse_spec(const std::string& raw) {
  const std::string s = lower(trim(raw));
  if (s == "good") return ClassSpec::good();
  if (s == "perfect") return ClassSpec::perfect();
  if (s.rfind("h>=", 0) == 0) {
    if (auto v = parse_double(trim(std::string_view(s).substr(3)))) {
      return ClassSpec::at_least(*v);
    }
  }
  throw ValidationError("bad spec '" + raw + "' (use good, perfect, or h>=<value>)");
}

std::string spec_slug(const ClassSpec& spec) {
  if (spec.name == "good") return "good_vs_bad";
  if (spec.name == "perfect") return "perfect_vs_other";
  std::string slug = "h_ge_";
  for (const char c : format_double(spec.human_threshold)) {
    if (c == '-') {
      slug += 'm';
    } else if (c == '.') {
      slug += 'p';
    } else {
      slug += c;
    }
  }
  return slug;
}

std::string pct(const std::optional<double>& v) {
  return v ? format_fixed(*v * 100.0, 2) : "NA";
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(); }

json dataset_json(const Dataset& ds, const std::string& join) {
  json coverage = json::object();
  for (const auto& [name, c] : ds.coverage) coverage[name] = c;
  return json{{"lang_pair", ds.lang_pair}, {"systems", ds.systems.size()},
              {"segments", ds.segs.size()}, {"translations", ds.human.size()},
              {"join", join},              {"coverage", coverage}};
}

json result_json(const ThresholdResult& r) {
  json per_system = json::array();
  for (const SystemPr& s : r.per_system) {
    per_system.push_back(json{{"system", s.system},
                              {"precision", opt_json(s.precision)},
                              {"recall", opt_json(s.recall)}});
  }
  return json{{"tau", r.tau},
              {"precision", opt_json(r.precision)},
              {"recall", opt_json(r.recall)},
              {"f", opt_json(r.f)},
              {"systems_without_precision", r.systems_without_precision},
              {"systems_without_recall", r.systems_without_recall},
              {"degenerate", r.degenerate},
              {"per_system", per_system}};
}

json tool_json() { return json{{"name", kToolName}, {"version", kToolVersion}}; }

void write_report(const fs::path& out_dir, const json& report) {
  write_file(out_dir / "report.json", report.dump(2) + "\n");
}

// One formatted P/R/F table row; spec-dependent CSVs share this layout.
std::string prf_csv_row(const std::string& metric, const ThresholdResult& r) {
  return metric + "," + format_double(r.tau) + "," + pct(r.precision) + "," + pct(r.recall) +
         "," + pct(r.f) + "\n";
}

struct CommonOpts {
  std::string out = "mteval_out";
  std::string config_path;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  // --config lives on the root app; let it match when typed after the command.
  cmd->fallthrough();
}

void record_config(Inputs& inputs, const CommonOpts& o) {
  if (!o.config_path.empty()) inputs.load("config", o.config_path);
}

// ---------------------------------------------------------------- convert-wmt

struct ConvertOpts : CommonOpts {
  std::string input;
  std::string output;
};

int cmd_convert(const ConvertOpts& o) {
  Inputs inputs;
  record_config(inputs, o);
  std::istringstream in(inputs.load("input", o.input));
  std::ostringstream out;
  const WmtConvertSummary summary = convert_wmt_export(in, out);
  const std::string converted = std::move(out).str();
  write_file(o.output, converted);

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "convert-wmt";
  rep["config"] = json{{"input", o.input}, {"output", o.output}};
  rep["inputs"] = inputs.records;
  rep["outputs"] = json::array(
      {json{{"label", "canonical"}, {"path", o.output}, {"digest", digest_hex(converted)}}});
  rep["summary"] = json{{"rows", summary.rows},
                        {"systems", summary.systems},
                        {"segments", summary.segments},
                        {"dropped_columns", summary.dropped_columns}};
  write_report(o.out, rep);

  std::cout << "converted " << summary.rows << " rows (" << summary.systems << " systems, "
            << summary.segments << " segments) -> " << o.output << "\n";
  return 0;
}

// ------------------------------------------------------------------- classify

struct ClassifyOpts : CommonOpts {
  DataOpts data;
  double tau = 0.0;
  std::vector<std::string> specs{"good", "perfect"};
  double beta = kDefaultBeta;
};

int cmd_classify(const ClassifyOpts& o) {
  Inputs inputs;
  record_config(inputs, o);
  const Dataset ds = load_dataset(o.data, inputs);

  json results = json::array();
  for (const std::string& spec_name : o.specs) {
    const ClassSpec spec = parse_spec(spec_name);
    std::string csv = "metric,tau,precision,recall,f\n";
    json rows = json::array();
    for (const std::string& metric : ds.metric_names()) {
      const ThresholdResult r = evaluate_with_threshold(ds, metric, o.tau, {spec, o.beta});
      csv += prf_csv_row(metric, r);
      json row = result_json(r);
      row["metric"] = metric;
      rows.push_back(std::move(row));
      std::cout << spec_slug(spec) << " " << metric << ": tau=" << format_double(r.tau)
                << " P=" << pct(r.precision) << " R=" << pct(r.recall) << " F=" << pct(r.f)
                << "\n";
    }
    write_file(fs::path(o.out) / "tables" / (spec_slug(spec) + ".csv"), csv);
    results.push_back(json{{"spec", spec.name},
                           {"human_threshold", spec.human_threshold},
                           {"rows", std::move(rows)}});
  }

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "classify";
  rep["config"] = json{{"tau", o.tau}, {"specs", o.specs}, {"beta", o.beta},
                       {"join", o.data.join}};
  rep["inputs"] = inputs.records;
  rep["dataset"] = dataset_json(ds, o.data.join);
  rep["results"] = std::move(results);
  write_report(o.out, rep);
  return 0;
}

// ------------------------------------------------------------------- optimize

struct OptimizeOpts : CommonOpts {
  DataOpts data;
  DataOpts dev;
  std::vector<std::string> specs{"good", "perfect"};
  double beta = kDefaultBeta;
};

int cmd_optimize(const OptimizeOpts& o) {
  Inputs inputs;
  record_config(inputs, o);
  const Dataset ds = load_dataset(o.data, inputs);

  const bool has_dev =
      !o.dev.mqm_path.empty() || !o.dev.human_path.empty() || !o.dev.score_paths.empty();
  std::optional<Dataset> dev;
  if (has_dev) {
    DataOpts dev_opts = o.dev;
    dev_opts.join = o.data.join;
    dev_opts.lp = o.data.lp;
    dev = load_dataset(dev_opts, inputs, "dev-");
  }

  json results = json::array();
  for (const std::string& spec_name : o.specs) {
    const ClassSpec spec = parse_spec(spec_name);
    const ClassifySettings settings{spec, o.beta};
    std::string csv = "metric,tau,precision,recall,f\n";
    json rows = json::array();
    for (const std::string& metric : ds.metric_names()) {
      ThresholdResult r;
      json row;
      if (dev) {
        if (!dev->metrics.count(metric)) {
          throw ValidationError("dev data lacks metric: " + metric);
        }
        const ThresholdResult tuned = optimize_threshold(*dev, metric, settings);
        r = evaluate_with_threshold(ds, metric, tuned.tau, settings);
        row = result_json(r);
        row["threshold_source"] = "dev";
        row["dev"] = json{{"precision", opt_json(tuned.precision)},
                          {"recall", opt_json(tuned.recall)},
                          {"f", opt_json(tuned.f)}};
      } else {
        r = optimize_threshold(ds, metric, settings);
        row = result_json(r);
        row["threshold_source"] = "test";
      }
      csv += prf_csv_row(metric, r);
      row["metric"] = metric;
      rows.push_back(std::move(row));
      std::cout << spec_slug(spec) << " " << metric << ": tau=" << format_double(r.tau)
                << " P=" << pct(r.precision) << " R=" << pct(r.recall) << " F=" << pct(r.f)
                << "\n";
    }
    write_file(fs::path(o.out) / "tables" / (spec_slug(spec) + ".csv"), csv);
    results.push_back(json{{"spec", spec.name},
                           {"human_threshold", spec.human_threshold},
                           {"rows", std::move(rows)}});
  }

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "optimize";
  rep["config"] = json{{"specs", o.specs},
                       {"beta", o.beta},
                       {"join", o.data.join},
                       {"threshold_source", has_dev ? "dev" : "test"}};
  rep["inputs"] = inputs.records;
  rep["dataset"] = dataset_json(ds, o.data.join);
  if (dev) rep["dev_dataset"] = dataset_json(*dev, o.data.join);
  rep["results"] = std::move(results);
  write_report(o.out, rep);
  return 0;
}

// --------------------------------------------------------------- rerank / mbr

struct RerankOpts : CommonOpts {
  DataOpts data;
  double tie_tol = 0.0;
};

json rerank_row_json(const std::string& metric, const RerankReport& r) {
  return json{{"metric", metric},
              {"rrp", r.rrp},
              {"avg_selected_mqm", r.avg_selected_mqm},
              {"segments", r.per_seg.size()}};
}

std::string rerank_csv_row(const std::string& metric, const RerankReport& r) {
  return metric + "," + format_fixed(r.rrp * 100.0, 2) + "," +
         format_fixed(r.avg_selected_mqm, 2) + "," + std::to_string(r.per_seg.size()) + "\n";
}

int cmd_rerank(const RerankOpts& o) {
  Inputs inputs;
  record_config(inputs, o);
  const Dataset ds = load_dataset(o.data, inputs);

  std::string csv = "metric,rrp,avg_selected_mqm,segments\n";
  json rows = json::array();
  for (const std::string& metric : ds.metric_names()) {
    const RerankReport r = rerank_report(ds, metric, o.tie_tol);
    csv += rerank_csv_row(metric, r);
    rows.push_back(rerank_row_json(metric, r));
    std::cout << metric << ": RRP=" << format_fixed(r.rrp * 100.0, 2)
              << " avgMQM=" << format_fixed(r.avg_selected_mqm, 2) << "\n";
  }
  write_file(fs::path(o.out) / "tables" / "rerank.csv", csv);

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "rerank";
  rep["config"] = json{{"tie_tol", o.tie_tol}, {"join", o.data.join}};
  rep["inputs"] = inputs.records;
  rep["dataset"] = dataset_json(ds, o.data.join);
  rep["results"] = std::move(rows);
  write_report(o.out, rep);
  return 0;
}

struct MbrOpts : CommonOpts {
  DataOpts data;  // human side only
  std::string pairwise_path;
  double tie_tol = 0.0;
};

int cmd_mbr(const MbrOpts& o) {
  Inputs inputs;
  record_config(inputs, o);
  const auto human = load_human(o.data, inputs);
  const Dataset ds = dataset_from_human(human, o.data.lp);
  std::istringstream pin(inputs.load("pairwise", o.pairwise_path));
  const PairwiseScoreTable pairwise = parse_pairwise_scores(pin);

  const RerankReport r = mbr_rerank_report(ds, pairwise, o.tie_tol);
  std::string csv = "metric,rrp,avg_selected_mqm,segments\n";
  csv += rerank_csv_row(pairwise.metric_name, r);
  write_file(fs::path(o.out) / "tables" / "rerank.csv", csv);
  std::cout << pairwise.metric_name << " (MBR): RRP=" << format_fixed(r.rrp * 100.0, 2)
            << " avgMQM=" << format_fixed(r.avg_selected_mqm, 2) << "\n";

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "mbr";
  rep["config"] = json{{"tie_tol", o.tie_tol}};
  rep["inputs"] = inputs.records;
  rep["dataset"] = dataset_json(ds, "none");
  json row = rerank_row_json(pairwise.metric_name, r);
  row["self_pairs_ignored"] = pairwise.self_pairs.size();
  rep["results"] = json::array({std::move(row)});
  write_report(o.out, rep);
  return 0;
}

// ------------------------------------------------------------------ correlate

struct CorrelateOpts : CommonOpts {
  DataOpts data;
  std::string coeff = "all";
  double tie_eps = 0.0;
  bool calibrate = false;
  std::size_t eps_candidates = 1024;
};

int cmd_correlate(const CorrelateOpts& o) {
  Inputs inputs;
  record_config(inputs, o);
  const Dataset ds = load_dataset(o.data, inputs);

  std::vector<std::pair<std::string, Coefficient>> coeffs;
  if (o.coeff == "all" || o.coeff == "kendall") coeffs.emplace_back("kendall", Coefficient::KendallTauB);
  if (o.coeff == "all" || o.coeff == "pearson") coeffs.emplace_back("pearson", Coefficient::PearsonRho);
  if (o.coeff == "all" || o.coeff == "acc-eq") coeffs.emplace_back("acc-eq", Coefficient::AccEq);

  std::string csv = "metric,coefficient,value,tie_eps,groups_used,groups_skipped\n";
  json rows = json::array();
  auto add_row = [&](const std::string& metric, const std::string& coeff_name,
                     const GroupedCorrelation& g, const std::optional<double>& eps) {
    csv += metric + "," + coeff_name + "," + format_fixed(g.value, 4) + "," +
           (eps ? format_double(*eps) : std::string()) + "," + std::to_string(g.groups_used) +
           "," + std::to_string(g.groups_skipped) + "\n";
    rows.push_back(json{{"metric", metric},
                        {"coefficient", coeff_name},
                        {"value", g.value},
                        {"tie_eps", opt_json(eps)},
                        {"groups_used", g.groups_used},
                        {"groups_skipped", g.groups_skipped}});
    std::cout << metric << " " << coeff_name << ": " << format_fixed(g.value, 4) << "\n";
  };

  for (const std::string& metric : ds.metric_names()) {
    for (const auto& [name, coeff] : coeffs) {
      const GroupedCorrelation g = segment_grouped_correlation(ds, metric, coeff, o.tie_eps);
      add_row(metric, name, g,
              coeff == Coefficient::AccEq ? std::optional<double>(o.tie_eps) : std::nullopt);
    }
    if (o.calibrate) {
      const EpsCalibration best = calibrate_grouped_tie_eps(ds, metric, o.eps_candidates);
      const GroupedCorrelation g =
          segment_grouped_correlation(ds, metric, Coefficient::AccEq, best.tie_eps);
      add_row(metric, "acc-eq-calibrated", g, best.tie_eps);
    }
  }
  write_file(fs::path(o.out) / "tables" / "correlation.csv", csv);

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "correlate";
  rep["config"] = json{{"coeff", o.coeff},
                       {"tie_eps", o.tie_eps},
                       {"calibrate", o.calibrate},
                       {"eps_candidates", o.eps_candidates},
                       {"join", o.data.join}};
  rep["inputs"] = inputs.records;
  rep["dataset"] = dataset_json(ds, o.data.join);
  rep["results"] = std::move(rows);
  write_report(o.out, rep);
  return 0;
}

// ---------------------------------------------------------------- fp-analysis

struct FpOpts : CommonOpts {
  DataOpts data;
  double tau = 0.0;
  CLI::Option* tau_opt = nullptr;
  std::string spec = "good";
  double beta = kDefaultBeta;
  double bin_width = 1.0;
};

int cmd_fp(const FpOpts& o) {
  Inputs inputs;
  record_config(inputs, o);
  const Dataset ds = load_dataset(o.data, inputs);
  if (ds.metrics.size() != 1) {
    throw ValidationError("fp-analysis expects exactly one --scores table");
  }
  const std::string metric = ds.metric_names().front();
  const ClassSpec spec = parse_spec(o.spec);

  double tau = o.tau;
  std::string tau_source = "given";
  if (!o.tau_opt || o.tau_opt->count() == 0) {
    tau = optimize_threshold(ds, metric, {spec, o.beta}).tau;
    tau_source = "optimized";
  }

  const DeltaStats stats = fp_delta_distribution(ds, metric, tau, spec, o.bin_width);
  std::string csv = "bin_lo,bin_hi,count\n";
  json bins = json::array();
  for (const DeltaStats::Bin& bin : stats.histogram) {
    csv += format_double(bin.lo) + "," + format_double(bin.hi) + "," +
           std::to_string(bin.count) + "\n";
    bins.push_back(json{{"lo", bin.lo}, {"hi", bin.hi}, {"count", bin.count}});
  }
  write_file(fs::path(o.out) / "histogram.csv", csv);

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "fp-analysis";
  rep["config"] = json{{"spec", spec.name},
                       {"human_threshold", spec.human_threshold},
                       {"beta", o.beta},
                       {"bin_width", o.bin_width},
                       {"join", o.data.join}};
  rep["inputs"] = inputs.records;
  rep["dataset"] = dataset_json(ds, o.data.join);
  rep["results"] = json{{"metric", metric},
                        {"tau", tau},
                        {"tau_source", tau_source},
                        {"false_positives", stats.deltas.size()},
                        {"mean_delta", opt_json(stats.mean)},
                        {"stddev_delta", opt_json(stats.stddev)},
                        {"histogram", std::move(bins)}};
  write_report(o.out, rep);

  std::cout << metric << " (" << spec.name << ", tau=" << format_double(tau)
            << "): " << stats.deltas.size() << " false positives";
  if (stats.mean) std::cout << ", mean delta " << format_fixed(*stats.mean, 2);
  std::cout << "\n";
  return 0;
}

// ------------------------------------------------------------ random-baseline

struct RandomOpts : CommonOpts {
  DataOpts data;  // optional grid source
  long long num_systems = 0;
  long long num_segs = 0;
  std::string name = "Random-sysname";
  RandomBaselineParams params;
};

int cmd_random(const RandomOpts& o) {
  Inputs inputs;
  record_config(inputs, o);

  std::vector<std::string> systems;
  std::vector<long long> segs;
  const bool from_data = !o.data.mqm_path.empty() || !o.data.human_path.empty();
  if (from_data) {
    const Dataset ds = dataset_from_human(load_human(o.data, inputs), o.data.lp);
    systems = ds.systems;
    segs = ds.segs;
  } else {
    if (o.num_systems < 1 || o.num_segs < 1) {
      throw ValidationError("provide --mqm/--human-scores or --num-systems and --num-segs");
    }
    const std::size_t width = std::to_string(o.num_systems).size();
    for (long long i = 1; i <= o.num_systems; ++i) {
      std::string id = std::to_string(i);
      systems.push_back("sys" + std::string(width - id.size(), '0') + id);
    }
    for (long long s = 1; s <= o.num_segs; ++s) segs.push_back(s);
  }

  std::map<std::string, double> means;
  ScoreTable table = random_sysname(systems, segs, o.params, &means);
  table.metric_name = o.name;
  std::ostringstream tsv;
  serialize_segment_scores(table, tsv);
  const std::string scores = std::move(tsv).str();
  const fs::path scores_path = fs::path(o.out) / "scores.tsv";
  write_file(scores_path, scores);

  json mean_json = json::object();
  for (const auto& [system, mean] : means) mean_json[system] = mean;

  json rep;
  rep["tool"] = tool_json();
  rep["command"] = "random-baseline";
  rep["config"] = json{{"name", o.name},
                       {"seed", o.params.seed},
                       {"mean_low", o.params.mean_low},
                       {"mean_high", o.params.mean_high},
                       {"stddev", o.params.stddev},
                       {"algorithm", kRandomAlgorithm}};
  rep["inputs"] = inputs.records;
  rep["outputs"] = json::array({json{
      {"label", "scores"}, {"path", scores_path.string()}, {"digest", digest_hex(scores)}}});
  rep["grid"] = json{{"systems", systems.size()}, {"segments", segs.size()}};
  rep["drawn_means"] = std::move(mean_json);
  write_report(o.out, rep);

  std::cout << "wrote " << scores_path.string() << " (" << systems.size() << " systems x "
            << segs.size() << " segments, seed " << o.params.seed << ")\n";
  return 0;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"Interpretable meta-evaluation of machine translation metrics"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.set_config("--config", "",
                 "Read options from a key=value file; command options go under a "
                 "[command] section");
  app.require_subcommand(1);

  std::map<const CLI::App*, std::function<int()>> runners;

  auto convert_opts = std::make_shared<ConvertOpts>();
  {
    CLI::App* cmd = app.add_subcommand("convert-wmt", "Project a WMT annotation export onto the canonical TSV");
    cmd->add_option("--input", convert_opts->input, "WMT-style annotation TSV")->required();
    cmd->add_option("--output", convert_opts->output, "Canonical TSV to write")->required();
    add_common_flags(cmd, *convert_opts);
    runners[cmd] = [convert_opts] { return cmd_convert(*convert_opts); };
  }

  auto classify_opts = std::make_shared<ClassifyOpts>();
  {
    CLI::App* cmd = app.add_subcommand("classify", "Evaluate metrics as classifiers at a fixed threshold");
    add_human_flags(cmd, classify_opts->data);
    add_metric_flags(cmd, classify_opts->data);
    cmd->add_option("--tau", classify_opts->tau, "Metric decision threshold")->required();
    cmd->add_option("--spec", classify_opts->specs, "Class spec: good, perfect, or h>=<value> (repeatable)")
        ->capture_default_str();
    cmd->add_option("--beta", classify_opts->beta, "F-measure beta")->capture_default_str();
    add_common_flags(cmd, *classify_opts);
    runners[cmd] = [classify_opts] { return cmd_classify(*classify_opts); };
  }

  auto optimize_opts = std::make_shared<OptimizeOpts>();
  {
    CLI::App* cmd = app.add_subcommand("optimize", "Pick the F-maximizing threshold per metric");
    add_human_flags(cmd, optimize_opts->data);
    add_metric_flags(cmd, optimize_opts->data);
    cmd->add_option("--dev-mqm", optimize_opts->dev.mqm_path, "Dev-set annotation TSV (tune threshold here)");
    cmd->add_option("--dev-human-scores", optimize_opts->dev.human_path, "Dev-set human scores TSV");
    cmd->add_option("--dev-scores", optimize_opts->dev.score_paths, "Dev-set metric score TSV (repeatable)");
    cmd->add_option("--spec", optimize_opts->specs, "Class spec: good, perfect, or h>=<value> (repeatable)")
        ->capture_default_str();
    cmd->add_option("--beta", optimize_opts->beta, "F-measure beta")->capture_default_str();
    add_common_flags(cmd, *optimize_opts);
    runners[cmd] = [optimize_opts] { return cmd_optimize(*optimize_opts); };
  }

  auto rerank_opts = std::make_shared<RerankOpts>();
  {
    CLI::App* cmd = app.add_subcommand("rerank", "Re-ranking precision per metric");
    add_human_flags(cmd, rerank_opts->data);
    add_metric_flags(cmd, rerank_opts->data);
    cmd->add_option("--tie-tol", rerank_opts->tie_tol, "Metric-side tie tolerance")
        ->capture_default_str();
    add_common_flags(cmd, *rerank_opts);
    runners[cmd] = [rerank_opts] { return cmd_rerank(*rerank_opts); };
  }

  auto mbr_opts = std::make_shared<MbrOpts>();
  {
    CLI::App* cmd = app.add_subcommand("mbr", "Re-ranking precision of MBR over pairwise scores");
    add_human_flags(cmd, mbr_opts->data);
    cmd->add_option("--pairwise", mbr_opts->pairwise_path, "Pairwise score TSV")->required();
    cmd->add_option("--tie-tol", mbr_opts->tie_tol, "Metric-side tie tolerance")
        ->capture_default_str();
    add_common_flags(cmd, *mbr_opts);
    runners[cmd] = [mbr_opts] { return cmd_mbr(*mbr_opts); };
  }

  auto correlate_opts = std::make_shared<CorrelateOpts>();
  {
    CLI::App* cmd = app.add_subcommand("correlate", "Segment-grouped correlation per metric");
    add_human_flags(cmd, correlate_opts->data);
    add_metric_flags(cmd, correlate_opts->data);
    cmd->add_option("--coeff", correlate_opts->coeff, "Coefficient")
        ->check(CLI::IsMember({"all", "kendall", "pearson", "acc-eq"}))
        ->capture_default_str();
    cmd->add_option("--tie-eps", correlate_opts->tie_eps, "Metric-side tie epsilon for acc-eq")
        ->capture_default_str();
    cmd->add_flag("--calibrate-eps", correlate_opts->calibrate,
                  "Also search the acc-eq epsilon maximizing grouped accuracy");
    cmd->add_option("--eps-candidates", correlate_opts->eps_candidates,
                    "Cap on calibration candidates")
        ->capture_default_str();
    add_common_flags(cmd, *correlate_opts);
    runners[cmd] = [correlate_opts] { return cmd_correlate(*correlate_opts); };
  }

  auto fp_opts = std::make_shared<FpOpts>();
  {
    CLI::App* cmd = app.add_subcommand("fp-analysis", "How far below the class threshold false positives sit");
    add_human_flags(cmd, fp_opts->data);
    add_metric_flags(cmd, fp_opts->data);
    fp_opts->tau_opt =
        cmd->add_option("--tau", fp_opts->tau, "Metric threshold (optimized here when omitted)");
    cmd->add_option("--spec", fp_opts->spec, "Class spec: good, perfect, or h>=<value>")
        ->capture_default_str();
    cmd->add_option("--beta", fp_opts->beta, "F-measure beta (for threshold optimization)")
        ->capture_default_str();
    cmd->add_option("--bin-width", fp_opts->bin_width, "Histogram bin width")
        ->capture_default_str();
    add_common_flags(cmd, *fp_opts);
    runners[cmd] = [fp_opts] { return cmd_fp(*fp_opts); };
  }

  auto random_opts = std::make_shared<RandomOpts>();
  {
    CLI::App* cmd = app.add_subcommand("random-baseline", "Generate the seeded per-system random score table");
    add_human_flags(cmd, random_opts->data);
    cmd->add_option("--num-systems", random_opts->num_systems, "Synthetic grid: number of systems");
    cmd->add_option("--num-segs", random_opts->num_segs, "Synthetic grid: number of segments");
    cmd->add_option("--name", random_opts->name, "Metric name for the generated table")
        ->capture_default_str();
    cmd->add_option("--seed", random_opts->params.seed, "Random seed")->capture_default_str();
    cmd->add_option("--mean-low", random_opts->params.mean_low, "Per-system mean, lower bound")
        ->capture_default_str();
    cmd->add_option("--mean-high", random_opts->params.mean_high, "Per-system mean, upper bound")
        ->capture_default_str();
    cmd->add_option("--stddev", random_opts->params.stddev, "Per-segment score stddev")
        ->capture_default_str();
    add_common_flags(cmd, *random_opts);
    runners[cmd] = [random_opts] { return cmd_random(*random_opts); };
  }

  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  const CLI::Option* config_opt = app.get_config_ptr();
  std::string config_path;
  if (config_opt != nullptr && config_opt->count() > 0) {
    config_path = config_opt->as<std::string>();
  }
  for (auto* opts : {static_cast<CommonOpts*>(convert_opts.get()),
                     static_cast<CommonOpts*>(classify_opts.get()),
                     static_cast<CommonOpts*>(optimize_opts.get()),
                     static_cast<CommonOpts*>(rerank_opts.get()),
                     static_cast<CommonOpts*>(mbr_opts.get()),
                     static_cast<CommonOpts*>(correlate_opts.get()),
                     static_cast<CommonOpts*>(fp_opts.get()),
                     static_cast<CommonOpts*>(random_opts.get())}) {
    opts->config_path = config_path;
  }

  try {
    return runners.at(sub)();
  } catch (const IoError& e) {
    std::cerr << kToolName << ": io error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << kToolName << ": parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << kToolName << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << kToolName << ": unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace mteval
