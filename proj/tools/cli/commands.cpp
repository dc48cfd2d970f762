// Copyright (c) 2026, The pastekit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "pastekit/composer.hpp"
#include "pastekit/dataset.hpp"
#include "pastekit/filter.hpp"
#include "pastekit/pool.hpp"
#include "pastekit/retention.hpp"
#include "pastekit/scale_stats.hpp"
#include "pastekit/synth.hpp"
#include "pastekit/validate.hpp"

namespace pastekit::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

class Logger {
 public:
  Logger(std::ostream& sink, LogLevel level) : sink_(sink), level_(level) {}

  void set_level(LogLevel level) { level_ = level; }
  void error(const std::string& msg) const { write(LogLevel::Error, "error", msg); }
  void warn(const std::string& msg) const { write(LogLevel::Warn, "warn", msg); }
  void info(const std::string& msg) const { write(LogLevel::Info, "info", msg); }
  void debug(const std::string& msg) const { write(LogLevel::Debug, "debug", msg); }

 private:
  void write(LogLevel level, const char* tag, const std::string& msg) const {
    if (level <= level_) sink_ << "[" << tag << "] " << msg << "\n";
  }

  std::ostream& sink_;
  LogLevel level_;
};

void require_file(const fs::path& path, const char* what) {
  if (path.empty()) throw ConfigError(what, "path is required");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw IoError(std::string(what) + " not found: " + path.string());
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

std::vector<Category> categories_from(const fs::path& dataset_path) {
  if (dataset_path.empty()) return {};
  require_file(dataset_path, "categories dataset");
  return load_dataset(dataset_path).categories;
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message,
                 json details = json::object()) {
  json e = json::object();
  e["kind"] = kind;
  e["message"] = message;
  for (auto& [k, v] : details.items()) e[k] = v;
  json root = json::object();
  root["error"] = std::move(e);
  err << root.dump() << "\n";
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string log_level;
};

PipelineConfig resolve_config(const Globals& g) {
  PipelineConfig cfg;
  if (!g.config_path.empty()) {
    require_file(g.config_path, "config");
    apply_config_json(cfg, read_text_file(g.config_path));
  }
  apply_env_overrides(cfg, pastekit_environment());
  if (g.seed) cfg.compose.seed = *g.seed;
  if (g.jobs) cfg.jobs = *g.jobs;
  if (!g.log_level.empty()) {
    const auto level = parse_log_level(g.log_level);
    if (!level) throw ConfigError("log_level", "expected error, warn, info or debug");
    cfg.log_level = *level;
  }
  validate_config(cfg);
  return cfg;
}

int cmd_select(const fs::path& in, const fs::path& out, Logger& log) {
  require_file(in, "input manifest");
  PoolManifest pool = select_all(load_manifest(in));
  ensure_parent(out);
  save_manifest(out, pool);
  log.info("selected masks for " + std::to_string(pool.records.size()) + " records");
  return kExitOk;
}

int cmd_filter(const PipelineConfig& cfg, const fs::path& in, const fs::path& out,
               const fs::path& report_path, const fs::path& categories, Logger& log) {
  require_file(in, "input manifest");
  const PoolManifest pool = load_manifest(in, categories_from(categories));
  const FileImageSource images(cfg.paths.pool_image_root);
  const FilterResult result = filter_pool(pool, cfg.filter, images, cfg.jobs);
  ensure_parent(out);
  save_manifest(out, result.kept);
  if (!report_path.empty()) {
    ensure_parent(report_path);
    write_text_file(report_path, result.report.to_json());
  }
  std::ostringstream msg;
  msg << "kept " << result.report.kept_count << " of " << result.report.input_count
      << " records (area " << result.report.rejected(FilterRule::Area) << ", clip_threshold "
      << result.report.rejected(FilterRule::ClipThreshold) << ", io "
      << result.report.rejected(FilterRule::Io) << ", background "
      << result.report.rejected(FilterRule::Background) << " rejected)";
  log.info(msg.str());
  return kExitOk;
}

int cmd_stats(const fs::path& in, const fs::path& out, Logger& log) {
  require_file(in, "input dataset");
  const ScaleStats stats = compute_scale_stats(load_dataset(in));
  ensure_parent(out);
  save_scale_stats(out, stats);
  log.info("scale statistics for " + std::to_string(stats.categories.size()) + " categories");
  return kExitOk;
}

int cmd_retention(const PipelineConfig& cfg, const fs::path& in, const fs::path& categories,
                  std::vector<double> thresholds, const std::string& rule_name,
                  const fs::path& out, std::ostream& stdout_sink, Logger& log) {
  require_file(in, "input manifest");
  const auto cats = categories_from(categories);
  if (cats.empty()) {
    throw ConfigError("paths.source_dataset",
                      "retention needs a dataset with frequency bands (--categories)");
  }
  RetentionRule rule = RetentionRule::CategorySpecific;
  if (rule_name == "global") rule = RetentionRule::Global;
  else if (rule_name != "category") throw ConfigError("rule", "expected \"category\" or \"global\"");
  if (thresholds.empty()) {
    for (int k = 0; k <= 40; ++k) thresholds.push_back(k / 100.0);
  }
  std::unordered_map<std::int64_t, FrequencyBand> bands;
  for (const auto& c : cats) bands.emplace(c.id, c.band);
  const PoolManifest pool = load_manifest(in, cats);
  const auto rows = retention_curve(pool, thresholds, cfg.filter.subtractive, bands, rule);
  const std::string csv = retention_csv(rows);
  if (out.empty()) {
    stdout_sink << csv;
  } else {
    ensure_parent(out);
    write_text_file(out, csv);
  }
  log.info("retention table with " + std::to_string(rows.size()) + " rows");
  return kExitOk;
}

int cmd_compose(const PipelineConfig& cfg, Logger& log) {
  const Paths& p = cfg.paths;
  require_file(p.pool_manifest, "paths.pool_manifest");
  require_file(p.source_dataset, "paths.source_dataset");
  require_file(p.stats, "paths.stats");
  if (p.output_dir.empty()) throw ConfigError("paths.output_dir", "path is required");

  const Dataset source = load_dataset(p.source_dataset);
  const PoolManifest pool = load_manifest(p.pool_manifest, source.categories);
  const ScaleStats stats = load_scale_stats(p.stats);
  const FileImageSource instances(p.pool_image_root);
  const FileImageSource backgrounds(p.image_root);

  const auto start = std::chrono::steady_clock::now();
  const ComposeResult result =
      compose_dataset(pool, stats, source, cfg.compose, instances, backgrounds, p.output_dir, cfg.jobs);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t passthrough = 0;
  for (const auto& s : result.samples) {
    if (s.passthrough) {
      ++passthrough;
      log.warn("image " + std::to_string(s.source_image_id) + " repeat " +
               std::to_string(s.repeat_index) + " emitted without pastes: " + s.message);
    } else if (s.skipped > 0) {
      log.debug("image " + std::to_string(s.image_id) + ": skipped " + std::to_string(s.skipped) +
                " of " + std::to_string(s.planned) + " pastes");
    }
  }
  const fs::path dataset_out =
      p.output_dataset.empty() ? p.output_dir / "annotations.json" : p.output_dataset;
  ensure_parent(dataset_out);
  save_dataset(dataset_out, result.dataset);
  std::ostringstream msg;
  msg << "composed " << result.samples.size() << " samples (" << passthrough
      << " passthrough) in " << seconds << " s -> " << dataset_out.string();
  log.info(msg.str());
  return kExitOk;
}

int cmd_validate(const fs::path& in, std::ostream& out, Logger& log) {
  require_file(in, "input dataset");
  const auto issues = validate_dataset_json(read_text_file(in));
  json report = json::object();
  report["ok"] = issues.empty();
  json list = json::array();
  for (const auto& issue : issues) {
    json j = json::object();
    j["code"] = issue.code;
    j["message"] = issue.message;
    if (issue.annotation_id) j["annotation_id"] = *issue.annotation_id;
    list.push_back(std::move(j));
  }
  report["issues"] = std::move(list);
  out << report.dump(2) << "\n";
  if (!issues.empty()) {
    log.error(std::to_string(issues.size()) + " validation issue(s) in " + in.string());
    return kExitInvalid;
  }
  log.info(in.string() + " is valid");
  return kExitOk;
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir, Logger& log) {
  SynthSpec spec;
  if (!spec_path.empty()) {
    require_file(spec_path, "synth spec");
    spec = parse_synth_spec(read_text_file(spec_path));
  }
  if (out_dir.empty()) throw ConfigError("out_dir", "path is required");
  fs::create_directories(out_dir);
  const SynthPool pool = generate_pool(spec, out_dir);
  const Dataset dataset = generate_annotated_dataset(spec, out_dir);
  save_manifest(out_dir / "pool.jsonl", pool.manifest);
  save_dataset(out_dir / "dataset.json", dataset);
  log.info("wrote " + std::to_string(pool.manifest.records.size()) + " instances and " +
           std::to_string(dataset.images.size()) + " backgrounds to " + out_dir.string());
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Instance-pool filtering and copy-paste dataset composition", "pastekit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "Pipeline config JSON");
  app.add_option("--seed", g.seed, "Composition seed (overrides compose.seed)");
  app.add_option("--jobs", g.jobs, "Worker threads; 0 uses all cores");
  app.add_option("--log-level", g.log_level, "error, warn, info or debug");

  std::string in, out_path, report, categories, spec, out_dir, rule = "category";
  std::string pool_root, image_root, pool_path, dataset_path, stats_path;
  std::vector<double> thresholds;
  std::optional<double> clip_threshold;

  auto* select = app.add_subcommand("select", "Pick each record's best-scoring candidate mask");
  select->add_option("--in", in, "Input manifest (JSONL)")->required();
  select->add_option("--out", out_path, "Output manifest (JSONL)")->required();

  auto* filter = app.add_subcommand("filter", "Apply area, threshold and background filters");
  filter->add_option("--in", in, "Input manifest (JSONL)")->required();
  filter->add_option("--out", out_path, "Surviving records (JSONL)")->required();
  filter->add_option("--report", report, "Filter report (JSON)");
  filter->add_option("--image-root", pool_root, "Directory instance image paths are relative to");
  filter->add_option("--categories", categories, "Dataset whose categories records must use");
  filter->add_option("--clip-threshold", clip_threshold, "Overrides filter.clip_threshold");

  auto* stats = app.add_subcommand("stats", "Per-category scale statistics of a dataset");
  stats->add_option("--in", in, "Annotated dataset (COCO JSON)")->required();
  stats->add_option("--out", out_path, "Statistics sidecar (JSON)")->required();

  auto* retention = app.add_subcommand("retention", "Retention rate per band and threshold");
  retention->add_option("--in", in, "Scored manifest (JSONL)")->required();
  retention->add_option("--categories", categories, "Dataset carrying LVIS frequency bands");
  retention->add_option("--thresholds", thresholds, "Comma-separated thresholds")->delimiter(',');
  retention->add_option("--rule", rule, "category (min(t, max - d)) or global (t)");
  retention->add_option("--out", out_path, "CSV output (stdout if omitted)");

  auto* compose = app.add_subcommand("compose", "Compose pasted training images");
  compose->add_option("--pool", pool_path, "Filtered manifest (overrides paths.pool_manifest)");
  compose->add_option("--dataset", dataset_path, "Source dataset (overrides paths.source_dataset)");
  compose->add_option("--stats", stats_path, "Scale statistics (overrides paths.stats)");
  compose->add_option("--pool-root", pool_root, "Instance image root (paths.pool_image_root)");
  compose->add_option("--image-root", image_root, "Background image root (paths.image_root)");
  compose->add_option("--out-dir", out_dir, "Output directory (paths.output_dir)");
  compose->add_option("--out", out_path, "Output dataset JSON (paths.output_dataset)");

  auto* validate = app.add_subcommand("validate", "Check every dataset invariant");
  validate->add_option("--in", in, "Dataset (COCO JSON)")->required();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic pool and dataset");
  synth->add_option("--spec", spec, "Synthesis spec (JSON); defaults when omitted");
  synth->add_option("--out-dir", out_dir, "Output directory")->required();

  Logger log(err, LogLevel::Info);
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("pastekit");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kExitError;
  }

  try {
    PipelineConfig cfg = resolve_config(g);
    log.set_level(cfg.log_level);

    if (*select) return cmd_select(in, out_path, log);
    if (*filter) {
      if (!pool_root.empty()) cfg.paths.pool_image_root = pool_root;
      if (clip_threshold) cfg.filter.clip_threshold = *clip_threshold;
      validate_config(cfg);
      return cmd_filter(cfg, in, out_path, report, categories, log);
    }
    if (*stats) return cmd_stats(in, out_path, log);
    if (*retention) {
      return cmd_retention(cfg, in, categories.empty() ? cfg.paths.source_dataset : fs::path(categories),
                           thresholds, rule, out_path, out, log);
    }
    if (*compose) {
      if (!pool_path.empty()) cfg.paths.pool_manifest = pool_path;
      if (!dataset_path.empty()) cfg.paths.source_dataset = dataset_path;
      if (!stats_path.empty()) cfg.paths.stats = stats_path;
      if (!pool_root.empty()) cfg.paths.pool_image_root = pool_root;
      if (!image_root.empty()) cfg.paths.image_root = image_root;
      if (!out_dir.empty()) cfg.paths.output_dir = out_dir;
      if (!out_path.empty()) cfg.paths.output_dataset = out_path;
      return cmd_compose(cfg, log);
    }
    if (*validate) return cmd_validate(in, out, log);
    if (*synth) return cmd_synth(spec, out_dir, log);
  } catch (const ConfigError& e) {
    json details = json::object();
    details["key_path"] = e.key_path();
    print_error(err, e.kind(), e.what(), std::move(details));
    return kExitError;
  } catch (const IngestError& e) {
    json lines = json::array();
    for (const auto& issue : e.issues()) {
      json j = json::object();
      j["line"] = issue.line;
      j["message"] = issue.message;
      lines.push_back(std::move(j));
    }
    json details = json::object();
    details["lines"] = std::move(lines);
    print_error(err, e.kind(), e.what(), std::move(details));
    return kExitError;
  } catch (const IntegrityError& e) {
    json details = json::object();
    details["annotation_ids"] = e.annotation_ids();
    print_error(err, e.kind(), e.what(), std::move(details));
    return kExitError;
  } catch (const ParseError& e) {
    json details = json::object();
    details["byte_offset"] = e.byte_offset();
    print_error(err, e.kind(), e.what(), std::move(details));
    return kExitError;
  } catch (const Error& e) {
    print_error(err, e.kind(), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return kExitError;
  }
  return kExitError;
}

}  // namespace pastekit::cli
