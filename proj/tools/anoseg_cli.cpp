// Copyright 2026 The anoseg Authors.
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

// Command-line front end: evaluate, sweep, stats, synth, validate.
//
// Exit codes: 0 success, 1 validation or evaluation failure, 2 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anoseg/anoseg.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string manifest;
  std::string scores;
  std::string masks;
  std::string track;
  std::optional<std::size_t> min_size;
  bool no_filter = false;
  bool keep_void = false;
  std::optional<std::size_t> bins;
  bool exact = false;
  std::string taus;
  std::string group_by;
  bool exclusive_groups = false;
  std::string out;
  std::string format = "json";
  std::size_t threads = anoseg::default_thread_count();
  std::string method = "method";
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + item + "' in list");
    }
  }
  return values;
}

anoseg::Track parse_track_flag(const std::string& text) {
  try {
    return anoseg::parse_track(text);
  } catch (const anoseg::Error& e) {
    throw UsageError(e.what());
  }
}

anoseg::TrackConfig make_config(const CommonFlags& f, anoseg::Track manifest_track) {
  using anoseg::TrackConfig;
  const anoseg::Track track =
      f.track.empty() ? manifest_track : parse_track_flag(f.track);
  TrackConfig config = TrackConfig::for_track(track);
  if (f.min_size) config.min_component_size = *f.min_size;
  if (f.no_filter) {
    config.filtering = false;
    config.min_component_size = 0;
  }
  config.clip_void = !f.keep_void;
  if (f.bins) config.score_mode = anoseg::ScoreMode::binned(*f.bins);
  if (!f.taus.empty()) config.tau_grid = parse_list(f.taus);
  try {
    config.validate();
  } catch (const anoseg::Error& e) {
    throw UsageError(e.what());
  }
  return config;
}

// Writes through a temporary file so that a failed run leaves nothing behind.
void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  const fs::path target(path);
  const fs::path tmp = target.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw anoseg::Error(anoseg::ErrorCode::kIoError, "cannot write " + path);
    out << content;
    if (!out) throw anoseg::Error(anoseg::ErrorCode::kIoError, "cannot write " + path);
  }
  fs::rename(tmp, target);
}

void add_input_flags(CLI::App* cmd, CommonFlags& f, bool allow_masks) {
  cmd->add_option("--manifest", f.manifest, "Dataset manifest (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  auto* scores = cmd->add_option("--scores", f.scores,
                                 "Directory of <id>.f32/.hdr or 16-bit <id>.png score maps");
  if (allow_masks) {
    auto* masks = cmd->add_option("--masks", f.masks,
                                  "Directory of 8-bit <id>.png competitor masks");
    scores->excludes(masks);
  }
}

void add_config_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--track", f.track, "anomaly | obstacle (default: manifest)");
  auto* min_size = cmd->add_option("--min-size", f.min_size,
                                   "Minimum predicted component size in pixels");
  auto* no_filter = cmd->add_flag("--no-filter", f.no_filter,
                                  "Disable predicted-component size filtering");
  min_size->excludes(no_filter);
  cmd->add_flag("--keep-void", f.keep_void,
                "Keep predictions on void pixels instead of clipping them");
  auto* bins = cmd->add_option("--bins", f.bins, "Binned score mode with N bins")
                   ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));
  auto* exact = cmd->add_flag("--exact", f.exact, "Exact score mode (default)");
  bins->excludes(exact);
  cmd->add_option("--taus", f.taus, "Comma-separated tau grid");
  cmd->add_option("--threads", f.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "Output file (default: stdout)");
}

int run_evaluate(const CommonFlags& f) {
  if (f.scores.empty() == f.masks.empty()) {
    throw UsageError("exactly one of --scores or --masks is required");
  }
  const anoseg::Format format = [&] {
    try {
      return anoseg::parse_format(f.format);
    } catch (const anoseg::Error& e) {
      throw UsageError(e.what());
    }
  }();
  const auto manifest = anoseg::load_manifest(f.manifest);
  const anoseg::TrackConfig config = make_config(f, manifest.track);
  anoseg::EvalOptions options;
  options.dataset = manifest.name;
  options.method = f.method;
  options.threads = f.threads;

  anoseg::BenchmarkReport report;
  if (!f.scores.empty()) {
    const anoseg::FileScores source(manifest, f.scores);
    report = anoseg::evaluate(source, config, options);
    if (!f.group_by.empty()) {
      report.subsets = anoseg::evaluate_subsets(source, config, f.group_by, options,
                                                &report.warnings, f.exclusive_groups);
    }
  } else {
    const anoseg::FileMasks source(manifest, f.masks);
    report = anoseg::evaluate_masks(source, config, options);
    if (!f.group_by.empty()) {
      report.subsets = anoseg::evaluate_subsets(source, config, f.group_by, options,
                                                &report.warnings, f.exclusive_groups);
    }
  }
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  write_output(f.out, anoseg::emit(report, format));
  return kOk;
}

int run_sweep(const CommonFlags& f, std::size_t grid, const std::string& deltas) {
  if (f.scores.empty()) throw UsageError("--scores is required");
  const auto manifest = anoseg::load_manifest(f.manifest);
  const anoseg::TrackConfig config = make_config(f, manifest.track);
  std::optional<std::vector<double>> explicit_grid;
  if (!deltas.empty()) explicit_grid = parse_list(deltas);
  const anoseg::FileScores source(manifest, f.scores);
  const auto sweep =
      anoseg::delta_sweep(source, config, explicit_grid, f.threads, grid);
  write_output(f.out, anoseg::emit_sweep_csv(sweep));
  return kOk;
}

int run_stats(const CommonFlags& f) {
  const auto manifest = anoseg::load_manifest(f.manifest);
  const auto stats = anoseg::dataset_stats(manifest);
  std::string content;
  if (f.format == "json") {
    anoseg::Json doc = anoseg::to_json(stats);
    doc["dataset"] = manifest.name;
    content = doc.dump(2) + "\n";
  } else if (f.format == "table") {
    using anoseg::detail::percent;
    content = anoseg::format_table(
        {{"Dataset", "images", "anomaly %", "not anomaly %", "components",
          "rel. size % (mean)", "rel. size % (std)"},
         {manifest.name, std::to_string(stats.image_count),
          percent(stats.anomaly_pixel_fraction),
          percent(stats.not_anomaly_pixel_fraction),
          std::to_string(stats.gt_component_count),
          percent(stats.mean_relative_size), percent(stats.std_relative_size)}});
  } else {
    throw UsageError("stats supports --format json or table");
  }
  write_output(f.out, content);
  return kOk;
}

struct SynthFlags {
  std::string out_dir;
  std::size_t images = 4;
  std::string name = "synthetic";
  std::string track = "anomaly";
  std::string score_format = "f32";
  std::size_t tag_groups = 0;
  anoseg::synth::SceneSpec spec;
};

int run_synth(const SynthFlags& s) {
  if (s.score_format != "f32" && s.score_format != "png") {
    throw UsageError("--score-format must be f32 or png");
  }
  const anoseg::Track track = parse_track_flag(s.track);
  const fs::path root(s.out_dir);
  fs::create_directories(root / "labels");
  fs::create_directories(root / "scores");

  anoseg::DatasetManifest manifest;
  manifest.name = s.name;
  manifest.track = track;
  std::uint64_t anomaly = 0;
  std::uint64_t void_pixels = 0;
  std::uint64_t total = 0;
  std::size_t components = 0;
  for (std::size_t i = 0; i < s.images; ++i) {
    anoseg::synth::SceneSpec spec = s.spec;
    spec.seed = anoseg::synth::CounterRng::mix(s.spec.seed + i);
    const auto scene = anoseg::synth::generate_scene(spec);
    char id[32];
    std::snprintf(id, sizeof id, "img_%04zu", i);
    anoseg::ImageEntry entry;
    entry.id = id;
    entry.label = std::string("labels/") + id + ".png";
    entry.width = spec.width;
    entry.height = spec.height;
    if (s.tag_groups > 0) {
      entry.tags.push_back("scene:group" + std::to_string(i % s.tag_groups));
    }
    anoseg::write_label_map(root / entry.label, scene.labels);
    if (s.score_format == "f32") {
      anoseg::write_score_raw(root / "scores" / (entry.id + ".f32"), scene.scores);
    } else {
      anoseg::write_score_png(root / "scores" / (entry.id + ".png"), scene.scores);
    }
    manifest.images.push_back(entry);
    anomaly += scene.anomaly_pixels;
    void_pixels += scene.void_pixels;
    total += scene.labels.size();
    components += scene.component_sizes.size();
  }
  anoseg::save_manifest(manifest, root / "manifest.json");
  // Generator bookkeeping, for cross-checking `stats`.
  anoseg::Json truth{{"images", s.images},
                     {"anomaly_pixels", anomaly},
                     {"void_pixels", void_pixels},
                     {"total_pixels", total},
                     {"components", components}};
  write_output((root / "generator.json").string(), truth.dump(2) + "\n");
  return kOk;
}

// Checks a submission against the manifest without computing metrics.
int run_validate(const CommonFlags& f) {
  if (f.scores.empty() == f.masks.empty()) {
    throw UsageError("exactly one of --scores or --masks is required");
  }
  const auto manifest = anoseg::load_manifest(f.manifest, /*check_files=*/false);
  std::vector<std::string> problems;
  const bool masks = !f.masks.empty();
  const fs::path dir(masks ? f.masks : f.scores);
  if (!fs::is_directory(dir)) {
    problems.push_back("not a directory: " + dir.string());
  } else {
    for (std::size_t i = 0; i < manifest.images.size(); ++i) {
      const auto& entry = manifest.images[i];
      if (!fs::exists(manifest.label_path(i))) {
        problems.push_back(entry.id + ": missing label file");
      }
      try {
        if (masks) {
          const auto path = anoseg::mask_file(dir, entry.id);
          if (!fs::exists(path)) {
            problems.push_back(entry.id + ": missing mask file");
            continue;
          }
          const auto m = anoseg::load_mask(path);
          anoseg::check_entry_shape(entry, m.width(), m.height(), "mask");
        } else {
          const auto path = anoseg::find_score_file(dir, entry.id);
          if (!path) {
            problems.push_back(entry.id + ": missing score file");
            continue;
          }
          const auto s = anoseg::load_score_map(*path);
          anoseg::check_entry_shape(entry, s.width(), s.height(), "score map");
        }
      } catch (const anoseg::Error& e) {
        problems.push_back(entry.id + ": " + e.what());
      }
    }
    if (masks) {
      for (const auto& id : anoseg::unknown_mask_ids(manifest, dir)) {
        problems.push_back(id + ": mask without manifest entry");
      }
    }
  }
  for (const auto& p : problems) std::cerr << "invalid: " << p << '\n';
  if (!problems.empty()) return kFailure;
  std::cout << "ok: " << manifest.images.size() << " images\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anomaly segmentation benchmark evaluation"};
  app.require_subcommand(1);

  CommonFlags eval_flags;
  auto* evaluate = app.add_subcommand("evaluate", "Score a method and emit results");
  add_input_flags(evaluate, eval_flags, /*allow_masks=*/true);
  add_config_flags(evaluate, eval_flags);
  evaluate->add_option("--format", eval_flags.format, "json | table | csv");
  evaluate->add_option("--group-by", eval_flags.group_by,
                       "Also evaluate per tag group of this kind");
  evaluate->add_flag("--exclusive-groups", eval_flags.exclusive_groups,
                     "Drop images that belong to more than one group");
  evaluate->add_option("--method", eval_flags.method, "Method name for the report");

  CommonFlags sweep_flags;
  std::size_t grid = 50;
  std::string deltas;
  auto* sweep = app.add_subcommand("sweep", "Averaged component F1 as a function of delta (CSV)");
  add_input_flags(sweep, sweep_flags, /*allow_masks=*/false);
  add_config_flags(sweep, sweep_flags);
  auto* grid_opt = sweep->add_option("--grid", grid, "Number of pooled-score quantiles")
                       ->check(CLI::PositiveNumber);
  sweep->add_option("--deltas", deltas, "Explicit comma-separated thresholds")
      ->excludes(grid_opt);

  CommonFlags stats_flags;
  auto* stats = app.add_subcommand("stats", "Dataset statistics");
  stats->add_option("--manifest", stats_flags.manifest)->required()->check(CLI::ExistingFile);
  stats->add_option("--format", stats_flags.format, "json | table");
  stats->add_option("--out", stats_flags.out, "Output file (default: stdout)");

  SynthFlags synth_flags;
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  auto& spec = synth_flags.spec;
  synth->add_option("--out-dir", synth_flags.out_dir)->required();
  synth->add_option("--images", synth_flags.images);
  synth->add_option("--name", synth_flags.name);
  synth->add_option("--track", synth_flags.track);
  synth->add_option("--score-format", synth_flags.score_format, "f32 | png");
  synth->add_option("--tag-groups", synth_flags.tag_groups,
                    "Tag images round-robin as scene:group<k>");
  synth->add_option("--width", spec.width);
  synth->add_option("--height", spec.height);
  synth->add_option("--components", spec.component_count);
  synth->add_option("--min-extent", spec.min_extent);
  synth->add_option("--max-extent", spec.max_extent);
  synth->add_option("--void-fraction", spec.void_fraction);
  synth->add_option("--hit", spec.hit_probability);
  synth->add_option("--noise", spec.noise);
  synth->add_option("--blur", spec.blur_radius);
  synth->add_option("--false-alarms", spec.false_alarm_rate);
  synth->add_option("--seed", spec.seed);

  CommonFlags validate_flags;
  auto* validate = app.add_subcommand("validate", "Check submission files against a manifest");
  validate->add_option("--manifest", validate_flags.manifest)->required()->check(CLI::ExistingFile);
  auto* v_scores = validate->add_option("--scores", validate_flags.scores);
  auto* v_masks = validate->add_option("--masks", validate_flags.masks);
  v_scores->excludes(v_masks);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*evaluate) return run_evaluate(eval_flags);
    if (*sweep) return run_sweep(sweep_flags, grid, deltas);
    if (*stats) return run_stats(stats_flags);
    if (*synth) return run_synth(synth_flags);
    if (*validate) return run_validate(validate_flags);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const anoseg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
