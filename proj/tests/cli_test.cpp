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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "anoseg/anoseg.hpp"
#include "test_util.hpp"

namespace anoseg {
namespace {

using testing::TempDir;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the CLI with `args` (already shell-quoted where needed).
Run run_cli(const TempDir& dir, const std::string& args) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + ANOSEG_CLI_PATH + "\" " + args +
                          " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// Generates a small synthetic dataset under dir/data.
fs::path synth(const TempDir& dir, const std::string& extra = "") {
  const auto data = dir / "data";
  const auto r = run_cli(
      dir, "synth --out-dir " + q(data) +
               " --images 6 --width 48 --height 40 --components 3"
               " --min-extent 3 --max-extent 10 --void-fraction 0.1"
               " --hit 0.8 --noise 0.3 --blur 1 --false-alarms 1 --seed 5 " +
               extra);
  EXPECT_EQ(r.code, 0) << r.err;
  return data;
}

TEST(Cli, SynthThenStatsMatchesGeneratorBookkeeping) {
  TempDir dir;
  const auto data = synth(dir);
  EXPECT_TRUE(fs::exists(data / "manifest.json"));
  EXPECT_TRUE(fs::exists(data / "scores/img_0000.f32"));
  EXPECT_TRUE(fs::exists(data / "scores/img_0000.hdr"));
  const auto r = run_cli(dir, "stats --manifest " + q(data / "manifest.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto stats = Json::parse(r.out);
  const auto truth = Json::parse(slurp(data / "generator.json"));
  const double total = truth["total_pixels"].get<double>();
  EXPECT_DOUBLE_EQ(stats["anomaly_pixel_fraction"].get<double>(),
                   truth["anomaly_pixels"].get<double>() / total);
  EXPECT_DOUBLE_EQ(stats["not_anomaly_pixel_fraction"].get<double>(),
                   1.0 - (truth["anomaly_pixels"].get<double>() +
                          truth["void_pixels"].get<double>()) /
                             total);
  EXPECT_EQ(stats["gt_component_count"], truth["components"]);
  EXPECT_EQ(stats["image_count"], 6);

  const auto table = run_cli(
      dir, "stats --format table --manifest " + q(data / "manifest.json"));
  EXPECT_EQ(table.code, 0);
  EXPECT_NE(table.out.find("components"), std::string::npos);
}

TEST(Cli, EvaluateWritesFullSchemaDeterministically) {
  TempDir dir;
  const auto data = synth(dir);
  const std::string base = "evaluate --manifest " + q(data / "manifest.json") +
                           " --scores " + q(data / "scores") + " --min-size 5";
  const auto a = run_cli(dir, base + " --threads 1 --out " + q(dir / "a.json"));
  ASSERT_EQ(a.code, 0) << a.err;
  const auto b = run_cli(dir, base + " --threads 3 --out " + q(dir / "b.json"));
  ASSERT_EQ(b.code, 0) << b.err;
  const std::string text = slurp(dir / "a.json");
  EXPECT_EQ(text, slurp(dir / "b.json"));
  EXPECT_FALSE(fs::exists(dir / "a.json.partial"));

  const auto doc = Json::parse(text);
  for (const char* key : {"schema_version", "dataset", "method", "config",
                          "pixel", "component", "subsets", "size_bins",
                          "delta_sweep"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["config"]["min_size"], 5);
  EXPECT_EQ(doc["config"]["track"], "anomaly");
  EXPECT_EQ(doc["component"]["per_tau"].size(), 11u);
  const auto report = report_from_json(doc);
  EXPECT_EQ(report.image_count, 6u);

  // Same numbers as the library called directly.
  const FileScores source(load_manifest(data / "manifest.json"), data / "scores");
  TrackConfig config;
  config.min_component_size = 5;
  EvalOptions options;
  options.dataset = "synthetic";
  EXPECT_EQ(report.pixel, evaluate(source, config, options).pixel);
}

TEST(Cli, EvaluateFormatsAndGroups) {
  TempDir dir;
  const auto data = synth(dir, "--tag-groups 2 --score-format png");
  const std::string base = "evaluate --manifest " + q(data / "manifest.json") +
                           " --scores " + q(data / "scores") +
                           " --min-size 5 --method demo";
  const auto table = run_cli(dir, base + " --format table --group-by scene");
  ASSERT_EQ(table.code, 0) << table.err;
  EXPECT_NE(table.out.find("AuPRC"), std::string::npos);
  EXPECT_NE(table.out.find("demo [group0]"), std::string::npos);
  EXPECT_NE(table.out.find("demo [group1]"), std::string::npos);
  const auto csv = run_cli(dir, base + " --format csv");
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("dataset,method,auprc", 0), 0u);
  const auto binned = run_cli(dir, base + " --bins 256");
  ASSERT_EQ(binned.code, 0) << binned.err;
  EXPECT_EQ(Json::parse(binned.out)["config"]["score_mode"], "binned");
}

TEST(Cli, NoFilterForcesMinimumSizeZero) {
  TempDir dir;
  const auto data = synth(dir);
  const auto r = run_cli(dir, "evaluate --no-filter --manifest " +
                                  q(data / "manifest.json") + " --scores " +
                                  q(data / "scores"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_EQ(doc["config"]["min_size"], 0);
  EXPECT_EQ(doc["config"]["filtering"], false);
}

TEST(Cli, EvaluateMasks) {
  TempDir dir;
  const auto data = synth(dir);
  const auto manifest = load_manifest(data / "manifest.json");
  fs::create_directories(dir / "masks");
  for (std::size_t i = 0; i < manifest.images.size(); ++i) {
    const auto labels = load_label_map(manifest.label_path(i));
    std::vector<std::uint8_t> cells(labels.size());
    for (std::size_t p = 0; p < cells.size(); ++p) {
      cells[p] = labels[p] != Label::kNotAnomaly;  // Includes void.
    }
    write_mask(mask_file(dir / "masks", manifest.images[i].id),
               BinaryMask(labels.width(), labels.height(), std::move(cells)));
  }
  const auto r = run_cli(dir, "evaluate --manifest " + q(data / "manifest.json") +
                                  " --masks " + q(dir / "masks"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = Json::parse(r.out);
  EXPECT_TRUE(doc["pixel"].is_null());
  EXPECT_DOUBLE_EQ(doc["component"]["f1_bar"].get<double>(), 1.0);
  EXPECT_GT(doc["void_pixels_cleared"].get<int>(), 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);

  write_mask(dir / "masks/stranger.png", testing::mask_from({"#"}));
  const auto unknown = run_cli(dir, "evaluate --manifest " +
                                        q(data / "manifest.json") + " --masks " +
                                        q(dir / "masks"));
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("stranger"), std::string::npos);
}

TEST(Cli, SweepEmitsCsvWithDeltaStar) {
  TempDir dir;
  const auto data = synth(dir);
  const std::string base = "sweep --manifest " + q(data / "manifest.json") +
                           " --scores " + q(data / "scores") + " --min-size 5";
  const auto r = run_cli(dir, base + " --grid 10");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("delta,f1_bar,is_delta_star\n", 0), 0u);
  EXPECT_NE(r.out.find(",1\n"), std::string::npos);
  const auto explicit_grid = run_cli(dir, base + " --deltas 0.2,0.5,0.8");
  ASSERT_EQ(explicit_grid.code, 0) << explicit_grid.err;
  EXPECT_EQ(std::count(explicit_grid.out.begin(), explicit_grid.out.end(), '\n'),
            5);
  EXPECT_EQ(run_cli(dir, base + " --grid 5 --deltas 0.5").code, 2);
}

TEST(Cli, ValidateReportsMissingFiles) {
  TempDir dir;
  const auto data = synth(dir);
  const std::string base = "validate --manifest " + q(data / "manifest.json") +
                           " --scores " + q(data / "scores");
  const auto ok = run_cli(dir, base);
  EXPECT_EQ(ok.code, 0) << ok.err;
  EXPECT_NE(ok.out.find("ok: 6 images"), std::string::npos);
  fs::remove(data / "scores/img_0003.f32");
  fs::resize_file(data / "scores/img_0001.f32", 8);
  const auto bad = run_cli(dir, base);
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.err.find("img_0003: missing score file"), std::string::npos)
      << bad.err;
  EXPECT_NE(bad.err.find("img_0001"), std::string::npos);
}

TEST(Cli, FailedEvaluationWritesNothing) {
  TempDir dir;
  const auto data = synth(dir);
  fs::remove(data / "scores/img_0002.f32");
  const auto r = run_cli(dir, "evaluate --manifest " + q(data / "manifest.json") +
                                  " --scores " + q(data / "scores") + " --out " +
                                  q(dir / "r.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("img_0002"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "r.json"));
  EXPECT_FALSE(fs::exists(dir / "r.json.partial"));
}

TEST(Cli, UsageErrorsExitTwo) {
  TempDir dir;
  const auto data = synth(dir);
  const std::string m = " --manifest " + q(data / "manifest.json");
  const std::string s = " --scores " + q(data / "scores");
  EXPECT_EQ(run_cli(dir, "").code, 2);
  EXPECT_EQ(run_cli(dir, "frobnicate").code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + s).code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m).code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m + s + " --masks " + q(data)).code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m + s + " --min-size 3 --no-filter").code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m + s + " --bins 64 --exact").code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m + s + " --track lava").code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m + s + " --taus 0.5,0.3").code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m + s + " --taus 0.5,x").code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate" + m + s + " --format xml").code, 2);
  EXPECT_EQ(run_cli(dir, "evaluate --manifest " + q(dir / "nope.json") + s).code, 2);
  EXPECT_EQ(run_cli(dir, "synth --out-dir " + q(dir / "x") + " --track lava").code, 2);
  EXPECT_FALSE(fs::exists(dir / "x"));
}

}  // namespace
}  // namespace anoseg
