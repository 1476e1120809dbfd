// Copyright 2026 The mlidar Authors.
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

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli.hpp"
#include "mlidar/error.hpp"

using namespace mlidar;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path Root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / ("mlidar_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Exec(std::vector<std::string> args) {
  args.insert(args.begin(), "mlidar");
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> Lines(const fs::path& p) {
  std::vector<std::string> lines;
  std::ifstream in(p);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

// Every file except run.json, which echoes paths and job counts.
bool SameOutputs(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename());
  std::vector<std::string> other;
  for (const auto& e : fs::directory_iterator(b)) other.push_back(e.path().filename());
  std::sort(names.begin(), names.end());
  std::sort(other.begin(), other.end());
  if (names != other) return false;
  for (const auto& n : names) {
    if (n == "run.json") continue;
    if (Slurp(a / n) != Slurp(b / n)) return false;
  }
  return true;
}

const fs::path& MovingScene() {
  static const fs::path dir = [] {
    const fs::path d = Root() / "scene_box";
    auto r = Exec({"gen-scene", "--preset", "moving-box", "--frames", "8", "--width", "160",
                   "--height", "120", "--box-px", "40", "--px-per-frame", "16", "--out",
                   d.string()});
    REQUIRE(r.code == 0);
    return d;
  }();
  return dir;
}

}  // namespace

TEST_CASE("number lists") {
  auto v = cli::ParseNumberList("0.5:100:log50");
  REQUIRE(v.size() == 50);
  CHECK(v.front() == 0.5);
  CHECK(v.back() == 100.0);
  CHECK(v[1] / v[0] == doctest::Approx(v[49] / v[48]));
  CHECK(cli::ParseNumberList("1:3:lin3") == std::vector<double>{1, 2, 3});
  CHECK(cli::ParseNumberList("1,100") == std::vector<double>{1, 100});
  CHECK_THROWS_AS(cli::ParseNumberList("1:2"), Error);
  CHECK_THROWS_AS(cli::ParseNumberList("a,b"), Error);
  CHECK_THROWS_AS(cli::ParseNumberList("0:1:log5"), Error);
}

TEST_CASE("optics sweep row count") {
  const fs::path out = Root() / "sweep";
  auto r = Exec({"optics-sweep", "--design", "all", "--M", "1,100", "--w0-mm", "0.1,5",
                 "--Z-m", "0.5:100:log50", "--out", out.string()});
  REQUIRE(r.code == 0);
  auto lines = Lines(out / "sweep.csv");
  CHECK(lines.size() == 1 + 3 * 2 * 2 * 50);
  CHECK(lines[0] ==
        "design_kind,M,w0_m,lambda_m,n,A_m,u_m,f_m,Z_m,fov_rad,rr_per_m,volume_m3,flag");
  auto run = json::parse(Slurp(out / "run.json"));
  CHECK(run.at("command") == "optics-sweep");
  CHECK(run.at("config").at("lambda-nm") == "1000");
}

TEST_CASE("optics sweep crossover report") {
  const fs::path out = Root() / "cross";
  auto r = Exec({"optics-sweep", "--design", "retro,single", "--M", "1", "--w0-mm", "5",
                 "--mirror-fov-deg", "180", "--Z-m", "0.5:1000:log200", "--crossover",
                 "--out", out.string()});
  REQUIRE(r.code == 0);
  const std::string csv = Slurp(out / "crossover.csv");
  CHECK(csv.find("retroreflective") != std::string::npos);
  CHECK(csv.find("single_detector") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  const fs::path out = Root() / "bad";
  CHECK(Exec({"optics-sweep", "--Z-m", "", "--out", out.string()}).code == cli::kExitUsage);
  CHECK(Exec({"optics-sweep", "--M", "0.5", "--out", out.string()}).code == cli::kExitUsage);
  CHECK(Exec({"no-such-command"}).code == cli::kExitUsage);
  CHECK(Exec({"scan", "--regime", "spiral", "--out", out.string()}).code == cli::kExitUsage);
  CHECK(Exec({}).code == cli::kExitUsage);
}

TEST_CASE("help exits cleanly") {
  auto r = Exec({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("optics-sweep") != std::string::npos);
  auto s = Exec({"capture", "--help"});
  CHECK(s.code == 0);
  CHECK(s.out.find("--fps") != std::string::npos);
}

TEST_CASE("fit-budget") {
  const fs::path out = Root() / "budget";
  auto r = Exec({"fit-budget", "--out", out.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(Slurp(out / "budget.json"));
  CHECK(j.at("sample_rate_hz").get<double>() == doctest::Approx(1527.6715945089757));
  auto bad = Exec({"fit-budget", "--table", "10:100,10:120", "--out", out.string()});
  CHECK(bad.code == cli::kExitData);
  CHECK(bad.err.find("SingularFit") != std::string::npos);
}

TEST_CASE("full-FOV capture at 30 fps") {
  const fs::path out = Root() / "cap30";
  auto r = Exec({"capture", "--scene", MovingScene().string(), "--regime", "full", "--fps",
                 "30", "--out", out.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(Slurp(out / "0003_pattern.json"));
  CHECK(j.at("samples").size() == 27);
  CHECK(j.at("budget") == 27);
  auto s = json::parse(Slurp(out / "0003.json"));
  CHECK(s.at("samples").size() + s.at("dropped").get<std::size_t>() == 27);
}

TEST_CASE("motion-driven capture") {
  const fs::path out = Root() / "motion";
  auto r = Exec({"capture", "--scene", MovingScene().string(), "--regime", "foveated",
                 "--roi", "auto-motion", "--out", out.string()});
  REQUIRE(r.code == 0);
  auto trace = Lines(out / "roi_trace.csv");
  CHECK(trace.size() == 9);
  CHECK(trace[0] == "frame,x0,y0,x1,y1,area_px");
  int detected = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) detected += trace[i].find(",,") == std::string::npos;
  CHECK(detected >= 4);
  auto summary = json::parse(Slurp(out / "summary.json"));
  CHECK(summary.at("mean_samples_per_frame").get<double>() <
        summary.at("dense_budget").get<double>());
}

TEST_CASE("fixed seed gives byte-identical outputs across runs and jobs") {
  const std::string scene = MovingScene().string();
  const fs::path a = Root() / "det_a", b = Root() / "det_b", c = Root() / "det_c";
  for (const auto& [dir, jobs] : {std::pair{a, "1"}, std::pair{b, "1"}, std::pair{c, "3"}}) {
    auto r = Exec({"capture", "--scene", scene, "--regime", "foveated", "--roi",
                   "auto-motion", "--seed", "11", "--jobs", jobs, "--out", dir.string()});
    REQUIRE(r.code == 0);
  }
  CHECK(SameOutputs(a, b));
  CHECK(SameOutputs(a, c));
}

TEST_CASE("complete and eval") {
  const std::string scene = MovingScene().string();
  const fs::path cap = Root() / "ce_cap", dense = Root() / "ce_dense", ev = Root() / "ce_eval";
  REQUIRE(Exec({"capture", "--scene", scene, "--fps", "6", "--out", cap.string()}).code == 0);
  auto r = Exec({"complete", "--scene", scene, "--capture", cap.string(), "--out",
                 dense.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dense / "0000.pgm"));
  auto params = json::parse(Slurp(dense / "dense.json"));
  CHECK(params.dump().find("sigma_spatial_px") != std::string::npos);

  auto e = Exec({"eval", "--truth", scene, "--pred", dense.string(), "--out", ev.string()});
  REQUIRE(e.code == 0);
  auto lines = Lines(ev / "metrics.csv");
  CHECK(lines.size() == 1 + 8 + 1);
  CHECK(lines.back().rfind("all,", 0) == 0);

  const fs::path roi = Root() / "ce_roi";
  auto e2 = Exec({"eval", "--truth", scene, "--pred", dense.string(), "--roi-only", "--roi",
                  "40,30,120,90", "--out", roi.string()});
  REQUIRE(e2.code == 0);
  auto j = json::parse(Slurp(roi / "metrics.json"));
  CHECK(j.at("pooled").at("n_pixels") == 8 * 80 * 60);

  CHECK(Exec({"eval", "--truth", scene, "--pred", dense.string(), "--roi-only", "--out",
              roi.string()}).code == cli::kExitUsage);
}

TEST_CASE("fps sweep table") {
  const fs::path scene = Root() / "clutter";
  REQUIRE(Exec({"gen-scene", "--preset", "clutter", "--seed", "2", "--out", scene.string()}).code == 0);
  const fs::path out = Root() / "fps_sweep";
  auto r = Exec({"eval", "--truth", scene.string(), "--fps-sweep", "30,24,18,12,6", "--out",
                 out.string()});
  REQUIRE(r.code == 0);
  auto lines = Lines(out / "metrics.csv");
  REQUIRE(lines.size() == 6);
  CHECK(lines[1].rfind("30,27,", 0) == 0);
  CHECK(lines[5].rfind("6,230,", 0) == 0);
}

TEST_CASE("missing truth is a clean data error") {
  auto r = Exec({"eval", "--truth", (Root() / "does_not_exist").string(), "--pred", "x",
                 "--out", (Root() / "ev_missing").string()});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(r.err.find("MissingFile") != std::string::npos);
}

TEST_CASE("rerun reproduces a run from run.json") {
  const fs::path first = Root() / "rr_first", second = Root() / "rr_second";
  REQUIRE(Exec({"scan", "--regime", "entropy", "--scene", MovingScene().string(), "--frame",
                "2", "--fps", "12", "--seed", "5", "--out", first.string()}).code == 0);
  REQUIRE(Exec({"rerun", (first / "run.json").string(), "--out", second.string()}).code == 0);
  CHECK(SameOutputs(first, second));
  auto run = json::parse(Slurp(second / "run.json"));
  CHECK(run.at("config").at("seed") == "5");
}

TEST_CASE("scan regimes") {
  const fs::path out = Root() / "scan_sweep";
  auto r = Exec({"scan", "--regime", "density-sweep", "--roi", "20,20,100,80", "--counts",
                 "10,50,100", "--out", out.string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out / "pattern_0000.json"));
  CHECK(fs::exists(out / "pattern_0002.json"));
  auto bad = Exec({"scan", "--regime", "foveated", "--roi", "0,0,999,10", "--out",
                   (Root() / "scan_bad").string()});
  CHECK(bad.code == cli::kExitUsage);
  CHECK(bad.err.find("ROIOutOfBounds") != std::string::npos);
}

TEST_CASE("fovea command") {
  const fs::path out = Root() / "fovea";
  auto r = Exec({"fovea", "--scene", MovingScene().string(), "--mode", "motion", "--out",
                 out.string()});
  REQUIRE(r.code == 0);
  CHECK(Lines(out / "roi_trace.csv").size() == 9);
}

TEST_CASE("cleanup") { fs::remove_all(Root()); }
