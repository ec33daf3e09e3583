#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "accmag/manifest.hpp"
#include "accmag/videoio.hpp"
#include "cli.hpp"
#include "test_util.hpp"

using namespace accmag;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "accmag");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string value(const std::string& manifest, const std::string& key) {
  const auto m = RunManifest::parse(manifest);
  return m.get(key).value_or("<missing>");
}

}  // namespace

TEST(Cli, NoArgumentsIsUsageError) {
  const auto r = run({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
}

TEST(Cli, BadArgumentsExitTwo) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"magnify", "--mode", "sideways", "--input", "a", "--output", "b"}).code, 2);
  EXPECT_EQ(run({"magnify", "--mode", "color", "--alpha", "8", "--freq", "2", "--filter",
                 "ideal:1", "--input", "a", "--output", "b"})
                .code,
            2);
  EXPECT_EQ(run({"magnify", "--mode", "color", "--freq", "2", "--input", "a", "--output", "b"})
                .code,
            2);
}

TEST(Cli, MissingInputExitOne) {
  const auto dir = testutil::scratch_dir("cli_missing");
  const auto r = run({"magnify", "--mode", "color", "--alpha", "8", "--freq", "2", "--fps", "60",
                      "--input", (dir / "nope").string(), "--output", (dir / "o").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, SynthThenMagnifyWritesManifest) {
  const auto dir = testutil::scratch_dir("cli_ball");
  const auto ball = (dir / "ball").string();
  ASSERT_EQ(run({"synth-ball", "--size", "96", "--frames", "60", "--output", ball}).code, 0);
  EXPECT_TRUE(fs::exists(dir / "ball" / "000060.png"));
  const auto spec = slurp(dir / "ball.manifest.txt");
  EXPECT_EQ(value(spec, "radius"), "10");
  EXPECT_EQ(value(spec, "duration_frames"), "60");

  const std::vector<std::string> args{"magnify", "--mode", "color", "--filter", "acceleration",
                                      "--alpha", "8", "--freq", "2", "--fps", "60",
                                      "--input", ball, "--output", (dir / "out").string()};
  ASSERT_EQ(run(args).code, 0);
  const auto m1 = slurp(dir / "out.manifest.txt");
  EXPECT_EQ(value(m1, "sigma"), "5.303301");
  EXPECT_EQ(value(m1, "sigma_source"), "formula");
  EXPECT_EQ(value(m1, "subcommand"), "magnify");
  EXPECT_NE(m1.find("\ntimestamp="), std::string::npos);
  const auto first = videoio::load_frames((dir / "out").string(), 60.0);

  auto with_threads = args;
  with_threads.insert(with_threads.begin(), {"--threads", "3"});
  ASSERT_EQ(run(with_threads).code, 0);
  const auto m2 = slurp(dir / "out.manifest.txt");
  auto stable = [](const std::string& m) {
    auto p = RunManifest::parse(m);
    p.set("threads", "-");
    return p.stable_text();
  };
  EXPECT_EQ(stable(m1), stable(m2));
  EXPECT_TRUE(videoio::load_frames((dir / "out").string(), 60.0) == first);
}

TEST(Cli, SigmaOverride) {
  const auto dir = testutil::scratch_dir("cli_sigma");
  const auto ball = (dir / "ball").string();
  ASSERT_EQ(run({"synth-ball", "--size", "64", "--radius", "6", "--frames", "30", "--output",
                 ball})
                .code,
            0);
  ASSERT_EQ(run({"magnify", "--mode", "motion", "--alpha", "4", "--freq", "2", "--fps", "60",
                 "--sigma", "3.0", "--input", ball, "--output", (dir / "out").string(),
                 "--manifest", (dir / "m.txt").string()})
                .code,
            0);
  const auto m = slurp(dir / "m.txt");
  EXPECT_EQ(value(m, "sigma"), "3.000000");
  EXPECT_EQ(value(m, "sigma_source"), "override");
  EXPECT_EQ(value(m, "mode"), "motion");
}

TEST(Cli, PresetWarnsOnInconsistentSigma) {
  const auto dir = testutil::scratch_dir("cli_preset");
  const auto ball = (dir / "ball").string();
  ASSERT_EQ(run({"synth-ball", "--size", "64", "--radius", "6", "--frames", "30", "--fps", "30",
                 "--output", ball})
                .code,
            0);
  const auto r = run({"magnify", "--preset", "water-bottle", "--mode", "color", "--input", ball,
                      "--output", (dir / "out").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const auto m = slurp(dir / "out.manifest.txt");
  EXPECT_EQ(value(m, "sigma"), "2.830000");
  EXPECT_EQ(value(m, "sigma_source"), "preset");
  EXPECT_EQ(value(m, "preset"), "water-bottle");
}

TEST(Presets, TableVerbatim) {
  ASSERT_EQ(presets().size(), 9u);
  const auto* ball = find_preset("synthetic-ball");
  ASSERT_NE(ball, nullptr);
  EXPECT_EQ(ball->alpha, 8);
  EXPECT_EQ(ball->sigma, 5.30);
  EXPECT_FALSE(preset_sigma_inconsistent(*ball));
  int inconsistent = 0;
  for (const auto& p : presets()) inconsistent += preset_sigma_inconsistent(p);
  EXPECT_EQ(inconsistent, 5);
  EXPECT_EQ(find_preset("nope"), nullptr);
}

TEST(Manifest, TimingIsolated) {
  RunManifest m("x");
  m.set("a", "1");
  m.set("sigma", 5.303301, 6);
  m.set_timing("2020-01-01T00:00:00Z", 1.5);
  const auto text = m.to_text();
  EXPECT_EQ(text, m.stable_text() + "timestamp=2020-01-01T00:00:00Z\nduration_s=1.500\n");
  EXPECT_EQ(RunManifest::parse(text).to_text(), text);
  EXPECT_THROW(m.set("bad\nkey", "v"), std::invalid_argument);
}

TEST(Cli, EvaluatePointCsv) {
  const auto dir = testutil::scratch_dir("cli_eval");
  const auto csv = (dir / "point.csv").string();
  const auto r = run({"evaluate", "--sweep", "point", "--methods", "identity,stft:5", "--output",
                      csv, "--gnuplot", (dir / "point.dat").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto text = slurp(csv);
  EXPECT_EQ(text.rfind("method,param,mse\n", 0), 0u);
  EXPECT_NE(text.find("identity,2,"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "point.csv.manifest.txt"));
  EXPECT_TRUE(fs::exists(dir / "point.dat"));
  EXPECT_EQ(run({"evaluate", "--methods", "bogus", "--output", csv}).code, 2);
}
