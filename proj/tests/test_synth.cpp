#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "accmag/synth.hpp"

using namespace accmag;
using namespace accmag::synth;

namespace {

BallSpec small_spec() {
  BallSpec s;
  s.height = s.width = 96;
  s.duration_frames = 30;
  return s;
}

}  // namespace

TEST(Ball, ReferenceSpecDefaults) {
  const BallSpec s;
  EXPECT_EQ(s.radius, 10.0);
  EXPECT_NEAR(std::hypot(s.velocity.x, s.velocity.y), 1.0, 1e-15);
  EXPECT_EQ(s.intensity_amplitude, 20.0);
  EXPECT_EQ(s.intensity_freq_hz, 2.0);
  EXPECT_EQ(s.fps, 60.0);
  const auto seq = render_ball(s);
  EXPECT_EQ(seq.frames(), 120u);
  EXPECT_EQ(seq.channels(), 3u);
}

TEST(Ball, TrajectoryIsCentred) {
  BallSpec s;
  const auto a = s.center_at(0);
  const auto b = s.center_at(s.duration_frames - 1);
  EXPECT_NEAR(a.x + b.x, double(s.width - 1), 1e-9);
  EXPECT_NEAR(a.y + b.y, double(s.height - 1), 1e-9);
}

TEST(Ball, StaticZeroAmplitudeFramesIdentical) {
  auto s = small_spec();
  s.velocity = {0, 0};
  s.intensity_amplitude = 0;
  const auto seq = render_ball(s);
  for (std::size_t t = 1; t < seq.frames(); ++t) {
    EXPECT_TRUE(std::equal(seq.frame(t).begin(), seq.frame(t).end(), seq.frame(0).begin()));
  }
}

TEST(Ball, WholeCyclesPeriodic) {
  auto s = small_spec();
  s.duration_frames = 61;  // frames 0 and 60 are one second apart
  EXPECT_NEAR(s.intensity_at(0), s.intensity_at(60), 1e-12);
  s.intensity_freq_hz = 1.0;
  EXPECT_NEAR(s.intensity_at(15) - s.base_intensity, 20.0 / 255.0, 1e-12);
}

TEST(Ball, GrayReplicatedAndBackgroundConstant) {
  auto s = small_spec();
  const auto seq = render_ball(s);
  for (std::size_t t = 0; t < seq.frames(); ++t) {
    for (std::size_t y = 0; y < seq.height(); y += 5) {
      for (std::size_t x = 0; x < seq.width(); x += 5) {
        EXPECT_EQ(seq.at(t, y, x, 0), seq.at(t, y, x, 1));
        EXPECT_EQ(seq.at(t, y, x, 0), seq.at(t, y, x, 2));
      }
    }
    EXPECT_EQ(seq.at(t, 0, 0, 0), s.background);
    EXPECT_EQ(seq.at(t, 95, 0, 0), s.background);
  }
}

TEST(Ball, AntiAliasedAreaMatchesDisc) {
  auto s = small_spec();
  s.background = 0.0;
  s.intensity_amplitude = 0.0;
  s.base_intensity = 1.0;
  const auto seq = render_ball(s);
  const double area = std::numbers::pi * s.radius * s.radius;
  for (std::size_t t = 0; t < seq.frames(); t += 7) {
    double sum = 0;
    for (std::size_t y = 0; y < seq.height(); ++y) {
      for (std::size_t x = 0; x < seq.width(); ++x) sum += seq.at(t, y, x, 0);
    }
    EXPECT_NEAR(sum, area, 0.02 * area);
  }
}

TEST(Ball, Deterministic) {
  EXPECT_TRUE(render_ball(small_spec()) == render_ball(small_spec()));
}

TEST(GroundTruth, ScalesAmplitudeOnly) {
  auto s = small_spec();
  EXPECT_TRUE(render_ball_groundtruth(s, 1.0) == render_ball(s));
  const auto plain = render_ball(s);
  const auto gt = render_ball_groundtruth(s, 4.0);
  auto s4 = s;
  s4.intensity_amplitude = 80.0;
  EXPECT_TRUE(gt == render_ball(s4));
  // Differences confined to the disc.
  for (std::size_t t = 0; t < s.duration_frames; ++t) {
    const auto c = s.center_at(t);
    for (std::size_t y = 0; y < s.height; ++y) {
      for (std::size_t x = 0; x < s.width; ++x) {
        if (gt.at(t, y, x, 0) != plain.at(t, y, x, 0)) {
          EXPECT_LT(std::hypot(double(x) - c.x, double(y) - c.y), s.radius + 1.0);
        }
      }
    }
  }
}

TEST(Validation, Errors) {
  auto s = small_spec();
  s.velocity = {5, 5};
  EXPECT_THROW(render_ball(s), SpecError);
  s = small_spec();
  s.start = Vec2{5, 50};
  EXPECT_THROW(render_ball(s), SpecError);
  s = small_spec();
  s.base_intensity = 0.9;
  EXPECT_THROW(render_ball_groundtruth(s, 4.0), SpecError);
  s = small_spec();
  s.radius = 0;
  EXPECT_THROW(render_ball(s), SpecError);
}

TEST(Validation, MaxDurationKeepsBallInside) {
  BallSpec s;
  s.velocity = BallSpec::diagonal(7.0);
  const auto n = max_duration(s);
  EXPECT_GE(n, 40u);
  s.duration_frames = n;
  EXPECT_NO_THROW(validate(s));
  s.duration_frames = n + 1;
  EXPECT_THROW(validate(s), SpecError);
}

TEST(Text, ListsFields) {
  const auto txt = to_text(BallSpec{});
  EXPECT_NE(txt.find("radius=10\n"), std::string::npos);
  EXPECT_NE(txt.find("fps=60\n"), std::string::npos);
  EXPECT_NE(txt.find("background="), std::string::npos);
}
