#include <gtest/gtest.h>

#include <set>

#include "courier/errors.hpp"
#include "courier/params.hpp"
#include "courier/rng.hpp"
#include "courier_test.hpp"

namespace courier {
namespace {

using test::stochastic;
using test::variance_off;

TEST(Rng, SamePathSameSequence) {
  RngStream a = RngStream(42).derive(3).derive(9);
  RngStream b = RngStream(42).derive(3).derive(9);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, ReplicationIndexChangesSequence) {
  RngStream a = RngStream(42).derive(0);
  RngStream b = RngStream(42).derive(1);
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformAndBelowStayInRange) {
  RngStream r(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(r.below(13), 13u);
  }
}

TEST(Params, CarEarlyMorningAnyZoneIsTableMean) {
  const auto model = variance_off();
  RngStream rng(0);
  for (ZoneId z = 1; z <= 13; ++z) {
    EXPECT_DOUBLE_EQ(sample_speed(Mode::car, TimeBucket::early_morning, z, 10.0, model, rng), 7.1);
  }
}

TEST(Params, PandemicCarSpeed) {
  const auto model = variance_off("pandemic");
  RngStream rng(0);
  for (TimeBucket b : kAllBuckets) {
    for (ZoneId z : {1, 3, 8}) {
      EXPECT_DOUBLE_EQ(sample_speed(Mode::car, b, z, 10.0, model, rng), 52.0);
      EXPECT_DOUBLE_EQ(sample_speed(Mode::bus, b, z, 10.0, model, rng), 52.0);
    }
  }
}

TEST(Params, BikeAtLimitRunsAtHalfSpeed) {
  const auto model = variance_off();
  RngStream rng(0);
  for (TimeBucket b : kAllBuckets) {
    EXPECT_DOUBLE_EQ(sample_speed(Mode::bike, b, 2, 300.0, model, rng), 2.5);
  }
}

TEST(Params, SpeedMonotoneInWeightForBikeAndWalk) {
  const auto model = variance_off();
  RngStream rng(0);
  double prev_bike = 1e9, prev_walk = 1e9;
  for (double w = 1.0; w <= 40.0; w += 0.5) {
    const double bike = sample_speed(Mode::bike, TimeBucket::night, 4, w, model, rng);
    const double walk = sample_speed(Mode::walk, TimeBucket::night, 4, w, model, rng);
    EXPECT_LE(bike, prev_bike);
    EXPECT_LE(walk, prev_walk);
    prev_bike = bike;
    prev_walk = walk;
    EXPECT_EQ(sample_speed(Mode::car, TimeBucket::night, 4, w, model, rng),
              sample_speed(Mode::car, TimeBucket::night, 4, 1.0, model, rng));
  }
}

TEST(Params, SampledSpeedsArePositiveAndClamped) {
  const auto model = stochastic();
  RngStream rng(11);
  for (int i = 0; i < 20000; ++i) {
    for (Mode m : kAllModes) {
      const double s = sample_speed(m, TimeBucket::morning_early_afternoon, 3, 15.0, model, rng);
      ASSERT_GE(s, 0.5);
    }
  }
}

TEST(Params, StochasticBikeStaysInBand) {
  const auto model = stochastic();
  RngStream rng(2);
  for (int i = 0; i < 5000; ++i) {
    const double s = sample_speed(Mode::bike, TimeBucket::night, 4, 0.0, model, rng);
    ASSERT_GE(s, 4.5);
    ASSERT_LE(s, 5.5);
  }
}

TEST(Params, WageVarianceOffIsMedianSalary) {
  RngStream rng(0);
  EXPECT_DOUBLE_EQ(sample_wage(variance_off(), rng), 13.37);
}

TEST(Params, WageSampleMeanAndFloor) {
  const auto model = stochastic();
  RngStream rng = RngStream(3).derive(77);
  double sum = 0.0;
  constexpr int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double w = sample_wage(model, rng);
    ASSERT_GE(w, 7.25);
    sum += w;
  }
  EXPECT_NEAR(sum / n, 13.37, 0.05);
}

TEST(Params, SubwayWaitIsHalfHeadway) {
  RngStream rng(0);
  EXPECT_DOUBLE_EQ(
      waiting_time(Mode::subway, TimeBucket::morning_early_afternoon, variance_off(), rng), 0.05);
}

TEST(Params, StochasticWaitWithinHeadway) {
  const auto model = stochastic();
  RngStream rng(9);
  for (int i = 0; i < 5000; ++i) {
    const double w = waiting_time(Mode::bus, TimeBucket::night, model, rng);
    ASSERT_GE(w, 0.0);
    ASSERT_LT(w, 0.5);
  }
}

TEST(Params, PandemicSubwayClosedAtNight) {
  RngStream rng(0);
  try {
    waiting_time(Mode::subway, TimeBucket::night, variance_off("pandemic"), rng);
    FAIL() << "expected ServiceUnavailable";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::service_unavailable);
  }
  EXPECT_NO_THROW(waiting_time(Mode::subway, TimeBucket::morning_early_afternoon,
                               variance_off("pandemic"), rng));
}

TEST(Params, WalkHasNoWait) {
  RngStream rng(0);
  try {
    waiting_time(Mode::walk, TimeBucket::night, variance_off(), rng);
    FAIL() << "expected precondition violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition_violation);
  }
}

TEST(Params, BucketsPartitionTheDay) {
  const BucketHours h;
  EXPECT_EQ(h.bucket_of(0), TimeBucket::night);
  EXPECT_EQ(h.bucket_of(4 * 60), TimeBucket::early_morning);
  EXPECT_EQ(h.bucket_of(7 * 60 - 1), TimeBucket::early_morning);
  EXPECT_EQ(h.bucket_of(12 * 60), TimeBucket::morning_early_afternoon);
  EXPECT_EQ(h.bucket_of(16 * 60), TimeBucket::late_afternoon_evening);
  EXPECT_EQ(h.bucket_of(23 * 60 + 59), TimeBucket::night);
}

TEST(Params, PresetsAndWeightMixes) {
  const auto list = preset_names();
  const std::set<std::string> names(list.begin(), list.end());
  for (const char* n : {"base", "ws1", "ws2", "ws3", "ws4", "pandemic", "emerging"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
  EXPECT_DOUBLE_EQ(find_preset("ws1")->weight_mix, 0.15);
  EXPECT_DOUBLE_EQ(find_preset("ws2")->weight_mix, 0.35);
  EXPECT_DOUBLE_EQ(find_preset("ws3")->weight_mix, 0.50);
  EXPECT_DOUBLE_EQ(find_preset("ws4")->weight_mix, 0.85);
  EXPECT_TRUE(find_preset("pandemic")->pandemic);
  EXPECT_TRUE(find_preset("emerging")->emerging);
  EXPECT_FALSE(find_preset("nope").has_value());
}

TEST(Params, ValidateNamesTheKey) {
  ModelParams p = ModelParams::defaults();
  p.cost.car_per_mile = -1.0;
  try {
    p.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::config_error);
    EXPECT_NE(std::string(e.what()).find("costs.car_per_mile"), std::string::npos) << e.what();
  }
}

TEST(Params, ModeNamesRoundTrip) {
  for (Mode m : kAllModes) {
    EXPECT_EQ(parse_mode(to_string(m)), m);
    EXPECT_EQ(parse_mode(display_name(m)), m);
  }
  EXPECT_EQ(parse_mode("Air Taxi"), Mode::air_taxi);
  EXPECT_FALSE(parse_mode("boat").has_value());
}

}  // namespace
}  // namespace courier
