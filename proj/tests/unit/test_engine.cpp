#include <gtest/gtest.h>

#include <random>

#include "courier/engine.hpp"
#include "courier/errors.hpp"
#include "courier/study.hpp"
#include "courier_test.hpp"
#include "oracle_fixtures.hpp"

namespace courier {
namespace {

using test::make_alternative;
using test::make_plan;
using test::variance_off;

const CostParams kCosts = ModelParams::defaults().cost;
const EmissionParams kEmissions = ModelParams::defaults().emission;

TEST(Engine, LegTimesSum) {
  const auto plan = make_plan({Mode::bike, Mode::subway, Mode::walk}, {1.0, 3.0, 0.35});
  // 0.2 h + 0.3 h + 0.1 h
  EXPECT_NEAR(eval_time(plan, {5.0, 10.0, 3.5}), 0.6, 1e-15);
}

TEST(Engine, AllCarOneHour) {
  const auto plan = make_plan({Mode::car, Mode::car, Mode::car}, {0.0, 7.1, 0.0});
  EXPECT_DOUBLE_EQ(eval_time(plan, {7.1, 7.1, 7.1}), 1.0);
}

TEST(Engine, WalkCostIsWage) {
  const auto plan = make_plan({Mode::walk, Mode::walk, Mode::walk}, {0.0, 3.5, 0.0});
  const auto c = eval_cost(plan, alternative(3), {0.0, 1.0, 0.0}, {}, 13.37, kCosts);
  EXPECT_NEAR(c.total(), 13.37, 1e-12);
}

TEST(Engine, CarCostOneHour) {
  const auto plan = make_plan({Mode::car, Mode::car, Mode::car}, {0.0, 7.1, 0.0});
  const auto c = eval_cost(plan, alternative(1), {0.0, 1.0, 0.0}, {}, 13.37, kCosts);
  // labor 13.37 + operating 0.60 * 7.1 + one hour of parking at $8
  EXPECT_NEAR(c.labor, 13.37, 1e-12);
  EXPECT_NEAR(c.operating, 4.26, 1e-12);
  EXPECT_NEAR(c.parking, 8.0, 1e-12);
  EXPECT_NEAR(c.total(), 25.63, 1e-12);
}

TEST(Engine, WalkSubwayWalkCost) {
  const auto plan = make_plan({Mode::walk, Mode::subway, Mode::walk}, {0.0, 8.5, 0.0});
  const auto c = eval_cost(plan, alternative(13), {0.0, 0.5, 0.0}, {0.0, 0.05, 0.0}, 13.37, kCosts);
  EXPECT_NEAR(c.total(), 13.37 * 0.55 + 2.75, 1e-12);
  EXPECT_NEAR(c.total(), 10.10, 0.005);
}

TEST(Engine, Emissions) {
  EXPECT_NEAR(eval_emission(make_plan({Mode::car, Mode::car, Mode::car}, {0, 2.0, 0}), kEmissions),
              1.92, 1e-12);
  EXPECT_EQ(eval_emission(make_plan({Mode::walk, Mode::walk, Mode::walk}, {0, 5.0, 0}), kEmissions),
            0.0);
  EXPECT_NEAR(
      eval_emission(make_plan({Mode::walk, Mode::subway, Mode::walk}, {0.4, 3.0, 0.2}), kEmissions),
      0.99, 1e-12);
}

TEST(Engine, OracleFixtures) {
  const auto fixtures = test::oracle_fixtures();
  ASSERT_GE(fixtures.size(), 20u);
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    std::string what;
    EXPECT_LE(test::oracle_discrepancy(fixtures[i], &what), 1e-9) << "fixture " << i << " " << what;
  }
}

TEST(Engine, EmissionOracleOnRandomPlans) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> mode(0, 6);
  std::uniform_real_distribution<double> miles(0.0, 8.0);
  for (int i = 0; i < 1000; ++i) {
    std::array<Mode, 3> m{};
    std::array<double, 3> d{};
    double want = 0.0;
    for (int l = 0; l < 3; ++l) {
      m[l] = static_cast<Mode>(mode(gen));
      d[l] = miles(gen);
      want += test::oracle::co2_per_mile(m[l]) * d[l];
    }
    EXPECT_LE(test::rel_err(eval_emission(make_plan(m, d), kEmissions), want), 1e-12);
  }
}

TEST(Engine, ScalePropertyVarianceOff) {
  const auto model = variance_off("emerging");
  for (const auto& f : test::oracle_fixtures()) {
    auto run = [&](double k) {
      std::array<double, 3> d = f.miles;
      for (auto& x : d) x *= k;
      const auto plan = make_plan(f.modes, d, f.from, f.to);
      PerLeg mph{};
      RngStream rng(0);
      for (std::size_t i = 0; i < 3; ++i) {
        mph[i] = sample_speed(f.modes[i], f.bucket, f.from, f.to, f.lbs, model, rng);
      }
      const PerLeg hours = leg_hours(plan, mph);
      const auto cost = eval_cost(plan, make_alternative(f.modes), hours, {}, 0.0, kCosts);
      return std::tuple(eval_time(plan, mph), cost, eval_emission(plan, kEmissions));
    };
    const auto [t1, c1, e1] = run(1.0);
    const auto [t2, c2, e2] = run(2.0);
    EXPECT_NEAR(t2, 2.0 * t1, 1e-12);
    EXPECT_NEAR(c2.operating, 2.0 * c1.operating, 1e-12);
    EXPECT_NEAR(e2, 2.0 * e1, 1e-12);
    EXPECT_EQ(c2.fares, c1.fares);
  }
}

// Bundled-city orders whose evaluations are checked against the oracle.
std::vector<Order> sample_orders(const std::string& preset, int n, std::uint64_t seed) {
  const auto model = variance_off(preset);
  std::vector<Order> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(sample_order(model, bundled_city(), order_stream(seed, i)));
  }
  return out;
}

TEST(Engine, EvaluateOrderMatchesOracleVarianceOff) {
  for (const char* preset : {"base", "pandemic", "emerging"}) {
    const auto model = variance_off(preset);
    for (const Order& o : sample_orders(preset, 40, 5)) {
      const auto rec = evaluate_order(o, model, bundled_city(), RngStream(1), 30);
      const TimeBucket b = rec.bucket;
      for (const auto& e : rec.evaluations) {
        if (!e.feasible) {
          EXPECT_EQ(e.cost_usd, 0.0);
          EXPECT_EQ(e.travel_time_h, 0.0);
          continue;
        }
        std::array<Mode, 3> modes{};
        std::array<double, 3> d{}, mph{}, waits{};
        for (std::size_t l = 0; l < 3; ++l) {
          const Leg& leg = e.plan.legs[l];
          modes[l] = leg.mode;
          d[l] = leg.distance_mi;
          mph[l] = test::oracle::speed(leg.mode, b, leg.from_zone, leg.to_zone, o.weight_lbs,
                                       model.scenario().pandemic);
          if (is_transit(leg.mode) && d[l] > 0.0) waits[l] = test::oracle::mean_wait(leg.mode, b);
        }
        const auto want = test::oracle::evaluate(modes, d, mph, waits, test::oracle::kWage);
        EXPECT_LE(test::rel_err(e.travel_time_h, want.time_h), 1e-9) << e.alternative_id;
        EXPECT_LE(test::rel_err(e.wait_time_h, want.wait_h), 1e-9) << e.alternative_id;
        EXPECT_LE(test::rel_err(e.cost_usd, want.cost), 1e-9) << e.alternative_id;
        EXPECT_LE(test::rel_err(e.co2_lb, want.co2), 1e-9) << e.alternative_id;
        EXPECT_NEAR(e.distance_mi, d[0] + d[1] + d[2], 1e-12);
      }
    }
  }
}

TEST(Engine, CostDecompositionAndContiguity) {
  const auto model = test::stochastic("emerging");
  for (const Order& o : sample_orders("emerging", 20, 9)) {
    const auto rec = evaluate_order(o, model, bundled_city(), RngStream(4), 10);
    for (const auto& e : rec.evaluations) {
      if (!e.feasible) continue;
      EXPECT_GE(e.cost.labor, 0.0);
      EXPECT_GE(e.cost.operating, 0.0);
      EXPECT_GE(e.cost.fares, 0.0);
      EXPECT_GE(e.cost.parking, 0.0);
      EXPECT_NEAR(e.cost_usd, e.cost.labor + e.cost.operating + e.cost.fares + e.cost.parking,
                  1e-12);
      EXPECT_EQ(e.plan.legs[0].end, e.plan.legs[1].start);
      EXPECT_EQ(e.plan.legs[1].end, e.plan.legs[2].start);
      EXPECT_EQ(e.plan.legs[0].start, o.origin);
      EXPECT_EQ(e.plan.legs[2].end, o.destination);
    }
  }
}

TEST(Engine, SingleModeCollapsesToOneLeg) {
  const Order o = sample_orders("base", 1, 2)[0];
  const auto geo = resolve_geometry(o, bundled_city());
  for (int id = 1; id <= 4; ++id) {
    const auto plan = plan_legs(o, alternative(id), bundled_city());
    EXPECT_EQ(plan.legs[0].distance_mi, 0.0);
    EXPECT_EQ(plan.legs[2].distance_mi, 0.0);
    EXPECT_EQ(plan.legs[1].distance_mi, geo.direct_distance_mi);
  }
}

TEST(Engine, LongTripIsWonByCar) {
  Order o;
  o.origin = {40.7075, -74.0110};       // Lower Manhattan
  o.destination = {40.8480, -73.9370};  // Washington Heights
  o.weight_lbs = 10.0;
  for (int minute : {5 * 60, 10 * 60, 17 * 60, 22 * 60}) {
    o.time_of_day_min = minute;
    const auto rec = evaluate_order(o, variance_off(), bundled_city(), RngStream(0), 1);
    ASSERT_GT(rec.direct_distance_mi, 7.0);
    EXPECT_EQ(rec.best_time, 1) << minute;
  }
}

TEST(Engine, CleanestIsBikeOrWalk) {
  for (const Order& o : sample_orders("base", 50, 21)) {
    if (o.weight_lbs > 300.0) continue;
    const auto rec = evaluate_order(o, test::stochastic(), bundled_city(), RngStream(2), 5);
    EXPECT_TRUE(rec.best_co2 == 2 || rec.best_co2 == 3) << rec.best_co2;
  }
}

TEST(Engine, HeavyOrderExcludesHumanPoweredAndRobot) {
  Order o = sample_orders("emerging", 1, 3)[0];
  o.weight_lbs = 350.0;
  const auto rec = evaluate_order(o, variance_off("emerging"), bundled_city(), RngStream(0), 1);
  for (const auto& e : rec.evaluations) {
    const auto& a = alternative(e.alternative_id);
    if (a.uses(Mode::bike) || a.uses(Mode::walk) || a.uses(Mode::robot)) {
      EXPECT_FALSE(e.feasible) << a.label();
    }
  }
}

TEST(Engine, ArgminInvariantUnderPositiveScaling) {
  const auto model = test::stochastic();
  for (const Order& o : sample_orders("base", 20, 8)) {
    const auto rec = evaluate_order(o, model, bundled_city(), RngStream(6), 5);
    auto scaled = rec.evaluations;
    for (auto& e : scaled) {
      e.travel_time_h *= 3.7;
      e.wait_time_h *= 3.7;
      e.cost_usd *= 3.7;
      e.co2_lb *= 3.7;
    }
    EXPECT_EQ(argmin(scaled, Criterion::time), rec.best_time);
    EXPECT_EQ(argmin(scaled, Criterion::cost), rec.best_cost);
    EXPECT_EQ(argmin(scaled, Criterion::co2), rec.best_co2);
  }
}

TEST(Engine, ArgminTieGoesToLowestId) {
  std::vector<Evaluation> evals(3);
  for (int i = 0; i < 3; ++i) {
    evals[i].alternative_id = 9 - i;
    evals[i].feasible = true;
    evals[i].cost_usd = 1.0;
  }
  EXPECT_EQ(argmin(evals, Criterion::cost), 7);
  evals[2].feasible = false;
  EXPECT_EQ(argmin(evals, Criterion::cost), 8);
}

TEST(Engine, PandemicCarAlwaysFastest) {
  const auto model = variance_off("pandemic");
  for (const Order& o : sample_orders("pandemic", 200, 13)) {
    const auto rec = evaluate_order(o, model, bundled_city(), RngStream(0), 1);
    const auto& subway = rec.evaluation(13).plan;
    if (subway.legs[0].distance_mi == 0.0 && subway.legs[2].distance_mi == 0.0) continue;
    const double car = rec.evaluation(1).delivery_time_h();
    for (const auto& e : rec.evaluations) {
      if (e.alternative_id != 1 && e.feasible) {
        EXPECT_LT(car, e.delivery_time_h()) << e.alternative_id;
      }
    }
    EXPECT_EQ(rec.best_time, 1);
  }
}

TEST(Engine, DeterministicGivenStream) {
  const Order o = sample_orders("base", 1, 17)[0];
  const auto a = evaluate_order(o, test::stochastic(), bundled_city(), RngStream(99), 20);
  const auto b = evaluate_order(o, test::stochastic(), bundled_city(), RngStream(99), 20);
  for (std::size_t i = 0; i < a.evaluations.size(); ++i) {
    EXPECT_EQ(a.evaluations[i].cost_usd, b.evaluations[i].cost_usd);
    EXPECT_EQ(a.evaluations[i].travel_time_h, b.evaluations[i].travel_time_h);
  }
}

TEST(Engine, InvalidOrders) {
  Order o = sample_orders("base", 1, 1)[0];
  o.weight_lbs = 400.0;
  try {
    evaluate_order(o, variance_off(), bundled_city(), RngStream(0), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_order);
    EXPECT_NE(std::string(e.what()).find("350"), std::string::npos);
  }
  o.weight_lbs = 10.0;
  o.destination = o.origin;
  EXPECT_THROW(evaluate_order(o, variance_off(), bundled_city(), RngStream(0), 1), Error);
  o.destination = {40.60, -73.70};
  try {
    evaluate_order(o, variance_off(), bundled_city(), RngStream(0), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::out_of_service_area);
  }
}

}  // namespace
}  // namespace courier
