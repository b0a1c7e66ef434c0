#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "agp/errors.hpp"
#include "agp/montecarlo.hpp"
#include "oracles.hpp"

using agp::AgpModel;
using agp::CostParams;
using agp::Distribution;
using agp::GeometricProcess;
using agp::ItemStream;
using agp::SimConfig;
using agp::Trajectory;

namespace {

AgpModel exp_model(double lambda, double a, double mu, double b) {
  return AgpModel(GeometricProcess(Distribution::exponential(lambda), a),
                  GeometricProcess(Distribution::exponential(mu), b));
}

AgpModel paper_model() { return exp_model(0.0055, 1.1, 0.01, 0.95); }

}  // namespace

TEST(Random, UniformIsOpenAndCounterBased) {
  for (std::uint64_t c = 0; c < 1000; ++c) {
    const double u = agp::rng::uniform(42, c);
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_EQ(u, agp::rng::uniform(42, c));
  }
  EXPECT_NE(agp::rng::uniform(42, 0), agp::rng::uniform(43, 0));
  EXPECT_NE(agp::rng::derive(1, 0), agp::rng::derive(1, 1));
  EXPECT_NE(agp::rng::derive(1, 2), agp::rng::derive(2, 1));
}

TEST(Random, UniformSampleLooksUniform) {
  std::vector<double> u;
  for (std::uint64_t c = 0; c < 20000; ++c) u.push_back(agp::rng::uniform(7, c));
  EXPECT_LT(oracle::ks_distance(u, [](double x) { return std::clamp(x, 0.0, 1.0); }),
            oracle::dkw_epsilon(u.size()));
}

TEST(ItemStream, OnAndOffStreamsAreDistinct) {
  const auto model = exp_model(1.0, 1.0, 1.0, 1.0);
  const ItemStream s(99);
  std::set<double> seen;
  for (std::size_t i = 1; i <= 50; ++i) {
    seen.insert(s.on_time(model, i));
    seen.insert(s.off_time(model, i));
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Trajectory, ExtendingKeepsEarlierDraws) {
  const auto model = paper_model();
  Trajectory short_run(model, ItemStream(5));
  short_run.ensure_horizon(500.0);
  Trajectory long_run(model, ItemStream(5));
  long_run.ensure_horizon(50000.0);
  const auto a = short_run.events();
  const auto b = long_run.events();
  ASSERT_LE(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].start, b[i].start);
    EXPECT_EQ(a[i].duration, b[i].duration);
  }
}

TEST(Trajectory, EventsAlternateAndTile) {
  auto tr = agp::simulate_trajectory(paper_model(), 20000.0, ItemStream(11));
  const auto ev = tr.events();
  ASSERT_GE(ev.size(), 2u);
  EXPECT_EQ(ev.front().start, 0.0);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_EQ(ev[i].kind, i % 2 == 0 ? agp::Phase::on : agp::Phase::off);
    EXPECT_EQ(ev[i].index, i / 2 + 1);
    EXPECT_GT(ev[i].duration, 0.0);
    if (i + 1 < ev.size()) {
      EXPECT_DOUBLE_EQ(ev[i].start + ev[i].duration, ev[i + 1].start);
    }
  }
  EXPECT_GT(tr.horizon(), 20000.0);
}

TEST(Trajectory, StateAndCountsAgreeWithEvents) {
  Trajectory tr(paper_model(), ItemStream(3));
  for (double t = 0.0; t < 10000.0; t += 97.0) {
    const std::size_t n = tr.cycles_completed(t);
    EXPECT_LE(tr.cycle_end(n), t);
    EXPECT_GT(tr.cycle_end(n + 1), t);
    EXPECT_EQ(tr.on_at(t), tr.failure_time(n + 1) > t);
  }
  EXPECT_EQ(tr.cycles_completed(0.0), 0u);
  EXPECT_TRUE(tr.on_at(0.0));
  EXPECT_THROW(tr.on_time(0), std::invalid_argument);
  EXPECT_THROW(agp::simulate_trajectory(paper_model(), 0.0, ItemStream(1)), std::invalid_argument);
}

TEST(Trajectory, OnTimesFollowTheGeometricLaw) {
  // a^(i-1) X_i is Exp(lambda) for every i.
  const auto model = paper_model();
  std::vector<double> scaled;
  for (std::uint64_t r = 0; r < 20000; ++r) {
    const ItemStream s(agp::replication_key(17, r));
    scaled.push_back(std::pow(1.1, 4.0) * s.on_time(model, 5));
  }
  EXPECT_LT(oracle::ks_distance(scaled, [](double x) { return 1.0 - std::exp(-0.0055 * x); }),
            oracle::dkw_epsilon(scaled.size()));
}

TEST(Nrfrw, NoFailureInsideTheWarrantyCostsNothing) {
  const auto model = paper_model();
  for (std::uint64_t key = 0; key < 2000; ++key) {
    Trajectory tr(model, ItemStream(key));
    const double T = 100.0;
    const auto o = agp::nrfrw_outcome(tr, {1.0, 1.0}, T);
    if (tr.on_time(1) > T) {
      EXPECT_EQ(o.cost, 0.0);
      EXPECT_EQ(o.cycles, 0u);
      EXPECT_TRUE(o.on_at_T);
      EXPECT_EQ(o.xi, tr.on_time(1));
    } else if (!o.on_at_T && o.cycles == 0) {
      // Failed before T and still under repair at T: the first repair is covered.
      EXPECT_DOUBLE_EQ(o.cost, 1.0 + tr.off_time(1));
      EXPECT_EQ(o.xi, tr.failure_time(2));
    }
  }
}

TEST(Nrfrw, CostCountsRepairsStartedInsideThePeriod) {
  const auto model = paper_model();
  const CostParams cost{2.0, 0.5};
  const double T = 1460.0;
  for (std::uint64_t key = 0; key < 500; ++key) {
    Trajectory tr(model, ItemStream(key));
    const auto o = agp::nrfrw_outcome(tr, cost, T);
    double expect = 0.0;
    for (std::size_t i = 1; tr.failure_time(i) <= T; ++i) expect += cost.A + cost.delta * tr.off_time(i);
    EXPECT_NEAR(o.cost, expect, 1e-9 * std::max(1.0, expect));
    EXPECT_EQ(o.cost, agp::nrfrw_cost(tr, cost, T));
    EXPECT_GT(o.xi, T);
  }
}

TEST(Nrfrw, ErlangRenewalMeanMatches) {
  // a = b = 1 with Exp(1) phases: E N(10) = 10/2 - (1 - e^-20)/4.
  const auto model = exp_model(1.0, 1.0, 1.0, 1.0);
  SimConfig cfg{40000, 123, 2};
  const auto est = agp::estimate(
      [&](std::size_t, std::uint64_t key) {
        Trajectory tr(model, ItemStream(key));
        return static_cast<double>(tr.cycles_completed(10.0));
      },
      cfg);
  EXPECT_LT(std::fabs(est.mean - oracle::erlang2_renewal(10.0)), 4.0 * est.std_error);
}

TEST(Nrfrw, AvailabilityMatches) {
  const auto model = exp_model(0.0055, 1.0, 0.01, 1.0);
  SimConfig cfg{40000, 321, 4};
  const double t = 300.0;
  const auto est = agp::estimate(
      [&](std::size_t, std::uint64_t key) {
        Trajectory tr(model, ItemStream(key));
        return tr.on_at(t) ? 1.0 : 0.0;
      },
      cfg);
  EXPECT_LT(std::fabs(est.mean - oracle::availability(0.0055, 0.01, t)), 4.0 * est.std_error);
}

TEST(Rfrw, BranchesAndCoverage) {
  // With a = 1 every period ends with the same positive probability.
  const auto model = exp_model(0.0055, 1.0, 0.01, 0.95);
  const CostParams cost{1.0, 1.0};
  const double T = 300.0;
  for (std::uint64_t key = 0; key < 2000; ++key) {
    const ItemStream s(key);
    const auto o = agp::rfrw_outcome(model, s, cost, T, std::nullopt);
    double start = 0.0, c = 0.0;
    std::size_t k = 0;
    while (s.on_time(model, k + 1) <= T) {
      c += cost.A + cost.delta * s.off_time(model, k + 1);
      start += s.on_time(model, k + 1) + s.off_time(model, k + 1);
      ++k;
    }
    EXPECT_EQ(o.repairs, k);
    EXPECT_NEAR(o.cost, c, 1e-9 * std::max(1.0, c));
    EXPECT_DOUBLE_EQ(o.coverage_end, start + T);
    EXPECT_DOUBLE_EQ(o.xi, start + s.on_time(model, k + 1));
    EXPECT_GT(o.xi, o.coverage_end);
  }
}

TEST(Rfrw, RepairCapEndsCoverage) {
  const auto model = paper_model();
  const CostParams cost{1.0, 1.0};
  const double T = 1460.0;
  for (std::uint64_t key = 0; key < 500; ++key) {
    const ItemStream s(key);
    const auto o = agp::rfrw_outcome(model, s, cost, T, std::size_t{3});
    EXPECT_LE(o.repairs, 3u);
    if (o.repairs == 3) {
      double start = 0.0;
      for (std::size_t i = 1; i <= 3; ++i) start += s.on_time(model, i) + s.off_time(model, i);
      EXPECT_DOUBLE_EQ(o.coverage_end, start);
      EXPECT_DOUBLE_EQ(o.xi, start + s.on_time(model, 4));
    }
  }
}

TEST(Rfrw, SafetyCapThrows) {
  // With a long period nearly every failure is covered.
  const auto model = exp_model(1.0, 1.0, 1.0, 1.0);
  EXPECT_THROW(agp::rfrw_outcome(model, ItemStream(1), {1.0, 1.0}, 1e6, std::nullopt, 100),
               agp::SimulationCapError);
}

TEST(LifeCycle, ShortHorizonBuysOnce) {
  const auto model = paper_model();
  const CostParams cost{1.0, 1.0};
  for (std::uint64_t key = 0; key < 200; ++key) {
    const auto o = agp::life_cycle_cost(model, cost, agp::Nrfrw{1460.0}, 1e-6, key);
    EXPECT_EQ(o.purchases, 1u);
    Trajectory tr(model, ItemStream(agp::rng::derive(key, 0)));
    const auto one = agp::nrfrw_outcome(tr, cost, 1460.0);
    EXPECT_EQ(o.cost, one.cost);
    EXPECT_EQ(o.realized_L, one.xi);
  }
}

TEST(LifeCycle, RealizedLengthPassesLStar) {
  const auto model = paper_model();
  for (std::uint64_t key = 0; key < 200; ++key) {
    const auto o = agp::life_cycle_cost(model, {1.0, 1.0}, agp::Rrfrw{1460.0, 5}, 4380.0, key);
    EXPECT_GE(o.realized_L, 4380.0);
    EXPECT_GE(o.purchases, 1u);
  }
  EXPECT_THROW(agp::life_cycle_cost(model, {1.0, 1.0}, agp::Nrfrw{1.0}, 1e9, 1, 3),
               agp::SimulationCapError);
}

TEST(Summarize, MeanAndStandardError) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const auto e = agp::summarize(v);
  EXPECT_EQ(e.n, 4u);
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_DOUBLE_EQ(e.std_error, std::sqrt(5.0 / 3.0 / 4.0));
  const std::vector<double> flat(1000, 0.1);
  const auto f = agp::summarize(flat);
  EXPECT_EQ(f.mean, 0.1);
  EXPECT_EQ(f.std_error, 0.0);
}

TEST(Replications, ResultsIndependentOfWorkers) {
  const auto model = paper_model();
  auto runner = [&](std::size_t, std::uint64_t key) {
    Trajectory tr(model, ItemStream(key));
    return agp::nrfrw_cost(tr, {1.0, 1.0}, 1460.0);
  };
  const auto one = agp::for_each_replication(SimConfig{3000, 9, 1}, runner);
  for (std::size_t w : {2u, 3u, 8u}) {
    const auto many = agp::for_each_replication(SimConfig{3000, 9, w}, runner);
    EXPECT_EQ(one, many) << "workers = " << w;
  }
  const auto other = agp::for_each_replication(SimConfig{3000, 10, 1}, runner);
  EXPECT_NE(one, other);
}

TEST(Replications, ReportsSmallestFailingIndex) {
  auto runner = [](std::size_t r, std::uint64_t) -> double {
    if (r == 700 || r == 2500) throw agp::SimulationCapError("cap " + std::to_string(r));
    return 1.0;
  };
  for (std::size_t w : {1u, 4u}) {
    try {
      agp::for_each_replication(SimConfig{4000, 1, w}, runner);
      FAIL() << "expected ReplicationError";
    } catch (const agp::ReplicationError& e) {
      EXPECT_EQ(e.replication(), 700u);
      ASSERT_TRUE(e.cause());
      EXPECT_THROW(std::rethrow_exception(e.cause()), agp::SimulationCapError);
    }
  }
}

TEST(Replications, ConfigValidation) {
  EXPECT_THROW((SimConfig{0, 1, 1}.validate()), agp::InvalidParameter);
  EXPECT_THROW((SimConfig{10, 1, 0}.validate()), agp::InvalidParameter);
  EXPECT_THROW(agp::estimate([](std::size_t, std::uint64_t) { return 0.0; }, SimConfig{1, 1, 1}),
               agp::InvalidParameter);
}

TEST(Replications, BatchMeansAgreeWithStandardError) {
  // Means of independent batches scatter like the reported SE predicts.
  const auto model = paper_model();
  std::vector<double> batch_means;
  double se = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto e = agp::estimate(
        [&](std::size_t, std::uint64_t key) {
          Trajectory tr(model, ItemStream(key));
          return agp::nrfrw_cost(tr, {1.0, 1.0}, 1460.0);
        },
        SimConfig{2000, 1000 + seed, 2});
    batch_means.push_back(e.mean);
    se += e.std_error / 20.0;
  }
  const double spread = oracle::se_of(batch_means) * std::sqrt(20.0);
  EXPECT_GT(spread, 0.6 * se);
  EXPECT_LT(spread, 1.5 * se);
}
