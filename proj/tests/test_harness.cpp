#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hotv/errors.hpp"
#include "hotv/harness.hpp"
#include "hotv/signals.hpp"
#include "oracles.hpp"

using namespace hotv;

namespace {

CampaignOptions small_options() {
  CampaignOptions opt;
  opt.n = 64;
  opt.orders = {1, 2};
  opt.search.coarse_points = 9;
  opt.search.refine_tol = 0.2;
  return opt;
}

}  // namespace

TEST(TrialSpec, DeterministicPerTrial) {
  const CampaignOptions opt;
  for (std::uint64_t id = 0; id < 50; ++id) {
    const auto a = make_trial_spec(42, id, opt);
    const auto b = make_trial_spec(42, id, opt);
    EXPECT_EQ(a.signal_seed, b.signal_seed);
    EXPECT_EQ(a.operator_seed, b.operator_seed);
    EXPECT_EQ(a.noise_seed, b.noise_seed);
    EXPECT_EQ(a.rows, b.rows);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_NE(a.signal_seed, a.operator_seed);
    EXPECT_NE(a.signal_seed, make_trial_spec(43, id, opt).signal_seed);
    if (id > 0) EXPECT_NE(a.signal_seed, make_trial_spec(42, id - 1, opt).signal_seed);
  }
}

TEST(TrialSpec, RangesAndExactRate) {
  const CampaignOptions opt;
  for (std::uint64_t id = 0; id < 500; ++id) {
    const auto s = make_trial_spec(7, id, opt);
    EXPECT_GE(s.rows, 64u);
    EXPECT_LE(s.rows, 256u);
    EXPECT_EQ(s.sampling_rate, static_cast<double>(s.rows) / 256.0);
    EXPECT_GE(s.sigma, 0.0);
    EXPECT_LT(s.sigma, 3.0);
  }
  CampaignOptions fixed = opt;
  fixed.sigma = 0.5;
  fixed.sampling_rate = 0.5;
  const auto s = make_trial_spec(7, 3, fixed);
  EXPECT_EQ(s.rows, 128u);
  EXPECT_EQ(s.sampling_rate, 0.5);
  EXPECT_EQ(s.sigma, 0.5);
}

TEST(Campaign, IndependentOfThreadCount) {
  auto opt = small_options();
  const auto one = run_1d_campaign(4, 11, opt);
  opt.jobs = 3;
  const auto three = run_1d_campaign(4, 11, opt);
  ASSERT_EQ(one.trials.size(), 4u);
  ASSERT_EQ(three.trials.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(one.trials[i].spec.trial_id, i);
    ASSERT_EQ(one.trials[i].orders.size(), three.trials[i].orders.size());
    for (std::size_t j = 0; j < one.trials[i].orders.size(); ++j) {
      EXPECT_EQ(one.trials[i].orders[j].lambda_opt, three.trials[i].orders[j].lambda_opt);
      EXPECT_EQ(one.trials[i].orders[j].l2_error, three.trials[i].orders[j].l2_error);
    }
  }
  // A trial run on its own reproduces its campaign entry.
  const auto solo = run_trial(make_trial_spec(11, 2, opt), opt);
  EXPECT_EQ(solo.orders[1].lambda_opt, one.trials[2].orders[1].lambda_opt);
}

TEST(Campaign, PersistedCsvReproducesSummary) {
  const auto table = run_1d_campaign(5, 3, small_options());
  ASSERT_EQ(table.failures, 0u);
  EXPECT_TRUE(table.valid);
  const auto summary = summarize_campaign(table.trials);

  std::stringstream ss;
  write_campaign_csv(ss, table.trials);
  const auto reread = read_campaign_csv(ss);
  ASSERT_EQ(reread.size(), 5u);
  const auto again = summarize_campaign(reread);

  const auto* k2 = summary.find(2);
  const auto* r2 = again.find(2);
  ASSERT_TRUE(k2 && r2);
  EXPECT_NEAR(k2->median_rel_error, r2->median_rel_error, 1e-12);
  EXPECT_NEAR(k2->mean_scaled_lambda, r2->mean_scaled_lambda, 1e-9 * k2->mean_scaled_lambda);

  // Independent recomputation from the trial table.
  std::vector<double> rel;
  double scaled_sum = 0.0;
  for (const auto& t : table.trials) {
    const double l1 = t.find(1)->lambda_opt;
    const double l2 = t.find(2)->lambda_opt;
    rel.push_back((l2 / 2.0 - l1) / l1);
    scaled_sum += l2 / 2.0;
  }
  std::sort(rel.begin(), rel.end());
  EXPECT_NEAR(k2->median_rel_error, rel[2], 1e-12);
  EXPECT_NEAR(k2->mean_scaled_lambda, scaled_sum / 5.0, 1e-12 * scaled_sum);
  EXPECT_EQ(k2->histogram.total(), 5u);
  EXPECT_EQ(summary.find(1)->median_rel_error, 0.0);
}

TEST(Campaign, NoiselessFullSamplingHitsTheCeiling) {
  auto opt = small_options();
  opt.orders = {1};
  opt.sigma = 0.0;
  opt.sampling_rate = 1.0;
  opt.density = 1.0;
  const auto r = run_trial(make_trial_spec(5, 0, opt), opt);
  ASSERT_FALSE(r.failed);
  EXPECT_TRUE(r.orders[0].range_too_narrow);
  EXPECT_NEAR(r.orders[0].lambda_opt, opt.search.grid_hi * 10.0, 1e-9 * opt.search.grid_hi);
}

TEST(Campaign, RejectsEmptySummary) {
  EXPECT_THROW(summarize_campaign({}), DomainError);
  TrialResult failed;
  failed.failed = true;
  EXPECT_THROW(summarize_campaign({failed}), DomainError);
}

TEST(Histogram, BinPlacement) {
  Histogram h;
  h.add(0.0);
  h.add(-0.10);
  h.add(-0.10);
  h.add(-0.10);
  h.add(-5.0);
  h.add(7.0);
  h.add(std::nan(""));
  EXPECT_EQ(h.counts[20], 1u);
  EXPECT_NEAR(Histogram::bin_lo(20), 0.0, 1e-15);
  EXPECT_EQ(h.counts[18], 3u);
  EXPECT_NEAR(Histogram::bin_lo(18), -0.10, 1e-15);
  EXPECT_EQ(h.underflow, 1u);
  EXPECT_EQ(h.overflow, 1u);
  EXPECT_EQ(h.total(), 6u);
}

TEST(Median, EvenAndOdd) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(Experiment2D, SeminormProfileMatchesDenseOperator) {
  const auto img = shepp_logan(32);
  const auto profile = seminorm_profile(img);
  for (int j = 1; j <= kReportedSeminorms; ++j) {
    const Eigen::MatrixXd d = oracle::pa_matrix_2d(j, 32, 32, true);
    const double ref = (d * oracle::to_eigen(img.pixels)).lpNorm<1>();
    EXPECT_NEAR(profile[j - 1], ref, 1e-12 * ref) << "order " << j;
  }
}

TEST(Experiment2D, RowsAndLambdas) {
  Experiment2DOptions opt;
  opt.orders = {1, 2, 3};
  opt.solver.outer_max = 30;
  const auto scaled = run_2d_experiment(Phantom::SheppLogan, 32, 1, 50.0, true, opt);
  ASSERT_EQ(scaled.rows.size(), 4u);
  EXPECT_EQ(scaled.find("scaled", 3)->lambda, 200.0);
  EXPECT_EQ(scaled.find("baseline", 0)->order, 0);
  EXPECT_EQ(scaled.truth_seminorms, seminorm_profile(shepp_logan(32)));
  const auto unscaled = run_2d_experiment(Phantom::SheppLogan, 32, 1, 50.0, false, opt);
  EXPECT_EQ(unscaled.find("unscaled", 3)->lambda, 50.0);
  // The order-1 reconstruction is identical in both modes.
  EXPECT_EQ(scaled.find("scaled", 1)->image.pixels, unscaled.find("unscaled", 1)->image.pixels);

  const auto problem = make_2d_problem(Phantom::SheppLogan, 32, 1, opt);
  EXPECT_NEAR(problem.realized_snr, 23.75, 0.02 * 23.75);
  EXPECT_EQ(problem.system.op.rows(), 512u);
  const auto base = least_squares_baseline(problem, 200);
  for (const auto& row : scaled.rows) {
    EXPECT_EQ(row.image.pixels.size(), 1024u);
    EXPECT_NEAR(row.rel_data_error, relative_data_error(problem.system, row.image.pixels), 1e-12);
  }
  EXPECT_EQ(base.image.pixels, scaled.find("baseline", 0)->image.pixels);
}

TEST(Experiment2D, MetricsCsvLayout) {
  Experiment2DOptions opt;
  opt.orders = {1};
  opt.solver.outer_max = 5;
  const auto r = run_2d_experiment(Phantom::Smooth, 32, 2, 10.0, true, opt);
  std::stringstream ss;
  write_metrics_csv(ss, r);
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "mode,k,lambda,rel_data_error,T1,T2,T3,T4,iterations,converged");
  std::getline(ss, line);
  EXPECT_EQ(line.rfind("phantom,", 0), 0u);
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 2);
  EXPECT_EQ(parse_phantom("shepp-logan"), Phantom::SheppLogan);
  EXPECT_EQ(parse_phantom("smooth"), Phantom::Smooth);
  EXPECT_FALSE(parse_phantom("circle"));
}
