// Copyright 2026 The mrpf Authors
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

#include <limits>

#include "mrpf/bench.hpp"

using namespace mrpf;

TEST(Bench, SlopeFits) {
  std::vector<double> x = {1, 2, 4, 8};
  std::vector<double> y = {3, 12, 48, 192};
  EXPECT_NEAR(*loglog_slope(x, y), 2.0, 1e-12);
  EXPECT_FALSE(loglog_slope(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}));
  EXPECT_FALSE(loglog_slope(x, std::vector<double>{1, 0, 1, 1}));
  EXPECT_THROW(ols_slope(std::vector<double>{1, 1}, std::vector<double>{1, 2}), ValidationError);
}

TEST(Bench, ConvergeRecordsAndAccounting) {
  const auto h = heisenberg_chain(2, 1.0);
  RunConfig cfg;
  cfg.k = 1;
  cfg.t = 0.8;
  cfg.r_values = {4, 8, 16, 32};
  cfg.seed = 3;
  const auto res = run_converge(h, cfg);
  ASSERT_EQ(res.records.size(), 8u);
  const auto N = build_schedule(1, h.size()).N();
  for (const auto& r : res.records) {
    EXPECT_TRUE(std::isfinite(r.error));
    EXPECT_GE(r.error, 0.0);
    if (r.method == Method::trotter_suzuki_2k) {
      EXPECT_EQ(r.exponential_count, static_cast<std::uint64_t>(r.r) * N);
    } else {
      EXPECT_EQ(r.exponential_count, static_cast<std::uint64_t>(r.r) * (2 * N + 1));
    }
    EXPECT_LE(r.error, r.bound);
  }
  ASSERT_TRUE(res.trotter_slope);
  ASSERT_TRUE(res.modified_slope);
  EXPECT_NEAR(*res.trotter_slope, -2.0, 0.3);
  EXPECT_NEAR(*res.modified_slope, -5.0, 0.3);

  const auto csv = convergence_to_csv(res);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kConvergenceCsvHeader);
  EXPECT_EQ(csv, convergence_to_csv(run_converge(h, cfg)));
}

TEST(Bench, SingleRHasNoSlope) {
  RunConfig cfg;
  cfg.t = 0.5;
  cfg.r_values = {2};
  const auto res = run_converge(heisenberg_chain(2, 1.0), cfg);
  EXPECT_EQ(res.records.size(), 2u);
  EXPECT_FALSE(res.trotter_slope);
  EXPECT_FALSE(convergence_to_json(res)["slopes"].contains("modified_4k1"));
}

TEST(Bench, ConfigValidation) {
  RunConfig cfg;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.r_values = {1, 0};
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.r_values = {1};
  cfg.t = -1.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Bench, MinimalSegments) {
  auto f = [](std::int64_t r) { return 1.0 / static_cast<double>(r * r); };
  EXPECT_EQ(minimal_segments(f, 2.0), 1);
  EXPECT_EQ(minimal_segments(f, 1e-2), 10);
  EXPECT_EQ(minimal_segments(f, 0.99e-2), 11);
  EXPECT_THROW(minimal_segments([](std::int64_t) { return 1.0; }, 0.5), ValidationError);
  EXPECT_THROW(minimal_segments(f, 0.0), ValidationError);
}

TEST(Bench, CountTableLooseEpsilonGivesOneSegment) {
  // The bounds overflow for long single steps, so only an infinite target
  // accepts r = 1 for every row.
  const std::vector<int> ks = {1, 2};
  const std::vector<std::size_t> Ls = {2, 3};
  const std::vector<double> eps = {std::numeric_limits<double>::infinity()};
  const auto t = run_count_table(ks, Ls, eps, 1.0);
  for (const auto& row : t.rows) EXPECT_EQ(row.r, 1);
}

TEST(Bench, CountTableExponents) {
  const std::vector<int> ks = {1, 2};
  const std::vector<std::size_t> Ls = {2, 4};
  const std::vector<double> eps = {1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  const auto t = run_count_table(ks, Ls, eps, 10.0);
  for (const auto& f : t.fits) {
    ASSERT_TRUE(f.exponent);
    const double expect = f.method == Method::modified_4k1 ? -1.0 / (4 * f.k + 1) : -1.0 / (2 * f.k);
    EXPECT_NEAR(*f.exponent / expect, 1.0, 0.1) << method_name(f.method) << " k=" << f.k;
  }
  const auto csv = count_table_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "method,k,L,t,epsilon,r,per_step,exp_count");
  EXPECT_EQ(count_table_to_json(t)["fits"].size(), t.fits.size());
}
