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

#include "mrpf/series.hpp"
#include "oracles.hpp"

using namespace mrpf;

namespace {

Hamiltonian x_plus_z() {
  return Hamiltonian(1, {{PauliString::from_string("X"), 1.0}, {PauliString::from_string("Z"), 1.0}});
}

// Taylor coefficients of the dense correction operator in mu, Pauli-decomposed.
std::vector<std::map<PauliString, cplx>> oracle_orders(const Hamiltonian& h,
                                                       const ExponentialSchedule& s, int top) {
  auto coeffs = oracle::contour_coefficients(
      [&](cplx mu) { return oracle::dense_correction(h, s, mu); }, top, 0.5, 32);
  std::vector<std::map<PauliString, cplx>> out;
  for (const auto& c : coeffs) out.push_back(oracle::pauli_decompose(c, h.n_qubits()));
  return out;
}

}  // namespace

TEST(Series, ExactSeriesMatchesDenseExponential) {
  auto h = random_pauli(2, 3, 6);
  auto e = exact_series(h, 12, -1.0);
  const cplx lambda{0.0, 0.2};
  DenseOperator sum = DenseOperator::Zero(4, 4);
  for (int l = 0; l <= 12; ++l) sum += std::pow(lambda, l) * oracle::kron_poly(e[l]);
  EXPECT_LE(oracle::max_abs_diff(sum, oracle::taylor_exp(-lambda * oracle::kron_poly(h.total()))),
            1e-12);
}

TEST(Series, OrdersForK) {
  EXPECT_EQ(correction_orders(1), (std::vector<int>{3, 5}));
  EXPECT_EQ(correction_orders(2), (std::vector<int>{5, 7, 9}));
}

TEST(Series, XPlusZMatchesContourOracle) {
  const auto h = x_plus_z();
  for (int k = 1; k <= 2; ++k) {
    const auto s = build_schedule(k, h.size());
    const auto c = correction_series(s, h);
    const int top = 4 * k + 1;
    const auto ref = oracle_orders(h, s, top);
    for (int l = 0; l <= top; ++l) {
      const bool corrected = l >= 2 * k + 1 && l % 2 == 1;
      for (const auto& [p, v] : ref[l]) {
        if (corrected) {
          EXPECT_NEAR(c.per_order.at(l).coefficient(p).real(), v.real(), 1e-8)
              << "k=" << k << " l=" << l << " " << p.to_string();
          EXPECT_NEAR(v.imag(), 0.0, 1e-8);
        } else {
          EXPECT_NEAR(std::abs(v), 0.0, 1e-8) << "k=" << k << " l=" << l;
        }
      }
    }
    EXPECT_GT(c.diagnostics.beta_scale, 1e-3);
  }
}

TEST(Series, XPlusZLowestOrderIsNonTrivial) {
  // For k = 1 the leading correction is a real combination of X and Z; the
  // Y component is absent because each order is Hermitian and odd.
  const auto c = correction_series(1, x_plus_z());
  const auto& h3 = c.per_order.at(3);
  EXPECT_GT(h3.size(), 0u);
  EXPECT_EQ(h3.coefficient(PauliString::from_string("I")), cplx(0.0));
  EXPECT_EQ(c.term_count(3), h3.size());
  EXPECT_EQ(c.term_count(4), 0u);
}

TEST(Series, CommutingAndSingleTermAreEmpty) {
  EXPECT_TRUE(correction_series(1, heisenberg_chain(2)).empty());
  EXPECT_TRUE(correction_series(2, heisenberg_chain(2)).empty());
  Hamiltonian single(2, {{PauliString::from_string("XY"), 0.8}});
  EXPECT_TRUE(correction_series(1, single).empty());
  Hamiltonian diag(2, {{PauliString::from_string("ZI"), 0.3},
                       {PauliString::from_string("IZ"), -0.9},
                       {PauliString::from_string("ZZ"), 0.5}});
  EXPECT_TRUE(correction_series(2, diag).empty());
}

TEST(Series, RandomInstancesPassStructuralChecks) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto h = random_pauli(1 + seed % 3, 2 + seed % 3, 100 + seed);
    for (int k = 1; k <= 2; ++k) {
      const auto c = correction_series(k, h);
      EXPECT_LT(c.diagnostics.even_order_relative(), 1e-9);
      EXPECT_LT(c.diagnostics.antihermitian_relative(), 1e-9);
      for (const auto& [l, poly] : c.per_order) EXPECT_TRUE(poly.is_hermitian());
    }
  }
}

TEST(Series, CorrectedProductMatchesExactToOrder4kPlus1) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto h = random_pauli(2, 3, 300 + seed);
    for (int k = 1; k <= 2; ++k) {
      const auto s = build_schedule(k, h.size());
      const auto c = correction_series(s, h);
      const auto corrected = corrected_product_series(c, s, h);
      const auto exact = exact_series(h, 4 * k + 1);
      for (int l = 0; l <= 4 * k + 1; ++l) {
        const auto diff = corrected[l] - exact[l];
        EXPECT_LE(diff.max_abs(), 1e-9 * std::max(1.0, exact[l].max_abs()))
            << "seed " << seed << " k=" << k << " l=" << l;
      }
    }
  }
}

TEST(Series, StructuralErrorOnCorruptedSchedule) {
  // A schedule whose weights do not sum to one is not a valid product formula.
  const auto h = random_pauli(2, 3, 7);
  auto s = build_schedule(1, h.size());
  s.factors[0].multiplier *= 1.1;
  EXPECT_THROW(correction_series(s, h), StructuralError);
}

TEST(Series, Json) {
  const auto c = correction_series(1, x_plus_z());
  const auto j = corrections_to_json(c);
  EXPECT_EQ(j["gamma"], nlohmann::json({3, 5}));
  EXPECT_TRUE(j["orders"].contains("3"));
  EXPECT_TRUE(j["diagnostics"].contains("even_order_relative"));
  EXPECT_EQ(j["term_counts"]["3"], c.term_count(3));
}
