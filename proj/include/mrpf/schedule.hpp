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

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "mrpf/dense.hpp"
#include "mrpf/errors.hpp"
#include "mrpf/hamiltonian.hpp"

namespace mrpf {

/// One exponential exp(multiplier * lambda * H_term) of a product formula.
struct ScheduleFactor {
  std::size_t term = 0;  // 0-based index into the Hamiltonian's terms
  double multiplier = 0.0;

  friend bool operator==(const ScheduleFactor&, const ScheduleFactor&) = default;
};

/**
 * The (2k)th-order Trotter-Suzuki formula as an ordered list of exponentials.
 *
 * factors[0] is the leftmost factor of the operator product. Adjacent
 * factors on the same term are merged, which gives 2 * 5^(k-1) * (L-1) + 1
 * factors for L >= 2.
 */
struct ExponentialSchedule {
  int k = 1;
  std::size_t L = 1;
  std::vector<ScheduleFactor> factors;

  std::size_t N() const { return factors.size(); }
};

/// p_k = 1 / (4 - 4^{1/(2k-1)}).
inline double suzuki_coefficient(int k) {
  if (k < 2) throw ValidationError("suzuki_coefficient needs k >= 2");
  return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
}

/// 2 * 5^(k-1) * (L-1) + 1, or 1 when L == 1.
inline std::uint64_t expected_exponential_count(int k, std::size_t L) {
  if (L <= 1) return 1;
  std::uint64_t five = 1;
  for (int i = 1; i < k; ++i) five *= 5;
  return 2 * five * (L - 1) + 1;
}

namespace detail {

inline void append_merged(std::vector<ScheduleFactor>& out, ScheduleFactor f) {
  if (!out.empty() && out.back().term == f.term) {
    out.back().multiplier += f.multiplier;
    if (out.back().multiplier == 0.0) out.pop_back();
    return;
  }
  if (f.multiplier != 0.0) out.push_back(f);
}

inline void append_scaled(std::vector<ScheduleFactor>& out,
                          const std::vector<ScheduleFactor>& src, double scale) {
  for (const auto& f : src) append_merged(out, {f.term, f.multiplier * scale});
}

}  // namespace detail

/**
 * Builds S_2k through the recursion
 *   S_2(x)  = prod_{i=1..L} e^{x H_i / 2} prod_{i=L..1} e^{x H_i / 2}
 *   S_2k(x) = S_{2k-2}(p_k x)^2 S_{2k-2}((1 - 4 p_k) x) S_{2k-2}(p_k x)^2.
 */
inline ExponentialSchedule build_schedule(int k, std::size_t L) {
  if (k < 1) throw ValidationError("build_schedule needs k >= 1");
  if (L < 1) throw ValidationError("build_schedule needs L >= 1");
  std::vector<ScheduleFactor> current;
  for (std::size_t i = 0; i < L; ++i) detail::append_merged(current, {i, 0.5});
  for (std::size_t i = L; i-- > 0;) detail::append_merged(current, {i, 0.5});

  for (int order = 2; order <= k; ++order) {
    const double p = suzuki_coefficient(order);
    std::vector<ScheduleFactor> next;
    next.reserve(5 * current.size());
    detail::append_scaled(next, current, p);
    detail::append_scaled(next, current, p);
    detail::append_scaled(next, current, 1.0 - 4.0 * p);
    detail::append_scaled(next, current, p);
    detail::append_scaled(next, current, p);
    current = std::move(next);
  }
  return {k, L, std::move(current)};
}

/// Ordered product of exp(multiplier * lambda * H_term), closed form per
/// Pauli factor.
inline DenseOperator schedule_to_dense(const ExponentialSchedule& s, const Hamiltonian& h,
                                       cplx lambda) {
  if (s.L != h.size()) throw ValidationError("schedule and Hamiltonian disagree on L");
  DenseOperator out = identity_dense(h.n_qubits());
  for (const auto& f : s.factors) {
    const auto& t = h[f.term];
    out = out * pauli_exp(t.pauli, f.multiplier * t.coeff * lambda);
  }
  return out;
}

/// Term indices are 1-based in the JSON form.
inline nlohmann::json schedule_to_json(const ExponentialSchedule& s) {
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : s.factors) {
    factors.push_back({{"term", f.term + 1}, {"multiplier", f.multiplier}});
  }
  return {{"k", s.k}, {"L", s.L}, {"N", s.N()}, {"factors", std::move(factors)}};
}

}  // namespace mrpf
