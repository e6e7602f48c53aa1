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

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "mrpf/errors.hpp"
#include "mrpf/hamiltonian.hpp"
#include "mrpf/pauli.hpp"
#include "mrpf/schedule.hpp"

namespace mrpf {

/// Taylor series of exp(lambda * sum_j H_j) to `max_order`.
inline OperatorSeries exact_series(const Hamiltonian& h, int max_order, double step_scale = 1.0) {
  return series_exp_term(h.total(), step_scale, max_order);
}

/// Truncated product, in schedule order, of the factor series
/// exp(multiplier * step_scale * lambda * H_term).
inline OperatorSeries schedule_series(const ExponentialSchedule& s, const Hamiltonian& h,
                                      double step_scale, int max_order) {
  if (s.L != h.size()) throw ValidationError("schedule and Hamiltonian disagree on L");
  OperatorSeries out = OperatorSeries::identity(h.n_qubits(), max_order);
  for (const auto& f : s.factors) {
    out = series_mul(out, series_exp_term(h.term_polynomial(f.term),
                                          f.multiplier * step_scale, max_order));
  }
  return out;
}

struct CorrectionDiagnostics {
  /// Largest coefficient modulus at orders 0..2k and 2k+2, 2k+4, ..., 4k.
  double even_order_residual = 0.0;
  /// Largest imaginary part at the odd orders in gamma, before symmetrization.
  double antihermitian_residual = 0.0;
  /// Largest |beta| over gamma.
  double beta_scale = 0.0;
  /// Coefficient magnitude attributed to double-precision roundoff; values
  /// below it are treated as zero.
  double roundoff_floor = 0.0;

  double even_order_relative() const {
    return beta_scale > 0.0 ? even_order_residual / beta_scale : 0.0;
  }
  double antihermitian_relative() const {
    return beta_scale > 0.0 ? antihermitian_residual / beta_scale : 0.0;
  }
};

/**
 * The correction operator V^dag D + D V^dag at half step, written as
 * sum_{l in gamma} (lambda/2)^l H_l with gamma = {2k+1, 2k+3, ..., 4k+1}.
 *
 * per_order[l] holds the Hermitian polynomial H_l; the (lambda/2)^l prefactor
 * is not applied.
 */
struct CorrectionSeries {
  int k = 1;
  std::size_t n_qubits = 0;
  std::vector<int> gamma;
  std::map<int, PauliPolynomial> per_order;
  CorrectionDiagnostics diagnostics;

  bool empty() const {
    return std::all_of(per_order.begin(), per_order.end(),
                       [](const auto& kv) { return kv.second.empty(); });
  }

  /// Number of distinct Pauli strings at order l.
  std::size_t term_count(int l) const {
    auto it = per_order.find(l);
    return it == per_order.end() ? 0 : it->second.size();
  }
};

inline constexpr double kStructuralTolerance = 1e-9;
inline constexpr double kRoundoffFloor = 1e-12;

inline std::vector<int> correction_orders(int k) {
  std::vector<int> gamma;
  for (int l = 2 * k + 1; l <= 4 * k + 1; l += 2) gamma.push_back(l);
  return gamma;
}

/**
 * Expands C = V^dag S + S V^dag - 2I in mu = lambda/2 to order 4k+1 and
 * returns its odd orders as Hermitian polynomials.
 *
 * Orders 0..2k and the even orders up to 4k vanish mathematically, and the
 * odd orders have real coefficients. A residual above
 * max(tolerance * beta_scale, roundoff floor) raises StructuralError.
 */
inline CorrectionSeries correction_series(const ExponentialSchedule& s, const Hamiltonian& h,
                                          double tolerance = kStructuralTolerance) {
  const int k = s.k;
  const int top = 4 * k + 1;
  const std::size_t n = h.n_qubits();

  const OperatorSeries S = schedule_series(s, h, 1.0, top);
  const OperatorSeries Vdag = exact_series(h, top, -1.0);
  OperatorSeries C = series_mul(Vdag, S) + series_mul(S, Vdag);
  C[0] -= PauliPolynomial::identity(n, 2.0);

  // One-norm bound on the order-l coefficient of C is 2 w^l / l!.
  double w = 0.0;
  for (const auto& f : s.factors) w += std::abs(f.multiplier * h[f.term].coeff);
  for (const auto& t : h.terms()) w += std::abs(t.coeff);
  std::vector<double> floor(static_cast<std::size_t>(top) + 1);
  double term = 2.0;
  for (int l = 0; l <= top; ++l) {
    if (l > 0) term *= w / l;
    floor[static_cast<std::size_t>(l)] = kRoundoffFloor * term;
  }

  CorrectionSeries out;
  out.k = k;
  out.n_qubits = n;
  out.gamma = correction_orders(k);
  out.diagnostics.roundoff_floor = *std::max_element(floor.begin(), floor.end());

  std::vector<std::pair<int, double>> even_residuals;
  for (int l = 0; l <= top; ++l) {
    const bool corrected = l >= 2 * k + 1 && (l % 2 == 1);
    if (corrected) continue;
    const double r = C[l].max_abs();
    even_residuals.emplace_back(l, r);
    out.diagnostics.even_order_residual = std::max(out.diagnostics.even_order_residual, r);
  }

  std::vector<std::pair<int, double>> anti_residuals;
  for (int l : out.gamma) {
    auto [herm, anti] = hermitian_split(C[l]);
    herm.prune_below(floor[static_cast<std::size_t>(l)]);
    const double r = anti.max_abs();
    anti_residuals.emplace_back(l, r);
    out.diagnostics.antihermitian_residual = std::max(out.diagnostics.antihermitian_residual, r);
    out.diagnostics.beta_scale = std::max(out.diagnostics.beta_scale, herm.max_abs());
    out.per_order.emplace(l, std::move(herm));
  }

  const double rel = tolerance * out.diagnostics.beta_scale;
  for (const auto& [l, r] : even_residuals) {
    if (r > std::max(rel, floor[static_cast<std::size_t>(l)])) {
      std::ostringstream msg;
      msg << "order " << l << " of the correction operator should vanish but has "
          << "coefficient modulus " << r;
      throw StructuralError(msg.str());
    }
  }
  for (const auto& [l, r] : anti_residuals) {
    if (r > std::max(rel, floor[static_cast<std::size_t>(l)])) {
      std::ostringstream msg;
      msg << "order " << l << " of the correction operator should be Hermitian but has "
          << "anti-Hermitian part of modulus " << r;
      throw StructuralError(msg.str());
    }
  }
  return out;
}

inline CorrectionSeries correction_series(int k, const Hamiltonian& h,
                                          double tolerance = kStructuralTolerance) {
  return correction_series(build_schedule(k, h.size()), h, tolerance);
}

/// One (order, string, coefficient) entry of some H_l. The string has unit
/// spectral norm and beta carries the magnitude and sign.
struct CorrectionTerm {
  int order = 0;
  PauliString pauli;
  double beta = 0.0;
};

inline std::vector<CorrectionTerm> extract_terms(const CorrectionSeries& c) {
  std::vector<CorrectionTerm> out;
  for (const auto& [l, poly] : c.per_order) {
    for (const auto& [s, coeff] : poly) {
      if (coeff.real() != 0.0) out.push_back({l, s, coeff.real()});
    }
  }
  return out;
}

/// S(lambda/2) [I - sum_l (lambda/2)^l H_l] S(lambda/2) as a series in lambda.
inline OperatorSeries corrected_product_series(const CorrectionSeries& c,
                                               const ExponentialSchedule& s,
                                               const Hamiltonian& h) {
  const int top = 4 * c.k + 1;
  const OperatorSeries half = schedule_series(s, h, 0.5, top);
  OperatorSeries middle = OperatorSeries::identity(h.n_qubits(), top);
  for (const auto& [l, poly] : c.per_order) {
    middle[l] -= poly * cplx{std::ldexp(1.0, -l), 0.0};
  }
  return series_mul(series_mul(half, middle), half);
}

/// {"k", "gamma", "orders": {"l": [{pauli, beta}]}, "term_counts", "diagnostics"}
inline nlohmann::json corrections_to_json(const CorrectionSeries& c) {
  nlohmann::json orders = nlohmann::json::object();
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [l, poly] : c.per_order) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [s, coeff] : poly) {
      arr.push_back({{"pauli", s.to_string()}, {"beta", coeff.real()}});
    }
    orders[std::to_string(l)] = std::move(arr);
    counts[std::to_string(l)] = poly.size();
  }
  const auto& d = c.diagnostics;
  return {{"k", c.k},
          {"n_qubits", c.n_qubits},
          {"gamma", c.gamma},
          {"orders", std::move(orders)},
          {"term_counts", std::move(counts)},
          {"diagnostics",
           {{"even_order_residual", d.even_order_residual},
            {"antihermitian_residual", d.antihermitian_residual},
            {"beta_scale", d.beta_scale},
            {"roundoff_floor", d.roundoff_floor},
            {"even_order_relative", d.even_order_relative()},
            {"antihermitian_relative", d.antihermitian_relative()}}}};
}

}  // namespace mrpf
