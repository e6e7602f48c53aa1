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
#include <complex>

#include "json.hpp"
#include "mrpf/dense.hpp"
#include "mrpf/hamiltonian.hpp"
#include "mrpf/sampler.hpp"
#include "mrpf/schedule.hpp"

namespace mrpf {

/// exp(lambda * H) from the dense Hamiltonian.
inline DenseOperator exact_evolution(const Hamiltonian& h, cplx lambda) {
  return exp_hamiltonian(pauli_dense(h.total()), lambda);
}

/// Every member S(lambda/2) exp(alpha P) S(lambda/2) with its probability, or
/// the single unitary S(lambda/2)^2 for an empty ensemble.
inline UnitaryMixture step_mixture(const CorrectionEnsemble& e, const ExponentialSchedule& s,
                                   const Hamiltonian& h) {
  const DenseOperator half = schedule_to_dense(s, h, e.lambda / 2.0);
  UnitaryMixture m;
  if (e.empty()) {
    m.members.emplace_back(1.0, half * half);
    return m;
  }
  m.members.reserve(e.entries.size());
  for (const auto& x : e.entries) {
    m.members.emplace_back(x.prob, half * pauli_exp(x.pauli, x.alpha) * half);
  }
  return m;
}

/// The probability-weighted average step sum_h p_h S U_h S.
inline DenseOperator mean_step(const CorrectionEnsemble& e, const ExponentialSchedule& s,
                               const Hamiltonian& h) {
  const DenseOperator half = schedule_to_dense(s, h, e.lambda / 2.0);
  if (e.empty()) return half * half;
  DenseOperator middle = DenseOperator::Zero(half.rows(), half.cols());
  for (const auto& x : e.entries) middle += x.prob * pauli_exp(x.pauli, x.alpha);
  return half * middle * half;
}

/**
 * Measured mixing-lemma quantities for one step, next to the a-priori bounds.
 *
 * a = max_h ||V - S U_h S||, b = ||V - sum_h p_h S U_h S|| (spectral), and the
 * channel distance bracketed by the Choi trace norm.
 */
struct MixingReport {
  double a_measured = 0.0;
  double b_measured = 0.0;
  double d_measured = 0.0;  // ||S(lambda/2) - V(lambda/2)||
  double A_measured = 0.0;
  double diamond_lower = 0.0;
  double diamond_upper = 0.0;
  double mixing_rhs = 0.0;  // a^2 + 2b
  double regime = 0.0;      // (5^(k-1) + 1/2) |lambda| L Lambda
  std::size_t ensemble_size = 0;
  TheoremBounds bounds;

  bool a_within_bound() const { return a_measured <= bounds.a_bound; }
  bool b_within_bound() const { return b_measured <= bounds.b_bound; }
  bool A_within_bound() const { return A_measured <= bounds.A_bound; }
  bool D_within_bound() const { return d_measured <= bounds.D_bound; }
  bool mixing_lemma_holds() const { return diamond_lower <= mixing_rhs; }
  bool theorem_holds() const { return diamond_lower <= bounds.diamond_bound; }
  bool convexity_holds() const { return b_measured <= a_measured * (1.0 + 1e-12) + 1e-15; }

  bool all_pass() const {
    return a_within_bound() && b_within_bound() && A_within_bound() && D_within_bound() &&
           mixing_lemma_holds() && theorem_holds() && convexity_holds();
  }
};

inline double regime_parameter(int k, std::size_t L, double Lambda, double lambda_abs) {
  return (std::pow(5.0, k - 1) + 0.5) * lambda_abs * static_cast<double>(L) * Lambda;
}

inline MixingReport measure(const CorrectionEnsemble& e, const ExponentialSchedule& s,
                            const Hamiltonian& h) {
  const cplx lambda = e.lambda;
  const DenseOperator V = exact_evolution(h, lambda);
  const DenseOperator Vhalf = exact_evolution(h, lambda / 2.0);
  const DenseOperator half = schedule_to_dense(s, h, lambda / 2.0);
  const UnitaryMixture mix = step_mixture(e, s, h);

  MixingReport r;
  for (const auto& [p, U] : mix.members) {
    r.a_measured = std::max(r.a_measured, spectral_norm(V - U));
  }
  r.b_measured = spectral_norm(V - mean_step(e, s, h));
  r.d_measured = spectral_norm(half - Vhalf);
  r.A_measured = e.A;
  r.ensemble_size = e.entries.size();

  const auto bracket = diamond_bracket(choi(mix), choi(V));
  r.diamond_lower = bracket.lower;
  r.diamond_upper = bracket.upper;
  r.mixing_rhs = r.a_measured * r.a_measured + 2.0 * r.b_measured;

  const auto st = stats(h);
  r.bounds = apriori_bounds(s.k, static_cast<double>(st.L), st.Lambda, std::abs(lambda));
  r.regime = regime_parameter(s.k, st.L, st.Lambda, std::abs(lambda));
  return r;
}

namespace detail {

inline cplx step_lambda(double t, int r) {
  if (r < 1) throw ValidationError("r must be at least 1");
  return {0.0, -t / r};
}

inline void check_ensemble_lambda(const CorrectionEnsemble& e, double t, int r) {
  const cplx expected = step_lambda(t, r);
  if (std::abs(e.lambda - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
    throw ValidationError("ensemble was built for a different step lambda");
  }
}

}  // namespace detail

/// ||V(-it) - M^r|| with M the exact mean step at lambda = -it/r.
inline double repeated_mean_error(const CorrectionEnsemble& e, const ExponentialSchedule& s,
                                  const Hamiltonian& h, double t, int r) {
  detail::check_ensemble_lambda(e, t, r);
  const DenseOperator M = mean_step(e, s, h);
  DenseOperator P = identity_dense(h.n_qubits());
  for (int i = 0; i < r; ++i) P = P * M;
  return spectral_norm(exact_evolution(h, {0.0, -t}) - P);
}

/// Choi trace-norm bracket of || V(-it) - E^r ||_diamond, with E the
/// random-unitary step channel.
inline DiamondBracket repeated_channel_bracket(const CorrectionEnsemble& e,
                                               const ExponentialSchedule& s,
                                               const Hamiltonian& h, double t, int r) {
  detail::check_ensemble_lambda(e, t, r);
  const DenseOperator step = superoperator(step_mixture(e, s, h));
  DenseOperator total = DenseOperator::Identity(step.rows(), step.cols());
  for (int i = 0; i < r; ++i) total = total * step;
  return diamond_bracket(choi_from_superoperator(total),
                         choi(exact_evolution(h, {0.0, -t})));
}

/// ||V(-it) - S_2k(-it/r)^r||, the plain Trotter-Suzuki error.
inline double trotter_error(const ExponentialSchedule& s, const Hamiltonian& h, double t,
                            int r) {
  const DenseOperator step = schedule_to_dense(s, h, detail::step_lambda(t, r));
  DenseOperator P = identity_dense(h.n_qubits());
  for (int i = 0; i < r; ++i) P = P * step;
  return spectral_norm(exact_evolution(h, {0.0, -t}) - P);
}

inline nlohmann::json report_to_json(const MixingReport& r) {
  return {{"a_measured", r.a_measured},
          {"b_measured", r.b_measured},
          {"d_measured", r.d_measured},
          {"A_measured", r.A_measured},
          {"diamond_lower", r.diamond_lower},
          {"diamond_upper", r.diamond_upper},
          {"mixing_rhs", r.mixing_rhs},
          {"regime", r.regime},
          {"ensemble_size", r.ensemble_size},
          {"bounds", bounds_to_json(r.bounds)},
          {"checks",
           {{"a_within_bound", r.a_within_bound()},
            {"b_within_bound", r.b_within_bound()},
            {"A_within_bound", r.A_within_bound()},
            {"D_within_bound", r.D_within_bound()},
            {"mixing_lemma", r.mixing_lemma_holds()},
            {"theorem_bound", r.theorem_holds()},
            {"convexity", r.convexity_holds()}}},
          {"pass", r.all_pass()}};
}

}  // namespace mrpf
