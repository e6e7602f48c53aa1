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
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "json.hpp"
#include "mrpf/errors.hpp"
#include "mrpf/schedule.hpp"
#include "mrpf/series.hpp"

namespace mrpf {

/**
 * One member of the correction ensemble: the unitary exp(alpha * pauli),
 * drawn with probability prob.
 *
 * epsilon = (lambda/2)^l beta, alpha = -(epsilon/|epsilon|) A, prob = |epsilon|/A,
 * so prob * alpha = -(lambda/2)^l beta.
 */
struct EnsembleEntry {
  int order = 0;
  PauliString pauli;
  double beta = 0.0;
  cplx epsilon;
  cplx alpha;
  double prob = 0.0;
};

struct CorrectionEnsemble {
  cplx lambda;
  int k = 1;
  std::vector<EnsembleEntry> entries;
  double A = 0.0;  // sum of |epsilon|

  bool empty() const { return entries.empty(); }
};

/// Entries with |beta| below this fraction of the largest |beta| are dropped.
inline constexpr double kEnsembleRelativeCutoff = 1e-14;

/// sgn(eps) = eps / |eps|, the complex phase; reduces to the real sign.
inline cplx complex_sign(cplx eps) {
  const double a = std::abs(eps);
  return a == 0.0 ? cplx{0.0, 0.0} : eps / a;
}

inline CorrectionEnsemble build_ensemble(const CorrectionSeries& c, cplx lambda) {
  CorrectionEnsemble out;
  out.lambda = lambda;
  out.k = c.k;
  const auto terms = extract_terms(c);
  double beta_max = 0.0;
  for (const auto& t : terms) beta_max = std::max(beta_max, std::abs(t.beta));
  if (terms.empty() || beta_max == 0.0) return out;
  if (lambda == cplx{0.0, 0.0}) {
    throw ValidationError("build_ensemble: lambda must be non-zero for a non-empty correction");
  }

  const cplx half = lambda / 2.0;
  for (const auto& t : terms) {
    if (std::abs(t.beta) < kEnsembleRelativeCutoff * beta_max) continue;
    // ||pauli|| = 1 by canonicalization.
    const cplx eps = std::pow(half, t.order) * t.beta;
    out.entries.push_back({t.order, t.pauli, t.beta, eps, {}, 0.0});
    out.A += std::abs(eps);
  }
  for (auto& e : out.entries) {
    e.alpha = -complex_sign(e.epsilon) * out.A;
    e.prob = std::abs(e.epsilon) / out.A;
  }
  return out;
}

/// One random step: S(lambda/2) exp(alpha P) S(lambda/2), or two bare half
/// schedules when the ensemble is empty.
struct SampledStep {
  std::optional<std::size_t> entry;  // index into the ensemble
  std::optional<PauliString> pauli;
  cplx alpha;
  std::uint64_t exponential_count = 0;  // 2N + 1, or 2N without a correction
};

/// Draws with a caller-owned engine so independent workers never share state.
template <class Engine>
SampledStep sample_step(const CorrectionEnsemble& e, const ExponentialSchedule& s, Engine& rng) {
  SampledStep step;
  const std::uint64_t n = s.N();
  if (e.empty()) {
    step.exponential_count = 2 * n;
    return step;
  }
  // Inverse-CDF on a 53-bit uniform from raw engine output.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  double acc = 0.0;
  std::size_t pick = e.entries.size() - 1;
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    acc += e.entries[i].prob;
    if (u < acc) {
      pick = i;
      break;
    }
  }
  step.entry = pick;
  step.pauli = e.entries[pick].pauli;
  step.alpha = e.entries[pick].alpha;
  step.exponential_count = 2 * n + 1;
  return step;
}

inline SampledStep sample_step(const CorrectionEnsemble& e, const ExponentialSchedule& s,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_step(e, s, rng);
}

inline nlohmann::json ensemble_to_json(const CorrectionEnsemble& e) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& x : e.entries) {
    entries.push_back({{"l", x.order},
                       {"pauli", x.pauli.to_string()},
                       {"beta", x.beta},
                       {"epsilon_re", x.epsilon.real()},
                       {"epsilon_im", x.epsilon.imag()},
                       {"alpha_re", x.alpha.real()},
                       {"alpha_im", x.alpha.imag()},
                       {"prob", x.prob}});
  }
  return {{"k", e.k},
          {"lambda_re", e.lambda.real()},
          {"lambda_im", e.lambda.imag()},
          {"A", e.A},
          {"entries", std::move(entries)}};
}

// --- a-priori bounds --------------------------------------------------------

/**
 * Closed-form error bounds for one step with |lambda| = t/r, with
 * x = (5^(k-1) + 1/2) |lambda| L Lambda:
 *
 *   A <= 2 x^(2k+1) / (2k+1)! e^x
 *   a  = 2 A
 *   b  = 2 x^(4k+2) / (4k+2)! e^x + A^2/2 e^A + 3A^2/4 + A^3/4
 *   ||D|| <= (5^(k-1) y)^(2k+1)/(2k+1)! e^(5^(k-1) y) + (y/2)^(2k+1)/(2k+1)! e^(y/2),
 *            y = |lambda| L Lambda
 *
 * and the channel distance is at most a^2 + 2b.
 */
struct TheoremBounds {
  int k = 1;
  double L = 0.0;
  double Lambda = 0.0;
  double lambda_abs = 0.0;
  double D_bound = 0.0;
  double A_bound = 0.0;
  double a_bound = 0.0;
  double b_bound = 0.0;
  double diamond_bound = 0.0;
};

namespace detail {

/// x^p / p! * e^x, evaluated in log space.
inline double power_exp_term(double x, int p) {
  if (x == 0.0) return 0.0;
  return std::exp(p * std::log(x) - std::lgamma(p + 1.0) + x);
}

inline double five_pow(int k) { return std::pow(5.0, k - 1); }

}  // namespace detail

inline TheoremBounds apriori_bounds(int k, double L, double Lambda, double lambda_abs) {
  if (k < 1) throw ValidationError("apriori_bounds needs k >= 1");
  if (!(L >= 0.0) || !(Lambda >= 0.0) || !(lambda_abs >= 0.0)) {
    throw ValidationError("apriori_bounds needs non-negative L, Lambda, |lambda|");
  }
  TheoremBounds b{k, L, Lambda, lambda_abs};
  const double y = lambda_abs * L * Lambda;
  const double x = (detail::five_pow(k) + 0.5) * y;
  const int lo = 2 * k + 1;
  const int hi = 4 * k + 2;

  b.D_bound = detail::power_exp_term(detail::five_pow(k) * y, lo) +
              detail::power_exp_term(y / 2.0, lo);
  const double A = 2.0 * detail::power_exp_term(x, lo);
  b.A_bound = A;
  b.a_bound = 2.0 * A;
  const double A2 = A * A;
  const double tail = A == 0.0 ? 0.0 : std::exp(2.0 * std::log(A) - std::log(2.0) + A);
  b.b_bound = 2.0 * detail::power_exp_term(x, hi) + tail + 0.75 * A2 + 0.25 * A2 * A;
  b.diamond_bound = b.a_bound * b.a_bound + 2.0 * b.b_bound;
  return b;
}

/// Spectral-norm bound on ||V(lambda) - S_2k(lambda)|| for a full step: the
/// half-step ||D|| bound evaluated at 2|lambda|.
inline double trotter_step_bound(int k, double L, double Lambda, double lambda_abs) {
  return apriori_bounds(k, L, Lambda, 2.0 * lambda_abs).D_bound;
}

inline nlohmann::json bounds_to_json(const TheoremBounds& b) {
  return {{"k", b.k},
          {"L", b.L},
          {"Lambda", b.Lambda},
          {"lambda_abs", b.lambda_abs},
          {"D_bound", b.D_bound},
          {"A_bound", b.A_bound},
          {"a_bound", b.a_bound},
          {"b_bound", b.b_bound},
          {"diamond_bound", b.diamond_bound}};
}

}  // namespace mrpf
