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

// Test-only reference computations. Everything here works on dense matrices
// and never calls the series engine, so it can check it independently.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "mrpf/mrpf.hpp"

namespace mrpf::oracle {

/// Dense Pauli matrices built from 2x2 Kronecker products, independent of
/// the bit-twiddling realization in pauli_dense.
inline DenseOperator kron_pauli(const PauliString& p) {
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (std::size_t q = 0; q < p.n_qubits(); ++q) {
    DenseOperator s(2, 2);
    switch (p.letter(q)) {
      case 'I': s << 1, 0, 0, 1; break;
      case 'X': s << 0, 1, 1, 0; break;
      case 'Y': s << 0, cplx(0, -1), cplx(0, 1), 0; break;
      default: s << 1, 0, 0, -1; break;
    }
    DenseOperator next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * s;
    out = std::move(next);
  }
  return out;
}

inline DenseOperator kron_poly(const PauliPolynomial& p) {
  const Eigen::Index dim = Eigen::Index{1} << p.n_qubits();
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& [s, c] : p) m += c * kron_pauli(s);
  return m;
}

/// All 4^n Pauli strings on n qubits.
inline std::vector<PauliString> all_strings(std::size_t n) {
  std::vector<PauliString> out;
  std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < total; ++code) {
    PauliString p(n);
    std::size_t c = code;
    for (std::size_t q = 0; q < n; ++q, c >>= 2) p.set(q, "IXYZ"[c & 3]);
    out.push_back(p);
  }
  return out;
}

/// Coefficients c_P = Tr(P M) / dim in the Pauli basis.
inline std::map<PauliString, cplx> pauli_decompose(const DenseOperator& m, std::size_t n) {
  std::map<PauliString, cplx> out;
  const double dim = static_cast<double>(m.rows());
  for (const auto& p : all_strings(n)) out[p] = (kron_pauli(p) * m).trace() / dim;
  return out;
}

/// Taylor coefficients f_0..f_max of an entire matrix function, from samples
/// on a circle of the given radius (discrete Cauchy integral).
inline std::vector<DenseOperator> contour_coefficients(
    const std::function<DenseOperator(cplx)>& f, int max_order, double radius, int samples) {
  std::vector<DenseOperator> values;
  for (int m = 0; m < samples; ++m) {
    const double angle = 2.0 * std::numbers::pi * m / samples;
    values.push_back(f(std::polar(radius, angle)));
  }
  std::vector<DenseOperator> coeffs;
  for (int l = 0; l <= max_order; ++l) {
    DenseOperator acc = DenseOperator::Zero(values[0].rows(), values[0].cols());
    for (int m = 0; m < samples; ++m) {
      const double angle = -2.0 * std::numbers::pi * m * l / samples;
      acc += std::polar(1.0, angle) * values[m];
    }
    coeffs.push_back(acc / (samples * std::pow(radius, l)));
  }
  return coeffs;
}

/// Dense exponential of a Pauli-sum Hamiltonian via the scaled Taylor series
/// plus squaring; unrelated to the eigendecomposition route.
inline DenseOperator taylor_exp(const DenseOperator& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const DenseOperator scaled = a / std::pow(2.0, squarings);
  DenseOperator term = DenseOperator::Identity(a.rows(), a.cols());
  DenseOperator sum = term;
  for (int j = 1; j <= 30; ++j) {
    term = term * scaled / static_cast<double>(j);
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

/// The dense correction operator V(-mu)S(mu) + S(mu)V(-mu) - 2I, with every
/// schedule factor exponentiated by taylor_exp.
inline DenseOperator dense_correction(const Hamiltonian& h, const ExponentialSchedule& s,
                                      cplx mu) {
  DenseOperator H = kron_poly(h.total());
  const Eigen::Index dim = H.rows();
  DenseOperator S = DenseOperator::Identity(dim, dim);
  for (const auto& f : s.factors) {
    S = S * taylor_exp(f.multiplier * mu * kron_poly(h.term_polynomial(f.term)));
  }
  const DenseOperator Vdag = taylor_exp(-mu * H);
  return Vdag * S + S * Vdag - 2.0 * DenseOperator::Identity(dim, dim);
}

inline PauliPolynomial random_polynomial(std::size_t n, std::size_t terms, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> letter(0, 3);
  PauliPolynomial p(n);
  for (std::size_t i = 0; i < terms; ++i) {
    PauliString s(n);
    for (std::size_t q = 0; q < n; ++q) s.set(q, "IXYZ"[letter(rng)]);
    p.add_term(s, {u(rng), u(rng)});
  }
  p.prune();
  return p;
}

inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace mrpf::oracle
