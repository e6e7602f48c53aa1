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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrpf/errors.hpp"
#include "mrpf/pauli.hpp"

namespace mrpf {

/// Dense complex matrix on 2^n dimensions.
using DenseOperator = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxDenseQubits = 10;
inline constexpr std::size_t kMaxChoiQubits = 6;

namespace detail {

inline void check_qubit_cap(std::size_t n_qubits, std::size_t cap, const char* what) {
  if (n_qubits > cap) {
    throw CapacityError(std::string(what) + ": " + std::to_string(n_qubits) +
                        " qubits exceeds the cap of " + std::to_string(cap));
  }
}

inline std::size_t qubits_of_dim(Eigen::Index dim) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

}  // namespace detail

inline DenseOperator identity_dense(std::size_t n_qubits) {
  detail::check_qubit_cap(n_qubits, kMaxDenseQubits, "identity_dense");
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return DenseOperator::Identity(dim, dim);
}

/// Kronecker product of single-qubit Paulis, qubit 0 most significant.
inline DenseOperator pauli_dense(const PauliString& p) {
  const std::size_t n = p.n_qubits();
  detail::check_qubit_cap(n, kMaxDenseQubits, "pauli_dense");
  const Eigen::Index dim = Eigen::Index{1} << n;
  std::uint64_t flip = 0;
  std::uint64_t zmask = 0;
  int y_count = 0;
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - q);
    if (p.x_bit(q)) flip |= bit;
    if (p.z_bit(q)) zmask |= bit;
    if (p.x_bit(q) && p.z_bit(q)) ++y_count;
  }
  // Y = i X Z: P|b> = i^{#Y} (-1)^{popcount(b & zmask)} |b ^ flip>.
  static const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const cplx base = kIPow[y_count % 4];
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (std::uint64_t col = 0; col < static_cast<std::uint64_t>(dim); ++col) {
    const double sign = (std::popcount(col & zmask) & 1) ? -1.0 : 1.0;
    m(static_cast<Eigen::Index>(col ^ flip), static_cast<Eigen::Index>(col)) = sign * base;
  }
  return m;
}

inline DenseOperator pauli_dense(const PauliPolynomial& p) {
  detail::check_qubit_cap(p.n_qubits(), kMaxDenseQubits, "pauli_dense");
  const Eigen::Index dim = Eigen::Index{1} << p.n_qubits();
  DenseOperator m = DenseOperator::Zero(dim, dim);
  for (const auto& [s, c] : p) m += c * pauli_dense(s);
  return m;
}

/// exp(theta * P) = cosh(theta) I + sinh(theta) P, exact since P^2 = I.
inline DenseOperator pauli_exp(const PauliString& p, cplx theta) {
  DenseOperator m = pauli_dense(p) * std::sinh(theta);
  m.diagonal().array() += std::cosh(theta);
  return m;
}

inline bool is_hermitian(const DenseOperator& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

/// exp(lambda * h) for Hermitian h by eigendecomposition.
inline DenseOperator exp_hamiltonian(const DenseOperator& h, cplx lambda) {
  if (!is_hermitian(h)) throw ValidationError("exp_hamiltonian: input is not Hermitian");
  if (lambda == cplx{0.0, 0.0}) return DenseOperator::Identity(h.rows(), h.cols());
  const DenseOperator herm = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseOperator> eig(herm);
  const Eigen::VectorXcd phases =
      (lambda * eig.eigenvalues().cast<cplx>().array()).exp().matrix();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

inline Eigen::VectorXd singular_values(const DenseOperator& a) {
  if (a.size() == 0) return Eigen::VectorXd();
  return Eigen::BDCSVD<DenseOperator>(a).singularValues();
}

/// Largest singular value.
inline double spectral_norm(const DenseOperator& a) {
  detail::check_qubit_cap(detail::qubits_of_dim(a.rows()), kMaxDenseQubits, "spectral_norm");
  const auto sv = singular_values(a);
  return sv.size() == 0 ? 0.0 : sv.maxCoeff();
}

/// Sum of singular values. Hermitian inputs go through the eigensolver.
inline double trace_norm(const DenseOperator& a) {
  if (a.size() == 0) return 0.0;
  if (is_hermitian(a, 1e-13)) {
    Eigen::SelfAdjointEigenSolver<DenseOperator> eig(0.5 * (a + a.adjoint()),
                                                     Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().sum();
  }
  return singular_values(a).sum();
}

/// A mixture of unitaries: rho -> sum_j p_j U_j rho U_j^dagger.
struct UnitaryMixture {
  std::vector<std::pair<double, DenseOperator>> members;
};

/**
 * Choi matrix J = sum_{ij} E(|i><j|) (x) |i><j| of a unitary mixture.
 *
 * A unitary channel gives the rank-one projector onto
 * sum_i U|i> (x) |i>, with trace dim.
 */
inline DenseOperator choi(const UnitaryMixture& channel) {
  if (channel.members.empty()) throw ValidationError("choi: empty channel");
  const Eigen::Index dim = channel.members.front().second.rows();
  detail::check_qubit_cap(detail::qubits_of_dim(dim), kMaxChoiQubits, "choi");
  DenseOperator j = DenseOperator::Zero(dim * dim, dim * dim);
  for (const auto& [p, u] : channel.members) {
    if (p < 0.0) throw ValidationError("choi: negative probability");
    if (u.rows() != dim || u.cols() != dim) throw ValidationError("choi: dimension mismatch");
    // psi[a * dim + i] = U(a, i)
    Eigen::VectorXcd psi(dim * dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index i = 0; i < dim; ++i) psi(a * dim + i) = u(a, i);
    }
    j.noalias() += p * psi * psi.adjoint();
  }
  return j;
}

inline DenseOperator choi(const DenseOperator& unitary) {
  return choi(UnitaryMixture{{{1.0, unitary}}});
}

/// Superoperator of rho -> sum_j p_j U_j rho U_j^dagger acting on row-major
/// vec(rho): vec(U rho U^dagger) = (U (x) conj(U)) vec(rho).
inline DenseOperator superoperator(const UnitaryMixture& channel) {
  if (channel.members.empty()) throw ValidationError("superoperator: empty channel");
  const Eigen::Index dim = channel.members.front().second.rows();
  detail::check_qubit_cap(detail::qubits_of_dim(dim), kMaxChoiQubits, "superoperator");
  DenseOperator s = DenseOperator::Zero(dim * dim, dim * dim);
  for (const auto& [p, u] : channel.members) {
    const DenseOperator uc = u.conjugate();
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = 0; b < dim; ++b) {
        s.block(a * dim, b * dim, dim, dim) += p * u(a, b) * uc;
      }
    }
  }
  return s;
}

/// Choi matrix from a superoperator in the convention of superoperator().
inline DenseOperator choi_from_superoperator(const DenseOperator& s) {
  Eigen::Index dim = 1;
  while (dim * dim < s.rows()) ++dim;
  // J[(a,i),(b,j)] = E(|i><j|)[a,b] = S[(a,b),(i,j)]
  DenseOperator j(dim * dim, dim * dim);
  for (Eigen::Index a = 0; a < dim; ++a)
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index b = 0; b < dim; ++b)
        for (Eigen::Index jj = 0; jj < dim; ++jj)
          j(a * dim + i, b * dim + jj) = s(a * dim + b, i * dim + jj);
  return j;
}

/// Trace-norm bracket of the diamond distance between two channels given by
/// their Choi matrices: ||dJ||_1 / dim <= ||E - F||_diamond <= ||dJ||_1.
struct DiamondBracket {
  double lower = 0.0;
  double upper = 0.0;
};

inline DiamondBracket diamond_bracket(const DenseOperator& choi_a, const DenseOperator& choi_b) {
  Eigen::Index dim = 1;
  while (dim * dim < choi_a.rows()) ++dim;
  const double tn = trace_norm(choi_a - choi_b);
  return {tn / static_cast<double>(dim), tn};
}

}  // namespace mrpf
