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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mrpf/errors.hpp"

namespace mrpf {

using cplx = std::complex<double>;

/**
 * An n-qubit tensor product of single-qubit Paulis, without phase.
 *
 * Stored in symplectic form: one x bit and one z bit per qubit, packed into
 * 64-bit words. Letter encoding is I=(0,0), X=(1,0), Z=(0,1), Y=(1,1), with
 * Y understood as i*X*Z. Qubit 0 is the leftmost letter of the text form and
 * the most significant tensor factor of the dense realization.
 */
class PauliString {
 public:
  PauliString() = default;

  /// The identity string on `n_qubits` qubits.
  explicit PauliString(std::size_t n_qubits)
      : n_qubits_(n_qubits),
        x_((n_qubits + 63) / 64, 0),
        z_((n_qubits + 63) / 64, 0) {}

  /// Parses an uppercase letter string such as "XIZ".
  static PauliString from_string(std::string_view letters) {
    if (letters.empty()) {
      throw ValidationError("Pauli string must have at least one letter");
    }
    PauliString p(letters.size());
    for (std::size_t q = 0; q < letters.size(); ++q) {
      p.set(q, letters[q]);
    }
    return p;
  }

  std::size_t n_qubits() const { return n_qubits_; }

  bool x_bit(std::size_t q) const { return (x_[q / 64] >> (q % 64)) & 1u; }
  bool z_bit(std::size_t q) const { return (z_[q / 64] >> (q % 64)) & 1u; }

  char letter(std::size_t q) const {
    static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
    return kLetters[(x_bit(q) ? 1 : 0) | (z_bit(q) ? 2 : 0)];
  }

  void set(std::size_t q, char letter) {
    if (q >= n_qubits_) throw ValidationError("qubit index out of range");
    bool x = false;
    bool z = false;
    switch (letter) {
      case 'I': break;
      case 'X': x = true; break;
      case 'Y': x = z = true; break;
      case 'Z': z = true; break;
      default:
        throw ValidationError(std::string("invalid Pauli letter '") + letter +
                              "' (expected one of I, X, Y, Z)");
    }
    const std::uint64_t bit = std::uint64_t{1} << (q % 64);
    x_[q / 64] = x ? (x_[q / 64] | bit) : (x_[q / 64] & ~bit);
    z_[q / 64] = z ? (z_[q / 64] | bit) : (z_[q / 64] & ~bit);
  }

  bool is_identity() const {
    return std::all_of(x_.begin(), x_.end(), [](auto w) { return w == 0; }) &&
           std::all_of(z_.begin(), z_.end(), [](auto w) { return w == 0; });
  }

  /// Number of non-identity letters.
  std::size_t weight() const {
    std::size_t w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) w += std::popcount(x_[i] | z_[i]);
    return w;
  }

  bool commutes_with(const PauliString& other) const {
    check_same_size(other);
    int parity = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      parity ^= std::popcount((x_[i] & other.z_[i]) ^ (z_[i] & other.x_[i])) & 1;
    }
    return parity == 0;
  }

  std::string to_string() const {
    std::string s(n_qubits_, 'I');
    for (std::size_t q = 0; q < n_qubits_; ++q) s[q] = letter(q);
    return s;
  }

  /// Builds a string from packed symplectic words (bits above n_qubits must
  /// be clear).
  static PauliString from_words(std::size_t n_qubits,
                                std::vector<std::uint64_t> x,
                                std::vector<std::uint64_t> z) {
    PauliString p;
    p.n_qubits_ = n_qubits;
    p.x_ = std::move(x);
    p.z_ = std::move(z);
    return p;
  }

  const std::vector<std::uint64_t>& x_words() const { return x_; }
  const std::vector<std::uint64_t>& z_words() const { return z_; }

  void check_same_size(const PauliString& other) const {
    if (n_qubits_ != other.n_qubits_) {
      throw ValidationError("Pauli string size mismatch: " +
                            std::to_string(n_qubits_) + " vs " +
                            std::to_string(other.n_qubits_));
    }
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

/// A Pauli string times a power of i.
struct PhasedPauli {
  std::uint8_t i_power = 0;  // phase = i^i_power
  PauliString string;

  cplx phase() const {
    static const cplx kPhases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return kPhases[i_power & 3u];
  }
};

/// Exact product a*b of two Pauli strings, including phase.
inline PhasedPauli mul_strings(const PauliString& a, const PauliString& b) {
  a.check_same_size(b);
  // With Y = i X Z, a letter is i^{xz} X^x Z^z. Moving Z^{z1} past X^{x2}
  // costs (-1)^{z1 x2}; re-expressing the result in letter form removes
  // i^{x3 z3}.
  const auto& ax = a.x_words();
  const auto& az = a.z_words();
  const auto& bx = b.x_words();
  const auto& bz = b.z_words();
  std::vector<std::uint64_t> x(ax.size()), z(az.size());
  int log_i = 0;
  for (std::size_t w = 0; w < ax.size(); ++w) {
    x[w] = ax[w] ^ bx[w];
    z[w] = az[w] ^ bz[w];
    log_i += std::popcount(ax[w] & az[w]) + std::popcount(bx[w] & bz[w]) +
             2 * std::popcount(az[w] & bx[w]) - std::popcount(x[w] & z[w]);
  }
  return {static_cast<std::uint8_t>(((log_i % 4) + 4) % 4),
          PauliString::from_words(a.n_qubits(), std::move(x), std::move(z))};
}

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    std::size_t seed = p.n_qubits();
    auto mix = [&seed](std::uint64_t v) {
      seed ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL +
              (seed << 6) + (seed >> 2);
    };
    for (auto w : p.x_words()) mix(w);
    for (auto w : p.z_words()) mix(w);
    return seed;
  }
};

/**
 * A complex linear combination of Pauli strings on a fixed number of qubits.
 *
 * Coefficients whose modulus falls below kRelativePrune times the largest
 * modulus in the polynomial are dropped after every arithmetic operation.
 * Iteration order is the ordering of PauliString, so output is deterministic.
 */
class PauliPolynomial {
 public:
  static constexpr double kRelativePrune = 1e-14;
  using TermMap = std::map<PauliString, cplx>;

  PauliPolynomial() = default;
  explicit PauliPolynomial(std::size_t n_qubits) : n_qubits_(n_qubits) {}

  static PauliPolynomial identity(std::size_t n_qubits, cplx coeff = 1.0) {
    PauliPolynomial p(n_qubits);
    p.add_term(PauliString(n_qubits), coeff);
    return p;
  }

  static PauliPolynomial single(const PauliString& s, cplx coeff = 1.0) {
    PauliPolynomial p(s.n_qubits());
    p.add_term(s, coeff);
    return p;
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  auto begin() const { return terms_.begin(); }
  auto end() const { return terms_.end(); }

  cplx coefficient(const PauliString& s) const {
    auto it = terms_.find(s);
    return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
  }

  /// Accumulates `coeff` onto `s` without pruning; call prune() afterwards.
  void add_term(const PauliString& s, cplx coeff) {
    if (s.n_qubits() != n_qubits_) {
      throw ValidationError("Pauli polynomial size mismatch: " +
                            std::to_string(n_qubits_) + " vs " +
                            std::to_string(s.n_qubits()));
    }
    if (coeff == cplx{0.0, 0.0}) return;
    auto [it, inserted] = terms_.try_emplace(s, coeff);
    if (!inserted) it->second += coeff;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [s, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Sum of coefficient moduli (an upper bound on the spectral norm).
  double one_norm() const {
    double m = 0.0;
    for (const auto& [s, c] : terms_) m += std::abs(c);
    return m;
  }

  void prune() {
    const double threshold = kRelativePrune * max_abs();
    std::erase_if(terms_, [threshold](const auto& kv) {
      const double a = std::abs(kv.second);
      return a == 0.0 || a < threshold;
    });
  }

  /// Drops every coefficient with modulus below an absolute floor.
  void prune_below(double floor) {
    std::erase_if(terms_, [floor](const auto& kv) {
      return std::abs(kv.second) < floor;
    });
  }

  bool is_hermitian() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const auto& kv) { return kv.second.imag() == 0.0; });
  }

  PauliPolynomial& operator+=(const PauliPolynomial& o) {
    check_same_size(o);
    for (const auto& [s, c] : o.terms_) add_term(s, c);
    prune();
    return *this;
  }
  PauliPolynomial& operator-=(const PauliPolynomial& o) {
    check_same_size(o);
    for (const auto& [s, c] : o.terms_) add_term(s, -c);
    prune();
    return *this;
  }
  PauliPolynomial& operator*=(cplx scalar) {
    if (scalar == cplx{0.0, 0.0}) {
      terms_.clear();
      return *this;
    }
    for (auto& [s, c] : terms_) c *= scalar;
    return *this;
  }

  friend PauliPolynomial operator+(PauliPolynomial a, const PauliPolynomial& b) {
    return a += b;
  }
  friend PauliPolynomial operator-(PauliPolynomial a, const PauliPolynomial& b) {
    return a -= b;
  }
  friend PauliPolynomial operator*(PauliPolynomial a, cplx s) { return a *= s; }
  friend PauliPolynomial operator*(cplx s, PauliPolynomial a) { return a *= s; }

  friend bool operator==(const PauliPolynomial&, const PauliPolynomial&) = default;

  void check_same_size(const PauliPolynomial& o) const {
    if (n_qubits_ != o.n_qubits_) {
      throw ValidationError("Pauli polynomial size mismatch: " +
                            std::to_string(n_qubits_) + " vs " +
                            std::to_string(o.n_qubits_));
    }
  }

 private:
  std::size_t n_qubits_ = 0;
  TermMap terms_;
};

/// Distributes the product over all term pairs and merges like strings.
inline PauliPolynomial poly_mul(const PauliPolynomial& a, const PauliPolynomial& b) {
  a.check_same_size(b);
  PauliPolynomial out(a.n_qubits());
  for (const auto& [sa, ca] : a) {
    for (const auto& [sb, cb] : b) {
      const PhasedPauli prod = mul_strings(sa, sb);
      out.add_term(prod.string, prod.phase() * ca * cb);
    }
  }
  out.prune();
  return out;
}

/// Splits p into p = hermitian + antihermitian. Pauli strings are Hermitian,
/// so this is the real/imaginary split of the coefficients.
inline std::pair<PauliPolynomial, PauliPolynomial> hermitian_split(
    const PauliPolynomial& p) {
  PauliPolynomial herm(p.n_qubits());
  PauliPolynomial anti(p.n_qubits());
  for (const auto& [s, c] : p) {
    herm.add_term(s, c.real());
    anti.add_term(s, cplx{0.0, c.imag()});
  }
  return {std::move(herm), std::move(anti)};
}

/**
 * Truncated power series sum_l lambda^l P_l in a formal parameter lambda,
 * with Pauli-polynomial coefficients. Orders above max_order are discarded.
 */
class OperatorSeries {
 public:
  OperatorSeries() = default;
  OperatorSeries(std::size_t n_qubits, int max_order)
      : n_qubits_(n_qubits), max_order_(max_order) {
    if (max_order < 0) throw ValidationError("max_order must be non-negative");
    orders_.assign(static_cast<std::size_t>(max_order) + 1,
                   PauliPolynomial(n_qubits));
  }

  static OperatorSeries identity(std::size_t n_qubits, int max_order) {
    OperatorSeries s(n_qubits, max_order);
    s.orders_[0] = PauliPolynomial::identity(n_qubits);
    return s;
  }

  std::size_t n_qubits() const { return n_qubits_; }
  int max_order() const { return max_order_; }

  const PauliPolynomial& operator[](int order) const {
    return orders_.at(static_cast<std::size_t>(order));
  }
  PauliPolynomial& operator[](int order) {
    return orders_.at(static_cast<std::size_t>(order));
  }

  OperatorSeries truncated(int max_order) const {
    OperatorSeries out(n_qubits_, std::min(max_order, max_order_));
    for (int l = 0; l <= out.max_order_; ++l) out[l] = (*this)[l];
    return out;
  }

  OperatorSeries& operator+=(const OperatorSeries& o) {
    check_same_size(o);
    *this = truncated(o.max_order_);
    for (int l = 0; l <= max_order_; ++l) (*this)[l] += o[l];
    return *this;
  }
  OperatorSeries& operator-=(const OperatorSeries& o) {
    check_same_size(o);
    *this = truncated(o.max_order_);
    for (int l = 0; l <= max_order_; ++l) (*this)[l] -= o[l];
    return *this;
  }
  OperatorSeries& operator*=(cplx scalar) {
    for (auto& p : orders_) p *= scalar;
    return *this;
  }

  friend OperatorSeries operator+(OperatorSeries a, const OperatorSeries& b) {
    return a += b;
  }
  friend OperatorSeries operator-(OperatorSeries a, const OperatorSeries& b) {
    return a -= b;
  }
  friend OperatorSeries operator*(OperatorSeries a, cplx s) { return a *= s; }

  friend bool operator==(const OperatorSeries&, const OperatorSeries&) = default;

  void check_same_size(const OperatorSeries& o) const {
    if (n_qubits_ != o.n_qubits_) {
      throw ValidationError("operator series size mismatch: " +
                            std::to_string(n_qubits_) + " vs " +
                            std::to_string(o.n_qubits_));
    }
  }

 private:
  std::size_t n_qubits_ = 0;
  int max_order_ = 0;
  std::vector<PauliPolynomial> orders_;
};

/// Truncated Cauchy product; the result keeps min(a.max_order, b.max_order).
inline OperatorSeries series_mul(const OperatorSeries& a, const OperatorSeries& b) {
  a.check_same_size(b);
  const int top = std::min(a.max_order(), b.max_order());
  OperatorSeries out(a.n_qubits(), top);
  for (int i = 0; i <= top; ++i) {
    if (a[i].empty()) continue;
    for (int j = 0; i + j <= top; ++j) {
      if (b[j].empty()) continue;
      out[i + j] += poly_mul(a[i], b[j]);
    }
  }
  return out;
}

/// exp(multiplier * lambda * h) expanded to `max_order` in lambda.
inline OperatorSeries series_exp_term(const PauliPolynomial& h, double multiplier,
                                      int max_order) {
  OperatorSeries out = OperatorSeries::identity(h.n_qubits(), max_order);
  if (multiplier == 0.0 || h.empty()) return out;
  PauliPolynomial power = PauliPolynomial::identity(h.n_qubits());
  double scale = 1.0;  // multiplier^j / j!
  for (int j = 1; j <= max_order; ++j) {
    power = poly_mul(power, h);
    scale *= multiplier / j;
    out[j] = power * cplx{scale, 0.0};
  }
  return out;
}

// JSON: [{"pauli": "XIZ", "re": 1.0, "im": 0.0}, ...]

inline void to_json(nlohmann::json& j, const PauliPolynomial& p) {
  j = nlohmann::json::array();
  for (const auto& [s, c] : p) {
    j.push_back({{"pauli", s.to_string()}, {"re", c.real()}, {"im", c.imag()}});
  }
}

inline PauliPolynomial polynomial_from_json(const nlohmann::json& j,
                                            std::size_t n_qubits) {
  if (!j.is_array()) throw ValidationError("Pauli polynomial must be a JSON array");
  PauliPolynomial p(n_qubits);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = "term[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("pauli") || !e["pauli"].is_string()) {
      throw ValidationError(where + ": missing string field 'pauli'");
    }
    const double re = e.value("re", 0.0);
    const double im = e.value("im", 0.0);
    p.add_term(PauliString::from_string(e["pauli"].get<std::string>()), {re, im});
  }
  p.prune();
  return p;
}

}  // namespace mrpf
