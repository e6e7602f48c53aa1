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
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mrpf/errors.hpp"
#include "mrpf/pauli.hpp"

namespace mrpf {

/// One summand H_j = coeff * pauli. The coefficient is real and non-zero.
struct HamiltonianTerm {
  PauliString pauli;
  double coeff = 0.0;

  friend bool operator==(const HamiltonianTerm&, const HamiltonianTerm&) = default;
};

/**
 * H = sum_j H_j as an ordered list of Pauli terms.
 *
 * Term order fixes the product-formula ordering, and repeated strings stay
 * separate summands.
 */
class Hamiltonian {
 public:
  Hamiltonian(std::size_t n_qubits, std::vector<HamiltonianTerm> terms)
      : n_qubits_(n_qubits), terms_(std::move(terms)) {
    if (n_qubits_ == 0) throw ValidationError("n_qubits must be positive");
    if (terms_.empty()) throw ValidationError("Hamiltonian needs at least one term");
    for (std::size_t j = 0; j < terms_.size(); ++j) {
      const auto& t = terms_[j];
      if (t.pauli.n_qubits() != n_qubits_) {
        throw ValidationError("terms[" + std::to_string(j) + "].pauli: has " +
                              std::to_string(t.pauli.n_qubits()) +
                              " qubits, expected " + std::to_string(n_qubits_));
      }
      if (!std::isfinite(t.coeff) || t.coeff == 0.0) {
        throw ValidationError("terms[" + std::to_string(j) +
                              "].coeff: must be finite and non-zero");
      }
    }
  }

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const HamiltonianTerm& operator[](std::size_t j) const { return terms_.at(j); }

  /// H_j as a one-term polynomial.
  PauliPolynomial term_polynomial(std::size_t j) const {
    return PauliPolynomial::single(terms_.at(j).pauli, terms_[j].coeff);
  }

  /// sum_j H_j with repeated strings merged.
  PauliPolynomial total() const {
    PauliPolynomial p(n_qubits_);
    for (const auto& t : terms_) p.add_term(t.pauli, t.coeff);
    p.prune();
    return p;
  }

  /// True when every pair of terms commutes, so any product formula is exact.
  bool fully_commuting() const {
    for (std::size_t a = 0; a < terms_.size(); ++a) {
      for (std::size_t b = a + 1; b < terms_.size(); ++b) {
        if (!terms_[a].pauli.commutes_with(terms_[b].pauli)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const Hamiltonian&, const Hamiltonian&) = default;

 private:
  std::size_t n_qubits_;
  std::vector<HamiltonianTerm> terms_;
};

struct HamiltonianStats {
  std::size_t L = 0;
  double Lambda = 0.0;  // max_j ||H_j||
  std::size_t n_qubits = 0;
};

/// ||coeff * P|| = |coeff| for a Pauli string P.
inline HamiltonianStats stats(const Hamiltonian& h) {
  HamiltonianStats s{h.size(), 0.0, h.n_qubits()};
  for (const auto& t : h.terms()) s.Lambda = std::max(s.Lambda, std::abs(t.coeff));
  return s;
}

// --- serialization ---------------------------------------------------------

inline nlohmann::json hamiltonian_to_json(const Hamiltonian& h) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : h.terms()) {
    terms.push_back({{"pauli", t.pauli.to_string()}, {"coeff", t.coeff}});
  }
  return {{"n_qubits", h.n_qubits()}, {"terms", std::move(terms)}};
}

namespace detail {

inline double parse_real_coeff(const nlohmann::json& c, const std::string& where) {
  if (c.is_number()) return c.get<double>();
  double re = 0.0;
  double im = 0.0;
  if (c.is_object() && c.contains("re")) {
    if (!c["re"].is_number() || (c.contains("im") && !c["im"].is_number())) {
      throw ValidationError(where + ": 're'/'im' must be numbers");
    }
    re = c["re"].get<double>();
    im = c.value("im", 0.0);
  } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
    re = c[0].get<double>();
    im = c[1].get<double>();
  } else {
    throw ValidationError(where + ": expected a real number");
  }
  if (im != 0.0) {
    throw ValidationError(where + ": non-real coefficient (imaginary part " +
                          std::to_string(im) + ")");
  }
  return re;
}

}  // namespace detail

inline Hamiltonian hamiltonian_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("Hamiltonian document must be an object");
  if (!doc.contains("n_qubits") || !doc["n_qubits"].is_number_integer()) {
    throw ValidationError("n_qubits: missing or not an integer");
  }
  const auto n = doc["n_qubits"].get<std::int64_t>();
  if (n <= 0) throw ValidationError("n_qubits: must be positive");
  if (!doc.contains("terms") || !doc["terms"].is_array()) {
    throw ValidationError("terms: missing or not an array");
  }
  std::vector<HamiltonianTerm> terms;
  const auto& arr = doc["terms"];
  for (std::size_t j = 0; j < arr.size(); ++j) {
    const std::string where = "terms[" + std::to_string(j) + "]";
    const auto& e = arr[j];
    if (!e.is_object()) throw ValidationError(where + ": expected an object");
    if (!e.contains("pauli") || !e["pauli"].is_string()) {
      throw ValidationError(where + ".pauli: missing or not a string");
    }
    if (!e.contains("coeff")) throw ValidationError(where + ".coeff: missing");
    const auto letters = e["pauli"].get<std::string>();
    if (letters.size() != static_cast<std::size_t>(n)) {
      throw ValidationError(where + ".pauli: has " + std::to_string(letters.size()) +
                            " letters, expected " + std::to_string(n));
    }
    PauliString p;
    try {
      p = PauliString::from_string(letters);
    } catch (const ValidationError& err) {
      throw ValidationError(where + ".pauli: " + err.what());
    }
    terms.push_back({std::move(p), detail::parse_real_coeff(e["coeff"], where + ".coeff")});
  }
  return Hamiltonian(static_cast<std::size_t>(n), std::move(terms));
}

/// Parses a Hamiltonian document from text. Syntax errors report line and
/// column.
inline Hamiltonian load_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("parse error: ") + e.what());
  }
  return hamiltonian_from_json(doc);
}

inline Hamiltonian load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open Hamiltonian file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return load_text(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

/// Accepts either inline JSON (leading '{') or a file path.
inline Hamiltonian load(const std::string& path_or_text) {
  const auto first = path_or_text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_text[first] == '{') {
    return load_text(path_or_text);
  }
  return load_file(path_or_text);
}

// --- generators -------------------------------------------------------------

enum class Model { heisenberg_chain, random_pauli };

/**
 * Heisenberg chain: XX + YY + ZZ on each bond (i, i+1). A non-zero `field`
 * adds field * X_i and field * Z_i on every site.
 *
 * Without a field the two-qubit chain is fully commuting. A field along a
 * single axis still leaves the summand groups mutually commuting, so the
 * tilted X+Z field is the smallest variant with genuine Trotter error.
 */
inline Hamiltonian heisenberg_chain(std::size_t n_qubits, double field = 0.0) {
  if (n_qubits < 2) throw ValidationError("heisenberg_chain needs at least 2 qubits");
  std::vector<HamiltonianTerm> terms;
  for (std::size_t i = 0; i + 1 < n_qubits; ++i) {
    for (char c : {'X', 'Y', 'Z'}) {
      PauliString p(n_qubits);
      p.set(i, c);
      p.set(i + 1, c);
      terms.push_back({p, 1.0});
    }
  }
  if (field != 0.0) {
    for (char c : {'X', 'Z'}) {
      for (std::size_t i = 0; i < n_qubits; ++i) {
        PauliString p(n_qubits);
        p.set(i, c);
        terms.push_back({p, field});
      }
    }
  }
  return Hamiltonian(n_qubits, std::move(terms));
}

/**
 * L random non-identity Pauli strings with coefficients uniform in [-1, 1].
 *
 * Draws use raw 64-bit engine output so the result does not depend on the
 * standard library's distribution implementations.
 */
inline Hamiltonian random_pauli(std::size_t n_qubits, std::size_t L, std::uint64_t seed) {
  if (n_qubits == 0 || L == 0) throw ValidationError("random_pauli needs n_qubits, L > 0");
  std::mt19937_64 rng(seed);
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<HamiltonianTerm> terms;
  while (terms.size() < L) {
    PauliString p(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) p.set(q, "IXYZ"[rng() % 4]);
    if (p.is_identity()) continue;
    double c = 2.0 * unit() - 1.0;
    if (c == 0.0) continue;
    terms.push_back({std::move(p), c});
  }
  return Hamiltonian(n_qubits, std::move(terms));
}

/// `size` is the chain length for heisenberg_chain and L for random_pauli.
inline Hamiltonian generate(Model model, std::size_t n_qubits, std::size_t size,
                            std::uint64_t seed) {
  switch (model) {
    case Model::heisenberg_chain:
      if (size != 0 && size != n_qubits) {
        throw ValidationError("heisenberg_chain length must equal n_qubits");
      }
      return heisenberg_chain(n_qubits);
    case Model::random_pauli:
      return random_pauli(n_qubits, size, seed);
  }
  throw ValidationError("unknown model");
}

}  // namespace mrpf
