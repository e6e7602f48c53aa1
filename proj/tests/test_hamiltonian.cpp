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

#include <cstdio>
#include <fstream>

#include "mrpf/hamiltonian.hpp"

using namespace mrpf;

namespace {

std::string error_of(const std::string& text) {
  try {
    load_text(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Hamiltonian, LoadsAndReportsStats) {
  auto h = load_text(R"({"n_qubits": 2, "terms": [
      {"pauli": "XX", "coeff": 0.5},
      {"pauli": "ZI", "coeff": -1.5},
      {"pauli": "XX", "coeff": {"re": 0.25, "im": 0.0}},
      {"pauli": "IY", "coeff": [2.0, 0.0]}]})");
  EXPECT_EQ(h.size(), 4u);
  EXPECT_EQ(h.n_qubits(), 2u);
  auto st = stats(h);
  EXPECT_EQ(st.L, 4u);
  EXPECT_DOUBLE_EQ(st.Lambda, 2.0);
  // Repeated strings stay separate summands but merge in the total.
  EXPECT_EQ(h[0].pauli, h[2].pauli);
  EXPECT_EQ(h.total().size(), 3u);
  EXPECT_DOUBLE_EQ(h.total().coefficient(PauliString::from_string("XX")).real(), 0.75);
}

TEST(Hamiltonian, RejectsBadDocuments) {
  EXPECT_NE(error_of(R"({"n_qubits": 1, "terms": [{"pauli": "X", "coeff": {"re": 1, "im": 0.5}}]})")
                .find("terms[0].coeff"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"n_qubits": 2, "terms": [{"pauli": "XX", "coeff": 1},
                                                  {"pauli": "X", "coeff": 1}]})")
                .find("terms[1].pauli"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"n_qubits": 1, "terms": [{"pauli": "Q", "coeff": 1}]})").find("terms[0]"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"n_qubits": 1, "terms": []})"), "");
  EXPECT_NE(error_of(R"({"terms": []})").find("n_qubits"), std::string::npos);
  EXPECT_NE(error_of(R"({"n_qubits": 1, "terms": [{"pauli": "X", "coeff": 0}]})")
                .find("terms[0].coeff"),
            std::string::npos);
  const auto syntax = error_of("{\"n_qubits\": 1,\n \"terms\": [}");
  EXPECT_NE(syntax.find("line 2"), std::string::npos) << syntax;
}

TEST(Hamiltonian, JsonRoundTripAndFileLoading) {
  auto h = random_pauli(3, 5, 99);
  auto text = hamiltonian_to_json(h).dump();
  EXPECT_EQ(load(text), h);

  const std::string path = ::testing::TempDir() + "mrpf_ham.json";
  {
    std::ofstream out(path);
    out << text;
  }
  EXPECT_EQ(load(path), h);
  std::remove(path.c_str());
  EXPECT_THROW(load("/nonexistent/path.json"), ValidationError);
}

TEST(Hamiltonian, HeisenbergChain) {
  auto h = heisenberg_chain(3);
  EXPECT_EQ(h.size(), 6u);
  EXPECT_EQ(h[0].pauli.to_string(), "XXI");
  EXPECT_EQ(h[5].pauli.to_string(), "IZZ");
  EXPECT_TRUE(heisenberg_chain(2).fully_commuting());
  EXPECT_FALSE(heisenberg_chain(3).fully_commuting());

  auto f = heisenberg_chain(2, 0.5);
  EXPECT_EQ(f.size(), 7u);
  EXPECT_FALSE(f.fully_commuting());
  EXPECT_EQ(f[3].pauli.to_string(), "XI");
  EXPECT_EQ(f[6].pauli.to_string(), "IZ");
  EXPECT_DOUBLE_EQ(stats(f).Lambda, 1.0);
  EXPECT_THROW(heisenberg_chain(1), ValidationError);
}

TEST(Hamiltonian, RandomPauliIsSeededAndValid) {
  auto a = random_pauli(3, 8, 1234);
  auto b = random_pauli(3, 8, 1234);
  auto c = random_pauli(3, 8, 1235);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (const auto& t : a.terms()) {
    EXPECT_FALSE(t.pauli.is_identity());
    EXPECT_LE(std::abs(t.coeff), 1.0);
    EXPECT_NE(t.coeff, 0.0);
  }
  EXPECT_EQ(generate(Model::random_pauli, 3, 8, 1234), a);
  EXPECT_EQ(generate(Model::heisenberg_chain, 4, 4, 0), heisenberg_chain(4));
  EXPECT_THROW(generate(Model::heisenberg_chain, 4, 3, 0), ValidationError);
}

TEST(Hamiltonian, ConstructorValidates) {
  EXPECT_THROW(Hamiltonian(0, {}), ValidationError);
  EXPECT_THROW(Hamiltonian(1, {}), ValidationError);
  EXPECT_THROW(Hamiltonian(1, {{PauliString::from_string("X"), std::nan("")}}), ValidationError);
  EXPECT_THROW(Hamiltonian(1, {{PauliString::from_string("XX"), 1.0}}), ValidationError);
}
