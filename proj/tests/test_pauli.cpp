#include <cmath>
#include <random>

#include "doctest.h"
#include "gadgets/pauli.hpp"
#include "oracle.hpp"

using namespace gadgets;

namespace {

PauliString ps(std::initializer_list<PauliString::Letter> letters) {
  return PauliString(std::vector<PauliString::Letter>(letters));
}

PauliSum term(double c, std::initializer_list<PauliString::Letter> letters) {
  return PauliSum(c, ps(letters));
}

}  // namespace

TEST_CASE("multiply follows single-qubit Pauli rules") {
  auto xy = multiply(ps({{0, Pauli::X}}), ps({{0, Pauli::Y}}));
  CHECK(xy.phase.quarter_turns == 1);
  CHECK(xy.product == ps({{0, Pauli::Z}}));

  auto xx = multiply(ps({{0, Pauli::X}}), ps({{0, Pauli::X}}));
  CHECK(xx.phase.quarter_turns == 0);
  CHECK(xx.product.is_identity());

  auto disjoint = multiply(ps({{0, Pauli::X}}), ps({{1, Pauli::Z}}));
  CHECK(disjoint.phase.quarter_turns == 0);
  CHECK(disjoint.product == ps({{0, Pauli::X}, {1, Pauli::Z}}));
}

TEST_CASE("multiply matches dense products on random pairs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliString a = oracle::random_string(n, rng, true);
    const PauliString b = oracle::random_string(n, rng, true);
    const auto prod = multiply(a, b);
    const oracle::Mat lhs = oracle::of(PauliSum(1.0, a), n) * oracle::of(PauliSum(1.0, b), n);
    const oracle::Mat rhs = prod.phase.value() * oracle::of(PauliSum(1.0, prod.product), n);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("PauliString rejects repeated qubits") {
  CHECK_THROWS_AS(ps({{0, Pauli::Z}, {0, Pauli::X}}), std::invalid_argument);
}

TEST_CASE("commutator examples") {
  CHECK(commutator(term(1, {{0, Pauli::Z}}), term(1, {{0, Pauli::Z}, {1, Pauli::Z}})).empty());
  const PauliSum xz = commutator(term(1, {{0, Pauli::X}}), term(1, {{0, Pauli::Z}}));
  CHECK(xz == term(-2, {{0, Pauli::Y}}));
}

TEST_CASE("commutator of the first-order generator with H0 gives -V_od") {
  // Mediator on qubit 0, A = Z1, B = Z2, J = 1, gap 100.
  const double J = 1.0, gap = 100.0;
  const oracle::Mat s = oracle::cd(0, -std::sqrt(J / (2 * gap))) *
                        oracle::string({{0, 'Y'}}, 3) *
                        (oracle::string({{2, 'Z'}}, 3) - oracle::string({{1, 'Z'}}, 3));
  const oracle::Mat h0 = gap * oracle::excited(0, 3);
  const oracle::Mat v_od = std::sqrt(gap * J / 2) * oracle::string({{0, 'X'}}, 3) *
                           (oracle::string({{2, 'Z'}}, 3) - oracle::string({{1, 'Z'}}, 3));

  const PauliSum is = std::sqrt(J / (2 * gap)) *
                      (term(1, {{0, Pauli::Y}, {2, Pauli::Z}}) - term(1, {{0, Pauli::Y}, {1, Pauli::Z}}));
  const PauliSum h0_sum = PauliSum(gap / 2) + term(-gap / 2, {{0, Pauli::Z}});
  const PauliSum c = commutator(is, h0_sum);
  CHECK((oracle::of(c, 3) - (s * h0 - h0 * s)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((oracle::of(c, 3) + v_od).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("commutator and anticommutator match dense evaluation") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliSum a = oracle::random_sum(n, 3, rng);
    const PauliSum b = oracle::random_sum(n, 3, rng);
    const oracle::Mat ma = oracle::of(a, n), mb = oracle::of(b, n);
    const oracle::Mat comm = oracle::cd(0, -1) * (ma * mb - mb * ma);
    REQUIRE((oracle::of(commutator(a, b), n) - comm).cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE((oracle::of(anticommutator(a, b), n) - (ma * mb + mb * ma)).cwiseAbs().maxCoeff() <=
            1e-12);
    REQUIRE((oracle::of(sandwich(a, b), n) - ma * mb * ma).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("commutator antisymmetry and Jacobi identity") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const PauliSum a = oracle::random_sum(n, 3, rng);
    const PauliSum b = oracle::random_sum(n, 3, rng);
    const PauliSum c = oracle::random_sum(n, 3, rng);
    REQUIRE(max_abs_difference(commutator(a, b), -commutator(b, a)) <= 1e-14);
    const PauliSum jacobi = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                            commutator(c, commutator(a, b));
    REQUIRE(max_abs_difference(jacobi, PauliSum()) <= 1e-12);
  }
}

TEST_CASE("product rejects non-Hermitian results") {
  CHECK_THROWS_AS(product(term(1, {{0, Pauli::X}}), term(1, {{0, Pauli::Z}})), std::domain_error);
  CHECK(product(term(2, {{0, Pauli::X}}), term(3, {{0, Pauli::X}})) == PauliSum(6.0));
}

TEST_CASE("normalization merges, drops zeros and is idempotent") {
  PauliSum h({{0.5, ps({{0, Pauli::Z}, {1, Pauli::Z}})},
              {0.5, ps({{0, Pauli::Z}, {1, Pauli::Z}})},
              {1.0, ps({{2, Pauli::X}})},
              {-1.0, ps({{2, Pauli::X}})},
              {2.0, ps({})}});
  CHECK(h.size() == 1);
  CHECK(h.coefficient(ps({{0, Pauli::Z}, {1, Pauli::Z}})) == 1.0);
  CHECK(h.identity() == 2.0);
  const PauliSum again(std::vector<PauliTerm>(h.terms().begin(), h.terms().end()), h.identity());
  CHECK(again == h);
}

TEST_CASE("embed relabels supports") {
  CHECK(embed(term(1, {{0, Pauli::Z}}), {{0, 5}}) == term(1, {{5, Pauli::Z}}));
  CHECK(embed(term(1, {{0, Pauli::X}, {1, Pauli::Z}}), {{0, 2}, {1, 0}}) ==
        term(1, {{2, Pauli::X}, {0, Pauli::Z}}));
  CHECK(embed(PauliSum(1.0), {{0, 3}}) == PauliSum(1.0));
  CHECK_THROWS_AS(embed(term(1, {{0, Pauli::X}, {1, Pauli::Z}}), {{0, 2}, {1, 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(embed(term(1, {{0, Pauli::X}, {1, Pauli::Z}}), {{0, 2}}),
                  std::invalid_argument);
}

TEST_CASE("locality profile") {
  CHECK(locality_profile(term(1, {{0, Pauli::Z}, {1, Pauli::Z}, {2, Pauli::Z}, {3, Pauli::Z}})) ==
        LocalityProfile{4, 1, 1.0});
  CHECK(locality_profile(PauliSum()) == LocalityProfile{0, 0, 0.0});

  PauliSum heis;
  for (Qubit i = 0; i + 1 < 4; ++i) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) heis += term(1, {{i, p}, {i + 1, p}});
  }
  // Interior qubits touch three bonds times three letters.
  std::map<Qubit, std::size_t> touches;
  for (const auto& t : heis.terms()) {
    for (Qubit q : t.string.support()) ++touches[q];
  }
  std::size_t m = 0;
  for (const auto& [q, c] : touches) m = std::max(m, c);
  const LocalityProfile prof = locality_profile(heis);
  CHECK(prof.k == 2);
  CHECK(prof.m == m);
  CHECK(prof.m == 6);
  CHECK(prof.J == 1.0);
  // The offset is excluded.
  CHECK(locality_profile(heis + PauliSum(7.0)) == prof);
}

TEST_CASE("operator_norm_local") {
  CHECK(operator_norm_local(term(1, {{0, Pauli::Z}, {1, Pauli::Z}})) == doctest::Approx(1.0));
  CHECK(operator_norm_local(term(1, {{0, Pauli::Z}}) + term(1, {{0, Pauli::X}})) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(operator_norm_local(term(1, {{1, Pauli::Z}}) - term(1, {{0, Pauli::Z}})) ==
        doctest::Approx(2.0));
  std::mt19937_64 rng(14);
  for (int i = 0; i < 50; ++i) {
    CHECK(operator_norm_local(PauliSum(1.0, oracle::random_string(5, rng))) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }
  PauliSum wide;
  for (Qubit q = 0; q < 13; ++q) wide += term(1, {{q, Pauli::Z}});
  CHECK_THROWS_AS(operator_norm_local(wide), std::length_error);
}

TEST_CASE("text format parsing") {
  CHECK(parse_pauli_sum("1.0 Z0 Z1") == term(1, {{0, Pauli::Z}, {1, Pauli::Z}}));
  CHECK(parse_pauli_sum("0.5 Z0 Z1\n0.5 Z0 Z1") == term(1, {{0, Pauli::Z}, {1, Pauli::Z}}));
  CHECK(parse_pauli_sum("# comment\n\n  2.5 I  # offset\n-1 X3\n") ==
        PauliSum(2.5) + term(-1, {{3, Pauli::X}}));

  try {
    parse_pauli_sum("1.0 Z0 X0");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  try {
    parse_pauli_sum("1.0 Z0\nabc Z1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_pauli_sum("1.0\n"), ParseError);
  CHECK_THROWS_AS(parse_pauli_sum("1.0 Q0\n"), ParseError);
  CHECK_THROWS_AS(parse_pauli_sum("1.0 Zx\n"), ParseError);
  CHECK_THROWS_AS(parse_pauli_sum("nan Z0\n"), ParseError);
}

TEST_CASE("serialize round trip is exact") {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const PauliSum h = oracle::random_sum(1 + static_cast<int>(rng() % 6), 5, rng);
    REQUIRE(parse_pauli_sum(serialize(h)) == h);
  }
  CHECK(serialize(PauliSum(0.25) + term(1, {{0, Pauli::Z}})) == "0.25 I\n1 Z0\n");
}
