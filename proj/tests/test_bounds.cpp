#include <cmath>
#include <random>

#include "doctest.h"
#include "gadgets/bounds.hpp"
#include "oracle.hpp"

using namespace gadgets;

namespace {

// Surviving cross-term constant for the non-Pauli instance below, measured at
// eps = 0.2 (0.5 exactly, stable down to eps = 0.05).
constexpr double kCrossConstant = 0.5;

PauliString ps(std::initializer_list<PauliString::Letter> letters) {
  return PauliString(std::vector<PauliString::Letter>(letters));
}

PauliSum term(double c, std::initializer_list<PauliString::Letter> letters) {
  return PauliSum(c, ps(letters));
}

PauliSum z(Qubit q) { return term(1, {{q, Pauli::Z}}); }
PauliSum x(Qubit q) { return term(1, {{q, Pauli::X}}); }

FactorizedInteraction interaction(double J, std::vector<PauliSum> factors) {
  FactorizedInteraction f;
  f.strength = J;
  f.factors = std::move(factors);
  return f;
}

SimulatorHamiltonian by_hand(std::vector<GadgetInstance> gadgets, Qubit n_system) {
  SimulatorHamiltonian sim;
  sim.n_system = n_system;
  sim.total_qubits = n_system + static_cast<Qubit>(gadgets.size());
  for (const auto& g : gadgets) sim.assembled += g.hamiltonian();
  sim.gadgets = std::move(gadgets);
  return sim;
}

std::vector<SWGenerator> closed_forms(const SimulatorHamiltonian& sim) {
  std::vector<SWGenerator> out;
  for (const auto& g : sim.gadgets) out.push_back(sw_gadget_closed_form(g));
  return out;
}

/// Dense r_k from the oracle: ||e^S H e^-S - sum_{p<k} ad_S^p(H)/p!||.
double dense_r_k(const oracle::Mat& s, const oracle::Mat& h, int k) {
  const oracle::Mat u = oracle::expm_herm(oracle::cd(0, 1) * s, oracle::cd(0, -1));
  oracle::Mat partial = oracle::Mat::Zero(h.rows(), h.cols());
  oracle::Mat ad = h;
  double fact = 1;
  for (int p = 0; p < k; ++p) {
    if (p > 0) fact *= p;
    partial += ad / fact;
    ad = s * ad - ad * s;
  }
  return oracle::norm(u * h * u.adjoint() - partial);
}

}  // namespace

TEST_CASE("nested_commutator examples") {
  std::mt19937_64 rng(51);
  const PauliSum h = oracle::random_sum(3, 5, rng);
  const PauliSum s = oracle::random_sum(3, 4, rng);
  CHECK(nested_commutator(s, h, 0) == h);
  CHECK(nested_commutator(z(0), z(0) + term(2, {{0, Pauli::Z}, {1, Pauli::X}}), 3).empty());

  // Subdivision generator and Hamiltonian, second order, against dense [S, [S, H]].
  const auto g = subdivision_gadget_with_gap(interaction(1.0, {z(1), z(2)}), 100, 0);
  const PauliSum is = sw_gadget_closed_form(g).is;
  const oracle::Mat sm = oracle::cd(0, -1) * oracle::of(is, 3);
  const oracle::Mat hm = oracle::of(g.hamiltonian(), 3);
  const oracle::Mat l1 = sm * hm - hm * sm;
  const oracle::Mat l2 = sm * l1 - l1 * sm;
  CHECK((oracle::of(nested_commutator(is, g.hamiltonian(), 2), 3) - l2).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(nested_commutator(s, h, -1), std::invalid_argument);
  CHECK_THROWS_AS(nested_commutator(s, h, kMaxNestedOrder + 1), std::length_error);
}

TEST_CASE("counting bound dominates the dense norm") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const PauliSum s = oracle::random_sum(n, 3, rng);
    const PauliSum h = oracle::random_sum(n, 4, rng);
    for (int k = 1; k <= 3; ++k) {
      const double dense = oracle::norm(oracle::of(nested_commutator(s, h, k), n));
      REQUIRE(counting_bound(s, h, k).norm_sum >= dense - 1e-12);
    }
  }
}

TEST_CASE("remainder_r_k examples") {
  std::mt19937_64 rng(53);
  const PauliSum h = random_pauli_sum(3, 6, 1.0, rng);
  SWGenerator zero;
  zero.order = 1;
  zero.split = ProjectorSplit{3, {0}};
  const RemainderReport r0 = remainder_r_k(zero, h, 1);
  CHECK(r0.r_k <= 1e-12);
  CHECK(r0.satisfied);

  for (int trial = 0; trial < 10; ++trial) {
    SWGenerator s;
    s.order = 1;
    s.split = ProjectorSplit{3, {0}};
    s.is = random_pauli_sum(3, 5, 0.3, rng);
    const PauliSum hh = random_pauli_sum(3, 6, 1.0, rng);
    const oracle::Mat sm = oracle::cd(0, -1) * oracle::of(s.is, 3);
    for (int k = 1; k <= 4; ++k) {
      const RemainderReport r = remainder_r_k(s, hh, k);
      REQUIRE(r.satisfied);
      REQUIRE(r.r_k == doctest::Approx(dense_r_k(sm, oracle::of(hh, 3), k)).epsilon(1e-9).scale(1e-12));
      REQUIRE(r.slack == doctest::Approx(r.bound - r.r_k));
      // The scaled generator's bound carries t^k.
      const RemainderReport half = remainder_r_k(s, hh, k, 0.5);
      REQUIRE(half.bound == doctest::Approx(std::pow(0.5, k) * r.bound).epsilon(1e-9));
      REQUIRE(half.satisfied);
    }
  }

  const auto g = subdivision_gadget_with_gap(interaction(1.0, {z(1), z(2)}), 100, 0);
  const RemainderReport r3 = remainder_r_k(sw_gadget_closed_form(g), g.hamiltonian(), 3);
  CHECK(r3.satisfied);
  CHECK(r3.r_k <= r3.bound);
}

TEST_CASE("unit_uniform and random_pauli_sum") {
  std::mt19937_64 a(7), b(7);
  const std::uint64_t raw = b();
  CHECK(unit_uniform(a) == static_cast<double>(raw >> 11) * 0x1.0p-53);
  for (int i = 0; i < 1000; ++i) {
    const double u = unit_uniform(a);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  std::mt19937_64 rng(54);
  const PauliSum h = random_pauli_sum(4, 7, 0.3, rng);
  CHECK(oracle::norm(oracle::of(h, 4)) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(h.extent() <= 4);
}

TEST_CASE("remainder-bound suite is violation-free and reproducible") {
  const Lemma1Suite suite = lemma1_suite(100, 2024);
  CHECK(suite.reports.size() == 100 * 12);
  CHECK(suite.violations == 0);
  for (const auto& r : suite.reports) REQUIRE(r.satisfied == (r.r_k <= r.bound + 1e-9));
  const Lemma1Suite again = lemma1_suite(100, 2024);
  REQUIRE(again.reports.size() == suite.reports.size());
  for (std::size_t i = 0; i < suite.reports.size(); ++i) {
    REQUIRE(again.reports[i].r_k == suite.reports[i].r_k);
    REQUIRE(again.reports[i].bound == suite.reports[i].bound);
  }
}

TEST_CASE("commutator growth on the periodic chain is linear in n") {
  for (int k = 1; k <= 3; ++k) {
    const ScalingReport rep = lemma2_scaling([](int n) { return chain_instance(n); }, {4, 6, 8, 10}, k);
    CHECK(rep.k == k);
    REQUIRE(rep.samples.size() == 4);
    CHECK(rep.bounded);
    for (std::size_t i = 0; i + 1 < rep.samples.size(); ++i) {
      CHECK(rep.samples[i].n < rep.samples[i + 1].n);
      CHECK(rep.samples[i + 1].ratio <= 1.2 * rep.samples[i].ratio);
    }
    for (const auto& s : rep.samples) {
      CHECK(s.dense_norm >= 0);
      CHECK(s.counting_norm >= s.dense_norm - 1e-12);
    }
    if (k == 2) {
      // Elementary commutators per site stay constant.
      const double per_site = static_cast<double>(rep.samples[0].elementary) / rep.samples[0].n;
      for (const auto& s : rep.samples) CHECK(static_cast<double>(s.elementary) / s.n == per_site);
    }
  }

  const auto disjoint = [](int n) {
    ScalingInstance inst;
    inst.n = n;
    for (int i = 0; i < n / 2; ++i) inst.is += 0.1 * x(static_cast<Qubit>(i));
    for (int i = n / 2; i + 1 < n; ++i) inst.h += term(1, {{static_cast<Qubit>(i), Pauli::Z}, {static_cast<Qubit>(i + 1), Pauli::Z}});
    return inst;
  };
  const ScalingReport zero = lemma2_scaling(disjoint, {4, 6, 8}, 1);
  for (const auto& s : zero.samples) {
    CHECK(s.ratio == 0.0);
    CHECK(s.counting_norm == 0.0);
  }
  CHECK_THROWS_AS(lemma2_scaling(disjoint, {4, 6}, 1), std::invalid_argument);
}

TEST_CASE("p_restrict") {
  CHECK(p_restrict(term(2, {{0, Pauli::Z}, {1, Pauli::X}}), {0}) == term(2, {{1, Pauli::X}}));
  CHECK(p_restrict(term(2, {{0, Pauli::X}, {1, Pauli::X}}), {0}).empty());
  CHECK(p_restrict(term(2, {{0, Pauli::Y}}), {0}).empty());
  CHECK(p_restrict(term(3, {{0, Pauli::Z}, {1, Pauli::Z}}), {0, 1}) == PauliSum(3.0));
  // Dense check: P X P restricted to range(P).
  std::mt19937_64 rng(55);
  const PauliSum h = oracle::random_sum(3, 10, rng);
  const ProjectorSplit split{3, {2}};
  const PauliSum r = p_restrict(h, {2});
  CHECK((oracle::of(r, 2) - restrict_to_p(h, split)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("cross-gadget terms") {
  // Disjoint system supports: nothing survives.
  const auto a = subdivision_gadget(interaction(1.0, {z(0), z(1)}), 0.1, 4);
  const auto b = subdivision_gadget(interaction(1.0, {z(2), z(3)}), 0.1, 5);
  const SimulatorHamiltonian disjoint = by_hand({a, b}, 4);
  const CrossGadgetReport rd = cross_gadget_report(disjoint, closed_forms(disjoint));
  CHECK(rd.total == 0.0);
  CHECK(rd.forced_zero_violations == 0);
  for (const auto& p : rd.pairs) CHECK(p.norm == 0.0);

  // Shared system qubit 1, Pauli factors.
  const double eps = 0.1;
  const auto c = subdivision_gadget(interaction(1.0, {z(0), z(1)}), eps, 3);
  const auto d = subdivision_gadget(interaction(1.0, {x(1), z(2)}), eps, 4);
  const SimulatorHamiltonian shared = by_hand({c, d}, 3);
  const CrossGadgetReport rs = cross_gadget_report(shared, closed_forms(shared));
  CHECK(rs.forced_zero_checked > 0);
  CHECK(rs.forced_zero_violations == 0);
  CHECK(rs.total <= kCrossConstant * eps * eps);
  CHECK(rs.budget == doctest::Approx(2 * eps * eps));

  // Every gadget generator flips its mediator: P S P = Q S Q = 0.
  for (const auto& s : closed_forms(shared)) {
    const BlockDecomposition blocks = block_extract(s.matrix(), s.split);
    CHECK(blocks.norm_pp == 0.0);
    CHECK(blocks.norm_qq == 0.0);
  }

  CHECK_THROWS_AS(cross_gadget_report(shared, {sw_gadget_closed_form(c)}), std::invalid_argument);
}

TEST_CASE("surviving cross terms of a non-Pauli factor scale as eps^2") {
  const PauliSum a = 0.5 * (x(0) + term(1, {{0, Pauli::X}, {1, Pauli::X}}));
  for (double eps : {0.2, 0.1, 0.05}) {
    const auto u = subdivision_gadget(interaction(1.0, {a, z(2)}), eps, 4);
    const auto v = subdivision_gadget(interaction(1.0, {z(1), z(3)}), eps, 5);
    const SimulatorHamiltonian sim = by_hand({u, v}, 4);
    const CrossGadgetReport r = cross_gadget_report(sim, closed_forms(sim));
    CHECK(r.forced_zero_violations == 0);
    CHECK(r.total > 0.0);
    CHECK(r.total <= kCrossConstant * eps * eps * (1 + 1e-9));
    double pair_sum = 0;
    for (const auto& p : r.pairs) pair_sum += p.norm;
    CHECK(r.total <= pair_sum + 1e-15);
  }
}

TEST_CASE("operator inequality examples") {
  std::mt19937_64 rng(56);
  const PauliSum h = oracle::random_sum(3, 6, rng);
  CHECK(operator_inequality_check(h, h, 0.0, 3));

  const double eps = 0.1;
  const auto g = subdivision_gadget(interaction(1.0, {z(1), z(2)}), eps, 0);
  CHECK(operator_inequality_check(g.hamiltonian(), g.target(), eps * 1.0, 3));
  // Measured margin: the lower bound holds with no slack at all here.
  CHECK(min_eigenvalue_difference(g.hamiltonian(), g.target(), 3) >= -1e-12);

  const double gap = 10;
  const PauliSum excited = PauliSum(gap / 2) + term(-gap / 2, {{0, Pauli::Z}});
  CHECK_FALSE(operator_inequality_check(excited, PauliSum(2 * gap), 0.0, 1));
  CHECK(min_eigenvalue_difference(excited, PauliSum(2 * gap), 1) == doctest::Approx(-2 * gap));
}
