#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gadgets/gadgets.hpp"
#include "gadgets/pauli.hpp"
#include "gadgets/schrieffer_wolff.hpp"
#include "gadgets/spectral.hpp"

namespace gadgets {

constexpr int kMaxNestedOrder = 6;

/// L^k(h) with L(X) = [S, X], S given as iS. Throws std::invalid_argument
/// for k < 0 and std::length_error above kMaxNestedOrder.
PauliSum nested_commutator(const PauliSum& is, const PauliSum& h, int k);

struct CountingBound {
  double norm_sum = 0.0;  ///< sum of elementary-commutator norms
  std::size_t elementary = 0;  ///< nonzero elementary commutators
};

/// Upper bound on ||L^k(h)|| from the elementary commutators
/// [s_1, [s_2, ..., [s_k, h_j]]] of single terms, each a scaled Pauli string.
CountingBound counting_bound(const PauliSum& is, const PauliSum& h, int k);

struct RemainderReport {
  int k = 0;
  double t = 1.0;  ///< generator scale
  double r_k = 0.0;
  double bound = 0.0;  ///< ||L^k(H)|| / k! for the scaled generator
  bool satisfied = false;
  double slack = 0.0;
};

/// r_k = ||e^{tS} H e^{-tS} - sum_{p<k} L^p(H)/p!|| against ||L^k(H)||/k!,
/// both for the generator tS.
RemainderReport remainder_r_k(const SWGenerator& s, const PauliSum& h, int k,
                              double t = 1.0, const SpectralLimits& limits = {});

/// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit_uniform(std::mt19937_64& rng);

/// Random Hermitian Pauli sum on n qubits with `terms` strings, rescaled to
/// operator norm `norm`.
PauliSum random_pauli_sum(int n_qubits, int terms, double norm, std::mt19937_64& rng);

struct Lemma1Suite {
  std::vector<RemainderReport> reports;
  std::size_t violations = 0;
};

/// `trials` random (S, H) pairs on 2 to 4 qubits, k = 1..4, scales
/// t in {0.25, 0.5, 1}.
Lemma1Suite lemma1_suite(int trials, std::uint64_t seed);

struct ScalingInstance {
  int n = 0;
  PauliSum is;  ///< generator as iS
  PauliSum h;
};

struct ScalingSample {
  int n = 0;
  double dense_norm = -1.0;  ///< negative when above the dense cap
  double counting_norm = 0.0;
  std::size_t elementary = 0;
  double ratio = 0.0;  ///< ||L^k(H)|| / (n J_S^k J_H)
};

struct ScalingReport {
  int k = 0;
  std::vector<ScalingSample> samples;  ///< sorted by n
  std::string model = "linear-in-n";
  double fitted_slope = 0.0;  ///< least-squares d||L^k(H)||/dn
  double fit_residual = 0.0;  ///< rms residual of that fit
  bool bounded = false;       ///< each ratio <= 1.2 * the previous one
};

/// Throws std::invalid_argument for fewer than three sizes.
ScalingReport lemma2_scaling(const std::function<ScalingInstance(int)>& family,
                             std::vector<int> sizes, int k,
                             const SpectralLimits& limits = {});

/// Periodic chain h = J_H sum Z_i Z_{i+1}, generator iS = J_S sum X_i.
ScalingInstance chain_instance(int n, double j_h = 1.0, double j_s = 0.1);

struct CrossPair {
  Qubit u = 0;  ///< gadget whose V_extra is acted on
  Qubit v = 0;  ///< gadget whose generator acts
  double norm = 0.0;  ///< ||P [S^v, [S^v, V_extra^u]] P||
  /// max coefficient gap between the V^u and V_extra^u versions
  double extra_identity_gap = 0.0;
};

struct CrossGadgetReport {
  std::vector<CrossPair> pairs;
  double total = 0.0;   ///< norm of the summed surviving terms
  double budget = 0.0;  ///< sum over pairs of eps_v^2 J (subdivision) or eps_v J
  /// Nonzero P-block strings found where properties (1)/(2) force zero;
  /// exactly zero when the properties hold.
  std::size_t forced_zero_violations = 0;
  std::size_t forced_zero_checked = 0;
};

/// P X P on range(P), written on the remaining letters: strings flipping a
/// mediator drop out, Z on a mediator acts as the identity there.
PauliSum p_restrict(const PauliSum& x, const std::vector<Qubit>& mediators);

/// Throws std::invalid_argument unless there is one generator per gadget.
CrossGadgetReport cross_gadget_report(const SimulatorHamiltonian& sim,
                                      const std::vector<SWGenerator>& generators);

/// Lowest eigenvalue of lhs - rhs on n qubits.
double min_eigenvalue_difference(const PauliSum& lhs, const PauliSum& rhs,
                                 int n_qubits, const SpectralLimits& limits = {});
/// True iff lhs - rhs >= -slack.
bool operator_inequality_check(const PauliSum& lhs, const PauliSum& rhs,
                               double slack, int n_qubits,
                               const SpectralLimits& limits = {});

}  // namespace gadgets
