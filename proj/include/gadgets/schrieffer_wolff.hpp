#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "gadgets/gadgets.hpp"
#include "gadgets/pauli.hpp"
#include "gadgets/spectral.hpp"

namespace gadgets {

/// Anti-Hermitian generator S carried as the Hermitian sum iS.
struct SWGenerator {
  PauliSum is;
  std::optional<int> order;  ///< truncation order; empty for the exact generator
  ProjectorSplit split;
  /// iS as a matrix, kept by sw_exact so no precision is lost to the
  /// Pauli expansion.
  std::optional<Eigen::MatrixXcd> dense;

  bool exact() const { return !order.has_value(); }
  Eigen::MatrixXcd matrix(const SpectralLimits& limits = {}) const;
};

struct BlockParts {
  PauliSum diag;     ///< PXP + QXQ
  PauliSum offdiag;  ///< PXQ + QXP
};

/// Symbolic split of x against the mediator projector of `split`.
BlockParts block_parts(const PauliSum& x, const ProjectorSplit& split);

/// True when PXP and QXQ vanish to `tol` (max coefficient).
bool is_block_offdiagonal(const PauliSum& x, const ProjectorSplit& split,
                          double tol = 1e-12);

/// Solves [h0, S] = x for S, returned as iS. h0 must be a combination of
/// single-qubit Z terms plus identity. Throws std::invalid_argument for any
/// other h0 or for a term of x that flips no h0 qubit (block-diagonal
/// content), std::domain_error for degenerate energy denominators.
PauliSum l0_inverse(const PauliSum& h0, const PauliSum& x);

/// Dense version for any diagonal h0: S_ij = x_ij / (E_i - E_j). Returns S
/// itself. Throws std::invalid_argument if x has an entry where
/// E_i = E_j (to 1e-12 relative).
Eigen::MatrixXcd l0_inverse(const Eigen::VectorXd& energies, const Eigen::MatrixXcd& x);

/// S1 [+ S2 [+ S3]] with S1 = L0^-1(V_od), S2 = L0^-1 L1(V_d),
/// S3 = L0^-1(L2(V_d) - L1^3(H0)/3). Every piece is checked
/// block-off-diagonal; std::logic_error if one is not.
SWGenerator sw_perturbative(const PauliSum& h0, const PauliSum& v,
                            const ProjectorSplit& split, int order);

/// Closed-form generator of a gadget: first order for subdivision, third
/// order for three-to-two.
SWGenerator sw_gadget_closed_form(const GadgetInstance& g);
/// Perturbative generator of a gadget at its closed-form order.
SWGenerator sw_gadget_perturbative(const GadgetInstance& g);

/// Split of a single gadget: the register spans the gadget and the mediator.
ProjectorSplit gadget_split(const GadgetInstance& g, Qubit n_qubits = 0);

/// Sum of generators with the union of their mediators. Throws
/// std::invalid_argument on mixed orders or an empty list.
SWGenerator combine(const std::vector<SWGenerator>& generators, int n_qubits);

/// Direct-rotation generator: S = log U, U the polar factor of
/// P P~ + Q Q~ with P~ the projector onto the rank(P) lowest eigenstates of
/// h. Throws std::domain_error if the gap at the cut closes or
/// ||P - P~|| >= 1, std::runtime_error if S fails the 1e-10 checks.
SWGenerator sw_exact(const PauliSum& h, const ProjectorSplit& split,
                     const SpectralLimits& limits = {});

struct EffectiveHamiltonian {
  DenseOperator h_eff;  ///< P e^S H e^-S P on the non-mediator qubits
  double truncation_error_bound = 0.0;  ///< ||P L^3(H) P||/6 + ||L^4(H)||/24
  double offdiag_residual = 0.0;        ///< ||P e^S H e^-S Q||
  /// ||P (e^S H e^-S - H - L(H) - L^2(H)/2) P||, bounded by the above.
  double second_order_deviation = 0.0;
  double q_block_min = 0.0;  ///< lowest eigenvalue of the QQ block
};

EffectiveHamiltonian effective_hamiltonian(const PauliSum& h, const SWGenerator& s,
                                           const SpectralLimits& limits = {});

/// The target operator restricted to the P subspace, as a matrix on the
/// non-mediator qubits (same ordering as h_eff).
Eigen::MatrixXcd restrict_to_p(const PauliSum& op, const ProjectorSplit& split,
                               const SpectralLimits& limits = {});

}  // namespace gadgets
