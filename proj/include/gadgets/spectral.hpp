#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gadgets/pauli.hpp"

namespace gadgets {

/// Size limits for the numerical backend. Qubit 0 is the least-significant
/// bit of the computational-basis index.
struct SpectralLimits {
  int matrix_qubits = 12;     ///< largest register materialized densely
  int dense_eig_qubits = 10;  ///< largest block diagonalized densely
  int iterative_qubits = 20;  ///< largest register handled at all
  int max_iterations = 2000;  ///< Lanczos matrix-vector products
  double residual_tol = 1e-8; ///< relative to the operator's one-norm
};

struct DenseOperator {
  int n_qubits = 0;
  Eigen::MatrixXcd matrix;
  bool hermitian = false;
};

/// Kronecker realization of h on n qubits. Throws std::invalid_argument if h
/// acts beyond n qubits and std::length_error above limits.matrix_qubits.
DenseOperator to_matrix(const PauliSum& h, int n_qubits,
                        const SpectralLimits& limits = {});

/// Real coefficient vector of the Pauli expansion of a Hermitian matrix.
PauliSum pauli_decompose(const Eigen::MatrixXcd& m, double chop = 0.0);

/// Low-energy split: P projects every mediator onto |0>, Q = I - P.
struct ProjectorSplit {
  int n_qubits = 0;
  std::vector<Qubit> mediators;

  std::uint64_t mediator_mask() const;
  /// Basis indices in range(P) / range(Q), ascending.
  std::vector<Eigen::Index> p_indices() const;
  std::vector<Eigen::Index> q_indices() const;
  Eigen::MatrixXcd p_matrix() const;
  Eigen::MatrixXcd q_matrix() const;
  /// P as a Pauli sum, prod_u (I + Z_u)/2.
  PauliSum p_sum() const;
};

enum class SolverMethod { kDense, kIterative };

struct GroundStateResult {
  double energy = 0.0;
  double residual = 0.0;
  SolverMethod method = SolverMethod::kDense;
};

/// Lowest eigenvalue of h on n qubits. Decoupled qubit clusters are solved
/// separately and their energies added; each cluster goes to the dense
/// solver up to limits.dense_eig_qubits and to restarted Lanczos with full
/// reorthogonalization above. Throws std::length_error beyond
/// limits.iterative_qubits, std::runtime_error if Lanczos stalls.
GroundStateResult ground_energy(const PauliSum& h, int n_qubits,
                                const SpectralLimits& limits = {});

/// Lanczos on the whole register, no cluster splitting.
GroundStateResult lanczos_ground_energy(const PauliSum& h, int n_qubits,
                                        const SpectralLimits& limits = {});
/// Dense diagonalization on the whole register, no cluster splitting.
GroundStateResult dense_ground_energy(const PauliSum& h, int n_qubits,
                                      const SpectralLimits& limits = {});

/// Ascending eigenvalues of a Hermitian matrix.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);
/// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_norm(const Eigen::MatrixXcd& m);
/// Largest singular value of any matrix.
double spectral_norm(const Eigen::MatrixXcd& m);
double max_abs(const Eigen::MatrixXcd& m);

/// exp(-i * generator_times_i) for Hermitian generator_times_i, i.e. e^S for
/// S = -i * generator_times_i.
Eigen::MatrixXcd exp_anti_hermitian(const Eigen::MatrixXcd& generator_times_i);

/// e^S H e^{-S} with S = -i * generator_times_i, computed by
/// eigendecomposition. Throws std::invalid_argument if generator_times_i is
/// not Hermitian to 1e-10 (i.e. S is not anti-Hermitian), std::runtime_error
/// if the exponential fails the 1e-10 unitarity check.
Eigen::MatrixXcd conjugate_by_exp(const Eigen::MatrixXcd& generator_times_i,
                                  const Eigen::MatrixXcd& h);
DenseOperator conjugate_by_exp(const PauliSum& generator_times_i,
                               const PauliSum& h, int n_qubits,
                               const SpectralLimits& limits = {});

struct BlockDecomposition {
  Eigen::MatrixXcd pp, pq, qp, qq;
  double norm_pp = 0.0, norm_pq = 0.0, norm_qp = 0.0, norm_qq = 0.0;
};

/// Throws std::invalid_argument on a dimension mismatch.
BlockDecomposition block_extract(const Eigen::MatrixXcd& m,
                                 const ProjectorSplit& split);

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m,
                           const std::vector<Eigen::Index>& rows,
                           const std::vector<Eigen::Index>& cols);

}  // namespace gadgets
