#include "gadgets/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace gadgets {

namespace {

using cd = std::complex<double>;

struct EncodedTerm {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  cd weight;  // coefficient * i^{|x & z|}
};

std::vector<EncodedTerm> encode(const PauliSum& h, int n_qubits) {
  if (static_cast<int>(h.extent()) > n_qubits) {
    throw std::invalid_argument("operator acts on qubit " +
                                std::to_string(h.extent() - 1) + " beyond a " +
                                std::to_string(n_qubits) + "-qubit register");
  }
  std::vector<EncodedTerm> out;
  out.reserve(h.size());
  for (const auto& t : h.terms()) {
    EncodedTerm e;
    for (const auto& [q, p] : t.string.letters()) {
      const std::uint64_t bit = std::uint64_t{1} << q;
      if (p == Pauli::X || p == Pauli::Y) e.x |= bit;
      if (p == Pauli::Z || p == Pauli::Y) e.z |= bit;
    }
    // Y = i X Z.
    e.weight = t.coefficient *
               Phase{static_cast<std::uint8_t>(std::popcount(e.x & e.z) & 3)}.value();
    out.push_back(e);
  }
  return out;
}

inline double parity_sign(std::uint64_t v) {
  return (std::popcount(v) & 1) ? -1.0 : 1.0;
}

void apply(const std::vector<EncodedTerm>& terms, double identity,
           const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  out = identity * in;
  const auto dim = static_cast<std::uint64_t>(in.size());
  for (const auto& t : terms) {
    for (std::uint64_t c = 0; c < dim; ++c) {
      out[static_cast<Eigen::Index>(c ^ t.x)] +=
          t.weight * parity_sign(t.z & c) * in[static_cast<Eigen::Index>(c)];
    }
  }
}

bool is_real(const Eigen::MatrixXcd& m) {
  return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

bool is_imaginary(const Eigen::MatrixXcd& m) {
  return m.real().cwiseAbs().maxCoeff() == 0.0;
}

void check_register(int n_qubits, const SpectralLimits& limits) {
  if (n_qubits < 0) throw std::invalid_argument("negative qubit count");
  if (n_qubits > limits.iterative_qubits) {
    throw std::length_error(std::to_string(n_qubits) +
                            " qubits exceed the iterative cap of " +
                            std::to_string(limits.iterative_qubits));
  }
}

}  // namespace

DenseOperator to_matrix(const PauliSum& h, int n_qubits,
                        const SpectralLimits& limits) {
  if (n_qubits > limits.matrix_qubits) {
    throw std::length_error(std::to_string(n_qubits) +
                            " qubits exceed the dense cap of " +
                            std::to_string(limits.matrix_qubits));
  }
  const auto terms = encode(h, n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  DenseOperator op;
  op.n_qubits = n_qubits;
  op.matrix = Eigen::MatrixXcd::Identity(dim, dim) * h.identity();
  for (const auto& t : terms) {
    for (std::uint64_t c = 0; c < static_cast<std::uint64_t>(dim); ++c) {
      op.matrix(static_cast<Eigen::Index>(c ^ t.x), static_cast<Eigen::Index>(c)) +=
          t.weight * parity_sign(t.z & c);
    }
  }
  op.hermitian = true;
  return op;
}

PauliSum pauli_decompose(const Eigen::MatrixXcd& m, double chop) {
  const Eigen::Index dim = m.rows();
  if (m.cols() != dim || dim == 0 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("matrix dimension is not a power of two");
  }
  const int n = std::countr_zero(static_cast<std::uint64_t>(dim));
  std::map<PauliString, double> coefficients;
  Eigen::VectorXcd f(dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (Eigen::Index c = 0; c < dim; ++c) f[c] = m(c ^ x, c);
    // Walsh-Hadamard transform over c.
    for (Eigen::Index len = 1; len < dim; len <<= 1) {
      for (Eigen::Index i = 0; i < dim; i += len << 1) {
        for (Eigen::Index j = i; j < i + len; ++j) {
          const cd a = f[j];
          const cd b = f[j + len];
          f[j] = a + b;
          f[j + len] = a - b;
        }
      }
    }
    for (Eigen::Index z = 0; z < dim; ++z) {
      const int y_count = std::popcount(static_cast<std::uint64_t>(x & z));
      const cd c = Phase{static_cast<std::uint8_t>((4 - (y_count & 3)) & 3)}.value() *
                   f[z] / static_cast<double>(dim);
      if (std::abs(c.real()) <= chop) continue;
      std::vector<PauliString::Letter> letters;
      for (int q = 0; q < n; ++q) {
        const bool xb = (x >> q) & 1;
        const bool zb = (z >> q) & 1;
        if (xb || zb) {
          letters.emplace_back(static_cast<Qubit>(q),
                               xb && zb ? Pauli::Y : (xb ? Pauli::X : Pauli::Z));
        }
      }
      coefficients[PauliString(std::move(letters))] = c.real();
    }
  }
  return PauliSum::from_map(coefficients);
}

// ---------------------------------------------------------------------------
// ProjectorSplit

std::uint64_t ProjectorSplit::mediator_mask() const {
  std::uint64_t mask = 0;
  for (Qubit u : mediators) {
    if (static_cast<int>(u) >= n_qubits) {
      throw std::invalid_argument("mediator outside the register");
    }
    mask |= std::uint64_t{1} << u;
  }
  return mask;
}

std::vector<Eigen::Index> ProjectorSplit::p_indices() const {
  const std::uint64_t mask = mediator_mask();
  std::vector<Eigen::Index> out;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n_qubits); ++c) {
    if ((c & mask) == 0) out.push_back(static_cast<Eigen::Index>(c));
  }
  return out;
}

std::vector<Eigen::Index> ProjectorSplit::q_indices() const {
  const std::uint64_t mask = mediator_mask();
  std::vector<Eigen::Index> out;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << n_qubits); ++c) {
    if ((c & mask) != 0) out.push_back(static_cast<Eigen::Index>(c));
  }
  return out;
}

Eigen::MatrixXcd ProjectorSplit::p_matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i : p_indices()) p(i, i) = 1.0;
  return p;
}

Eigen::MatrixXcd ProjectorSplit::q_matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  return Eigen::MatrixXcd::Identity(dim, dim) - p_matrix();
}

PauliSum ProjectorSplit::p_sum() const {
  PauliSum p(1.0);
  for (Qubit u : mediators) {
    p = product(p, PauliSum(0.5) + PauliSum::single(0.5, u, Pauli::Z));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Norms and eigenvalues

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (is_real(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double hermitian_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  if (!is_real(m) && is_imaginary(m)) {
    // m = iA with A real antisymmetric, so m^2 = A^T A.
    const Eigen::MatrixXd a = m.imag();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a,
                                                      Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  const Eigen::VectorXd ev = hermitian_eigenvalues(m);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double max_abs(const Eigen::MatrixXcd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double operator_norm_local(const PauliSum& op, std::size_t support_cap) {
  const auto support = op.support();
  if (support.size() > support_cap) {
    throw std::length_error("support of " + std::to_string(support.size()) +
                            " qubits exceeds the cap of " +
                            std::to_string(support_cap));
  }
  std::map<Qubit, Qubit> relabel;
  for (std::size_t i = 0; i < support.size(); ++i) {
    relabel[support[i]] = static_cast<Qubit>(i);
  }
  SpectralLimits limits;
  limits.matrix_qubits = static_cast<int>(support_cap);
  const auto dense =
      to_matrix(embed(op, relabel), static_cast<int>(support.size()), limits);
  return hermitian_norm(dense.matrix);
}

// ---------------------------------------------------------------------------
// Ground states

GroundStateResult dense_ground_energy(const PauliSum& h, int n_qubits,
                                      const SpectralLimits& limits) {
  if (n_qubits > limits.dense_eig_qubits) {
    throw std::length_error("register too large for the dense eigensolver");
  }
  const Eigen::MatrixXcd m = to_matrix(h, n_qubits, limits).matrix;
  GroundStateResult result;
  result.method = SolverMethod::kDense;
  if (is_real(m)) {
    const Eigen::MatrixXd re = m.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re);
    result.energy = es.eigenvalues()(0);
    const Eigen::VectorXd v = es.eigenvectors().col(0);
    result.residual = (re * v - result.energy * v).norm();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    result.energy = es.eigenvalues()(0);
    const Eigen::VectorXcd v = es.eigenvectors().col(0);
    result.residual = (m * v - result.energy * v).norm();
  }
  return result;
}

GroundStateResult lanczos_ground_energy(const PauliSum& h, int n_qubits,
                                        const SpectralLimits& limits) {
  check_register(n_qubits, limits);
  const auto terms = encode(h, n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  const double tol = limits.residual_tol * std::max(1.0, h.one_norm());

  // Krylov block capped near 256 MiB of basis vectors.
  const Eigen::Index memory_cap =
      std::max<Eigen::Index>(8, (Eigen::Index{1} << 24) / dim);
  const Eigen::Index block = std::min<Eigen::Index>({dim, 120, memory_cap});

  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cd(normal(rng), normal(rng));
  v.normalize();

  Eigen::MatrixXcd basis(dim, block);
  Eigen::VectorXcd w(dim);
  int products = 0;
  GroundStateResult result;
  result.method = SolverMethod::kIterative;
  while (true) {
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.col(0) = v;
    Eigen::Index size = 0;
    for (Eigen::Index j = 0; j < block; ++j) {
      apply(terms, h.identity(), basis.col(j), w);
      ++products;
      alpha.push_back(basis.col(j).dot(w).real());
      // Full reorthogonalization, applied twice.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd overlaps =
            basis.leftCols(j + 1).adjoint() * w;
        w.noalias() -= basis.leftCols(j + 1) * overlaps;
      }
      size = j + 1;
      const double b = w.norm();
      if (j + 1 == block || products >= limits.max_iterations ||
          b <= 1e-14 * std::max(1.0, std::abs(alpha.back()))) {
        beta.push_back(b);
        break;
      }
      beta.push_back(b);
      basis.col(j + 1) = w / b;
    }

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < size) {
        t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const double theta = es.eigenvalues()(0);
    v = basis.leftCols(size) * es.eigenvectors().col(0).cast<cd>();
    v.normalize();
    apply(terms, h.identity(), v, w);
    ++products;
    result.energy = theta;
    result.residual = (w - theta * v).norm();
    if (result.residual <= tol) return result;
    if (products >= limits.max_iterations) {
      throw std::runtime_error("Lanczos did not converge: residual " +
                               format_double(result.residual) + " after " +
                               std::to_string(products) + " products");
    }
  }
}

GroundStateResult ground_energy(const PauliSum& h, int n_qubits,
                                const SpectralLimits& limits) {
  check_register(n_qubits, limits);
  if (static_cast<int>(h.extent()) > n_qubits) {
    throw std::invalid_argument("operator acts beyond the register");
  }
  // Union-find over qubits coupled by a common term.
  std::vector<Qubit> parent(static_cast<std::size_t>(n_qubits));
  std::iota(parent.begin(), parent.end(), Qubit{0});
  auto find = [&](Qubit q) {
    while (parent[q] != q) q = parent[q] = parent[parent[q]];
    return q;
  };
  for (const auto& t : h.terms()) {
    const auto support = t.string.support();
    for (std::size_t i = 1; i < support.size(); ++i) {
      parent[find(support[i])] = find(support[0]);
    }
  }
  std::map<Qubit, std::vector<PauliTerm>> clusters;
  for (const auto& t : h.terms()) {
    clusters[find(t.string.letters().front().first)].push_back(t);
  }

  GroundStateResult total;
  total.energy = h.identity();
  for (auto& [root, terms] : clusters) {
    PauliSum part(std::move(terms));
    const auto support = part.support();
    std::map<Qubit, Qubit> relabel;
    for (std::size_t i = 0; i < support.size(); ++i) {
      relabel[support[i]] = static_cast<Qubit>(i);
    }
    const PauliSum local = embed(part, relabel);
    const int size = static_cast<int>(support.size());
    const GroundStateResult r = size <= limits.dense_eig_qubits
                                    ? dense_ground_energy(local, size, limits)
                                    : lanczos_ground_energy(local, size, limits);
    total.energy += r.energy;
    total.residual += r.residual;
    if (r.method == SolverMethod::kIterative) total.method = SolverMethod::kIterative;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Conjugation and blocks

Eigen::MatrixXcd exp_anti_hermitian(const Eigen::MatrixXcd& generator_times_i) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(generator_times_i);
  const Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cd>() * cd(0.0, -1.0)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd conjugate_by_exp(const Eigen::MatrixXcd& generator_times_i,
                                  const Eigen::MatrixXcd& h) {
  if (generator_times_i.rows() != h.rows() || generator_times_i.cols() != h.cols()) {
    throw std::invalid_argument("generator and operator dimensions differ");
  }
  if (max_abs(generator_times_i - generator_times_i.adjoint()) > 1e-10) {
    throw std::invalid_argument("generator is not anti-Hermitian");
  }
  const Eigen::MatrixXcd u = exp_anti_hermitian(generator_times_i);
  const Eigen::Index dim = u.rows();
  if (max_abs(u * u.adjoint() - Eigen::MatrixXcd::Identity(dim, dim)) > 1e-10) {
    throw std::runtime_error("exponential failed the unitarity check");
  }
  return u * h * u.adjoint();
}

DenseOperator conjugate_by_exp(const PauliSum& generator_times_i,
                               const PauliSum& h, int n_qubits,
                               const SpectralLimits& limits) {
  DenseOperator out;
  out.n_qubits = n_qubits;
  out.matrix = conjugate_by_exp(to_matrix(generator_times_i, n_qubits, limits).matrix,
                                to_matrix(h, n_qubits, limits).matrix);
  out.hermitian = true;
  return out;
}

Eigen::MatrixXcd submatrix(const Eigen::MatrixXcd& m,
                           const std::vector<Eigen::Index>& rows,
                           const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
    }
  }
  return out;
}

BlockDecomposition block_extract(const Eigen::MatrixXcd& m,
                                 const ProjectorSplit& split) {
  const Eigen::Index dim = Eigen::Index{1} << split.n_qubits;
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument("matrix does not match the split's register");
  }
  const auto p = split.p_indices();
  const auto q = split.q_indices();
  BlockDecomposition b;
  b.pp = submatrix(m, p, p);
  b.pq = submatrix(m, p, q);
  b.qp = submatrix(m, q, p);
  b.qq = submatrix(m, q, q);
  b.norm_pp = spectral_norm(b.pp);
  b.norm_pq = spectral_norm(b.pq);
  b.norm_qp = spectral_norm(b.qp);
  b.norm_qq = spectral_norm(b.qq);
  return b;
}

}  // namespace gadgets
