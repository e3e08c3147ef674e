#include "gadgets/schrieffer_wolff.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace gadgets {

using Eigen::MatrixXcd;
using cd = std::complex<double>;

Eigen::MatrixXcd SWGenerator::matrix(const SpectralLimits& limits) const {
  if (dense) return *dense;
  return to_matrix(is, split.n_qubits, limits).matrix;
}

namespace {

bool flips(const PauliString& s, Qubit q) {
  const Pauli p = s.at(q);
  return p == Pauli::X || p == Pauli::Y;
}

double scale_of(const PauliSum& x) { return std::max(1.0, x.one_norm()); }

}  // namespace

BlockParts block_parts(const PauliSum& x, const ProjectorSplit& split) {
  // Strings that flip no mediator commute with P and are block-diagonal as
  // they stand; only the rest needs the projector algebra.
  std::vector<PauliTerm> diagonal, flipping;
  for (const auto& t : x.terms()) {
    const bool any = std::any_of(split.mediators.begin(), split.mediators.end(),
                                 [&](Qubit u) { return flips(t.string, u); });
    (any ? flipping : diagonal).push_back(t);
  }
  BlockParts out;
  out.diag = PauliSum(std::move(diagonal), x.identity());
  const PauliSum rest(std::move(flipping));
  if (!rest.empty()) {
    const PauliSum p = split.p_sum();
    const PauliSum rest_diag =
        rest - anticommutator(p, rest) + 2.0 * sandwich(p, rest);
    out.diag += rest_diag;
    out.offdiag = rest - rest_diag;
  }
  return out;
}

bool is_block_offdiagonal(const PauliSum& x, const ProjectorSplit& split, double tol) {
  const PauliSum d = block_parts(x, split).diag;
  return max_abs_difference(d, PauliSum()) <= tol * scale_of(x);
}

PauliSum l0_inverse(const PauliSum& h0, const PauliSum& x) {
  std::map<Qubit, double> field;
  for (const auto& t : h0.terms()) {
    const auto& letters = t.string.letters();
    if (letters.size() != 1 || letters[0].second != Pauli::Z) {
      throw std::invalid_argument("h0 must be a sum of single-qubit Z terms, got " +
                                  t.string.to_string());
    }
    field[letters[0].first] = t.coefficient;
  }

  // commutator(a Z_q, X_q) = 2a Y_q and commutator(a Z_q, Y_q) = -2a X_q, so
  // strings differing only by X <-> Y on the flipped h0 qubits form a closed
  // block of the linear map.
  struct Group {
    std::vector<Qubit> flipped;
    std::map<unsigned, double> rhs;  // flip pattern (bit j: Y on flipped[j])
  };
  std::map<PauliString, Group> groups;
  const PauliSum xs = x.without_identity().chopped(1e-14 * scale_of(x));
  if (xs.identity() != 0.0 || x.identity() != 0.0) {
    throw std::invalid_argument("l0_inverse: x has an identity component");
  }
  for (const auto& t : xs.terms()) {
    const auto src_letters = t.string.letters();
    std::vector<PauliString::Letter> canon(src_letters.begin(), src_letters.end());
    std::vector<Qubit> flipped;
    unsigned pattern = 0;
    for (auto& [q, p] : canon) {
      auto it = field.find(q);
      if (it == field.end() || it->second == 0.0) continue;
      if (p == Pauli::X || p == Pauli::Y) {
        if (p == Pauli::Y) pattern |= 1u << flipped.size();
        flipped.push_back(q);
        p = Pauli::X;
      }
    }
    if (flipped.empty()) {
      throw std::invalid_argument("l0_inverse: block-diagonal term " +
                                  t.string.to_string());
    }
    if (flipped.size() > 12) throw std::length_error("l0_inverse: too many flipped qubits");
    Group& g = groups[PauliString(std::move(canon))];
    g.flipped = flipped;
    g.rhs[pattern] += t.coefficient;
  }

  std::vector<PauliTerm> out;
  for (const auto& [canon, g] : groups) {
    const std::size_t f = g.flipped.size();
    const unsigned dim = 1u << f;
    std::vector<double> a(f);
    double amax = 0.0;
    for (std::size_t j = 0; j < f; ++j) {
      a[j] = field.at(g.flipped[j]);
      amax = std::max(amax, std::abs(a[j]));
    }
    // Eigenvalues of the block are 2i * sum_j (+-a_j).
    for (unsigned signs = 0; signs < dim; ++signs) {
      double e = 0.0;
      for (std::size_t j = 0; j < f; ++j) e += (signs >> j & 1u) ? -a[j] : a[j];
      if (std::abs(e) <= 1e-12 * amax) {
        throw std::domain_error("l0_inverse: degenerate energy denominator for " +
                                canon.to_string());
      }
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
    for (unsigned b = 0; b < dim; ++b) {
      for (std::size_t j = 0; j < f; ++j) {
        const double sign = (b >> j & 1u) ? -1.0 : 1.0;
        m(b ^ (1u << j), b) += 2.0 * a[j] * sign;
      }
    }
    for (const auto& [pattern, c] : g.rhs) rhs(pattern) = c;
    const Eigen::VectorXd sol = m.partialPivLu().solve(rhs);
    for (unsigned b = 0; b < dim; ++b) {
      if (sol(b) == 0.0) continue;
      const auto canon_letters = canon.letters();
      std::vector<PauliString::Letter> letters(canon_letters.begin(), canon_letters.end());
      for (auto& [q, p] : letters) {
        for (std::size_t j = 0; j < f; ++j) {
          if (q == g.flipped[j] && (b >> j & 1u)) p = Pauli::Y;
        }
      }
      out.push_back({sol(b), PauliString(std::move(letters))});
    }
  }
  return PauliSum(std::move(out));
}

Eigen::MatrixXcd l0_inverse(const Eigen::VectorXd& energies, const Eigen::MatrixXcd& x) {
  const Eigen::Index dim = energies.size();
  if (x.rows() != dim || x.cols() != dim) {
    throw std::invalid_argument("l0_inverse: dimension mismatch");
  }
  const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
  const double xscale = std::max(1.0, max_abs(x));
  MatrixXcd s = MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (std::abs(x(i, j)) <= 1e-14 * xscale) continue;
      const double de = energies(i) - energies(j);
      if (std::abs(de) <= 1e-12 * scale) {
        throw std::invalid_argument("l0_inverse: entry between degenerate levels");
      }
      s(i, j) = x(i, j) / de;
    }
  }
  return s;
}

namespace {

void require_offdiagonal(const PauliSum& t, const ProjectorSplit& split,
                         const char* name) {
  if (!is_block_offdiagonal(t, split, 1e-12)) {
    throw std::logic_error(std::string(name) + " is not block-off-diagonal");
  }
}

PauliSum l0_inverse_or_zero(const PauliSum& h0, const PauliSum& x) {
  if (x.chopped(1e-14 * scale_of(x)).empty()) return PauliSum();
  return l0_inverse(h0, x);
}

}  // namespace

SWGenerator sw_perturbative(const PauliSum& h0, const PauliSum& v,
                            const ProjectorSplit& split, int order) {
  if (order < 1 || order > 3) {
    throw std::invalid_argument("sw_perturbative: order must be 1, 2 or 3");
  }
  const BlockParts parts = block_parts(v, split);
  const PauliSum h0_terms = h0.without_identity();

  SWGenerator out;
  out.order = order;
  out.split = split;
  const PauliSum t1 = l0_inverse_or_zero(h0_terms, parts.offdiag);
  require_offdiagonal(t1, split, "S1");
  out.is = t1;
  if (order == 1) return out;

  const PauliSum t2 = l0_inverse_or_zero(h0_terms, commutator(t1, parts.diag));
  require_offdiagonal(t2, split, "S2");
  out.is += t2;
  if (order == 2) return out;

  const PauliSum l1_cubed =
      commutator(t1, commutator(t1, commutator(t1, h0_terms)));
  const PauliSum t3 = l0_inverse_or_zero(
      h0_terms, commutator(t2, parts.diag) - (1.0 / 3.0) * l1_cubed);
  require_offdiagonal(t3, split, "S3");
  out.is += t3;
  return out;
}

ProjectorSplit gadget_split(const GadgetInstance& g, Qubit n_qubits) {
  ProjectorSplit split;
  const Qubit n = std::max({n_qubits, g.hamiltonian().extent(), g.mediator + 1});
  split.n_qubits = static_cast<int>(n);
  split.mediators = {g.mediator};
  return split;
}

SWGenerator sw_gadget_closed_form(const GadgetInstance& g) {
  const PauliSum& a = g.source.factors.at(0);
  const PauliSum& b = g.source.factors.at(1);
  const PauliSum diff = b - a;
  const PauliSum y = PauliSum::single(1.0, g.mediator, Pauli::Y);
  SWGenerator out;
  out.split = gadget_split(g);
  if (g.kind == GadgetKind::kSubdivision) {
    out.order = 1;
    out.is = std::sqrt(g.source.strength / (2.0 * g.gap)) * product(y, diff);
  } else {
    const PauliSum& c = g.source.factors.at(2);
    const double x = g.x;
    const PauliSum bracket = PauliSum(1.0) + x * c + (x * x) * product(c, c) -
                             (2.0 * x * x / 3.0) * product(diff, diff);
    out.order = 3;
    out.is = (x / std::sqrt(2.0)) * product(y, product(diff, bracket));
  }
  return out;
}

SWGenerator sw_gadget_perturbative(const GadgetInstance& g) {
  const int order = g.kind == GadgetKind::kSubdivision ? 1 : 3;
  return sw_perturbative(g.h0, g.perturbation(), gadget_split(g), order);
}

SWGenerator combine(const std::vector<SWGenerator>& generators, int n_qubits) {
  if (generators.empty()) throw std::invalid_argument("combine: no generators");
  SWGenerator out;
  out.order = generators.front().order;
  std::set<Qubit> mediators;
  for (const auto& g : generators) {
    if (g.order != out.order) throw std::invalid_argument("combine: mixed orders");
    if (g.dense) throw std::invalid_argument("combine: dense generators not supported");
    out.is += g.is;
    mediators.insert(g.split.mediators.begin(), g.split.mediators.end());
  }
  out.split.n_qubits = n_qubits;
  out.split.mediators.assign(mediators.begin(), mediators.end());
  return out;
}

namespace {

MatrixXcd hermitize(const MatrixXcd& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

SWGenerator sw_exact(const PauliSum& h, const ProjectorSplit& split,
                     const SpectralLimits& limits) {
  if (split.n_qubits > limits.dense_eig_qubits) {
    throw std::length_error("sw_exact: register above the dense cap");
  }
  const MatrixXcd hm = to_matrix(h, split.n_qubits, limits).matrix;
  const Eigen::Index dim = hm.rows();
  const auto p_idx = split.p_indices();
  const auto rank = static_cast<Eigen::Index>(p_idx.size());

  SWGenerator out;
  out.split = split;
  out.dense = MatrixXcd::Zero(dim, dim);
  if (rank == 0 || rank == dim) return out;

  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(hm);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  if (lam(rank) - lam(rank - 1) <= 1e-9 * scale) {
    throw std::domain_error("sw_exact: no gap at the low-energy cut");
  }
  const MatrixXcd low = eig.eigenvectors().leftCols(rank);
  const MatrixXcd pt = low * low.adjoint();
  const MatrixXcd p = split.p_matrix();
  const MatrixXcd id = MatrixXcd::Identity(dim, dim);
  if (spectral_norm(p - pt) >= 1.0 - 1e-12) {
    throw std::domain_error("sw_exact: subspaces too far apart for a direct rotation");
  }

  // U maps range(P~) onto range(P); e^S = U.
  const MatrixXcd m = p * pt + (id - p) * (id - pt);
  Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const MatrixXcd u = svd.matrixU() * svd.matrixV().adjoint();

  Eigen::ComplexSchur<MatrixXcd> schur(u);
  const MatrixXcd& tri = schur.matrixT();
  Eigen::VectorXcd log_diag(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double phase = std::arg(tri(j, j));
    if (std::abs(phase) >= std::numbers::pi - 1e-9) {
      throw std::domain_error("sw_exact: rotation angle reaches pi");
    }
    log_diag(j) = cd(0.0, phase);
  }
  const MatrixXcd& z = schur.matrixU();
  const MatrixXcd s = z * log_diag.asDiagonal() * z.adjoint();

  if (spectral_norm(s + s.adjoint()) > 1e-10) {
    throw std::runtime_error("sw_exact: generator is not anti-Hermitian");
  }
  const BlockDecomposition blocks = block_extract(s, split);
  if (blocks.norm_pp > 1e-10 || blocks.norm_qq > 1e-10) {
    throw std::runtime_error("sw_exact: generator is not block-off-diagonal");
  }
  const MatrixXcd t = hermitize(cd(0.0, 1.0) * s);
  out.dense = t;
  out.is = pauli_decompose(t, 1e-15);
  return out;
}

EffectiveHamiltonian effective_hamiltonian(const PauliSum& h, const SWGenerator& s,
                                           const SpectralLimits& limits) {
  const ProjectorSplit& split = s.split;
  const MatrixXcd hm = to_matrix(h, split.n_qubits, limits).matrix;
  const MatrixXcd t = s.matrix(limits);
  const MatrixXcd conj = hermitize(conjugate_by_exp(t, hm));
  const BlockDecomposition blocks = block_extract(conj, split);

  EffectiveHamiltonian out;
  out.h_eff.n_qubits = split.n_qubits - static_cast<int>(split.mediators.size());
  out.h_eff.matrix = blocks.pp;
  out.h_eff.hermitian = true;
  out.offdiag_residual = blocks.norm_pq;
  if (blocks.qq.size() > 0) out.q_block_min = hermitian_eigenvalues(blocks.qq)(0);

  const MatrixXcd sm = cd(0.0, -1.0) * t;
  auto lie = [&](const MatrixXcd& x) { return hermitize(sm * x - x * sm); };
  const MatrixXcd l1 = lie(hm);
  const MatrixXcd l2 = lie(l1);
  const MatrixXcd l3 = lie(l2);
  const MatrixXcd l4 = lie(l3);
  const auto p_idx = split.p_indices();
  out.truncation_error_bound = hermitian_norm(submatrix(l3, p_idx, p_idx)) / 6.0 +
                               hermitian_norm(l4) / 24.0;
  const MatrixXcd deviation = conj - hm - l1 - 0.5 * l2;
  out.second_order_deviation = hermitian_norm(submatrix(deviation, p_idx, p_idx));
  return out;
}

Eigen::MatrixXcd restrict_to_p(const PauliSum& op, const ProjectorSplit& split,
                               const SpectralLimits& limits) {
  const auto p_idx = split.p_indices();
  return submatrix(to_matrix(op, split.n_qubits, limits).matrix, p_idx, p_idx);
}

}  // namespace gadgets
