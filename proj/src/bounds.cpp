#include "gadgets/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gadgets {

PauliSum nested_commutator(const PauliSum& is, const PauliSum& h, int k) {
  if (k < 0) throw std::invalid_argument("nested_commutator: negative order");
  if (k > kMaxNestedOrder) {
    throw std::length_error("nested_commutator: order " + std::to_string(k) +
                            " above the cap of " + std::to_string(kMaxNestedOrder));
  }
  PauliSum out = h;
  for (int i = 0; i < k; ++i) out = commutator(is, out);
  return out;
}

CountingBound counting_bound(const PauliSum& is, const PauliSum& h, int k) {
  if (k < 0 || k > kMaxNestedOrder) {
    throw std::invalid_argument("counting_bound: order out of range");
  }
  struct Elementary {
    PauliString string;
    double norm;
  };
  std::vector<Elementary> current;
  for (const auto& t : h.terms()) current.push_back({t.string, std::abs(t.coefficient)});
  for (int step = 0; step < k; ++step) {
    std::vector<Elementary> next;
    for (const auto& e : current) {
      for (const auto& s : is.terms()) {
        if (s.string.commutes_with(e.string)) continue;
        next.push_back({multiply(s.string, e.string).product,
                        2.0 * std::abs(s.coefficient) * e.norm});
      }
      if (next.size() > 5'000'000) {
        throw std::length_error("counting_bound: too many elementary commutators");
      }
    }
    current = std::move(next);
  }
  CountingBound out;
  out.elementary = current.size();
  for (const auto& e : current) out.norm_sum += e.norm;
  return out;
}

RemainderReport remainder_r_k(const SWGenerator& s, const PauliSum& h, int k,
                              double t, const SpectralLimits& limits) {
  if (k < 0) throw std::invalid_argument("remainder_r_k: negative order");
  const int n = s.split.n_qubits;
  const PauliSum scaled = t * s.is;
  const Eigen::MatrixXcd hm = to_matrix(h, n, limits).matrix;
  const Eigen::MatrixXcd conj = conjugate_by_exp(t * s.matrix(limits), hm);

  PauliSum partial;
  PauliSum term = h;
  double factorial = 1.0;
  for (int p = 0; p < k; ++p) {
    if (p > 0) {
      term = commutator(scaled, term);
      factorial *= p;
    }
    partial += (1.0 / factorial) * term;
  }
  const PauliSum lk = nested_commutator(scaled, h, k);
  double k_factorial = 1.0;
  for (int p = 2; p <= k; ++p) k_factorial *= p;

  RemainderReport out;
  out.k = k;
  out.t = t;
  const Eigen::MatrixXcd diff = conj - to_matrix(partial, n, limits).matrix;
  out.r_k = hermitian_norm(0.5 * (diff + diff.adjoint()));
  out.bound = hermitian_norm(to_matrix(lk, n, limits).matrix) / k_factorial;
  out.satisfied = out.r_k <= out.bound + 1e-9;
  out.slack = out.bound - out.r_k;
  return out;
}

double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

PauliSum random_pauli_sum(int n_qubits, int terms, double norm, std::mt19937_64& rng) {
  if (n_qubits < 1 || terms < 1) {
    throw std::invalid_argument("random_pauli_sum: need at least one qubit and term");
  }
  std::vector<PauliTerm> out;
  while (static_cast<int>(out.size()) < terms) {
    std::vector<PauliString::Letter> letters;
    for (int q = 0; q < n_qubits; ++q) {
      const auto p = static_cast<Pauli>(rng() >> 62);
      if (p != Pauli::I) letters.emplace_back(static_cast<Qubit>(q), p);
    }
    if (letters.empty()) continue;
    out.push_back({2.0 * unit_uniform(rng) - 1.0, PauliString(std::move(letters))});
  }
  PauliSum sum(std::move(out));
  const double current = hermitian_norm(to_matrix(sum, n_qubits).matrix);
  if (current == 0.0) return sum;
  return (norm / current) * sum;
}

Lemma1Suite lemma1_suite(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Lemma1Suite out;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int s_terms = 1 + static_cast<int>(rng() % 6);
    const int h_terms = 1 + static_cast<int>(rng() % 8);
    const double s_norm = 0.05 + 0.95 * unit_uniform(rng);
    SWGenerator s;
    s.order = 1;
    s.split.n_qubits = n;
    s.is = random_pauli_sum(n, s_terms, s_norm, rng);
    const PauliSum h = random_pauli_sum(n, h_terms, 1.0, rng);
    for (int k = 1; k <= 4; ++k) {
      for (double t : {0.25, 0.5, 1.0}) {
        RemainderReport r = remainder_r_k(s, h, k, t);
        if (!r.satisfied) ++out.violations;
        out.reports.push_back(r);
      }
    }
  }
  return out;
}

ScalingInstance chain_instance(int n, double j_h, double j_s) {
  if (n < 2) throw std::invalid_argument("chain_instance: need n >= 2");
  ScalingInstance inst;
  inst.n = n;
  for (int i = 0; i < n; ++i) {
    const auto q = static_cast<Qubit>(i);
    const auto next = static_cast<Qubit>((i + 1) % n);
    inst.h += PauliSum(j_h, PauliString({{q, Pauli::Z}, {next, Pauli::Z}}));
    inst.is += PauliSum::single(j_s, q, Pauli::X);
  }
  return inst;
}

ScalingReport lemma2_scaling(const std::function<ScalingInstance(int)>& family,
                             std::vector<int> sizes, int k,
                             const SpectralLimits& limits) {
  if (sizes.size() < 3) throw std::invalid_argument("lemma2_scaling: need three sizes");
  std::sort(sizes.begin(), sizes.end());
  ScalingReport out;
  out.k = k;
  std::vector<double> xs, ys;
  for (int n : sizes) {
    const ScalingInstance inst = family(n);
    const PauliSum lk = nested_commutator(inst.is, inst.h, k);
    const CountingBound cb = counting_bound(inst.is, inst.h, k);
    ScalingSample sample;
    sample.n = n;
    sample.counting_norm = cb.norm_sum;
    sample.elementary = cb.elementary;
    double value = cb.norm_sum;
    if (n <= limits.dense_eig_qubits) {
      sample.dense_norm = hermitian_norm(to_matrix(lk, n, limits).matrix);
      value = sample.dense_norm;
    }
    const double js = locality_profile(inst.is).J;
    const double jh = locality_profile(inst.h).J;
    const double scale = n * std::pow(js, k) * jh;
    sample.ratio = scale > 0.0 ? value / scale : 0.0;
    out.samples.push_back(sample);
    xs.push_back(n);
    ys.push_back(value);
  }

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  out.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - out.fitted_slope * sx) / m;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + out.fitted_slope * xs[i]);
    rss += r * r;
  }
  out.fit_residual = std::sqrt(rss / m);

  out.bounded = true;
  for (std::size_t i = 1; i < out.samples.size(); ++i) {
    if (out.samples[i].ratio > 1.2 * out.samples[i - 1].ratio + 1e-15) out.bounded = false;
  }
  return out;
}

PauliSum p_restrict(const PauliSum& x, const std::vector<Qubit>& mediators) {
  std::vector<PauliTerm> out;
  for (const auto& t : x.terms()) {
    std::vector<PauliString::Letter> kept;
    bool flipped = false;
    for (const auto& [q, p] : t.string.letters()) {
      if (std::find(mediators.begin(), mediators.end(), q) == mediators.end()) {
        kept.emplace_back(q, p);
      } else if (p == Pauli::X || p == Pauli::Y) {
        flipped = true;
        break;
      }
    }
    if (!flipped) out.push_back({t.coefficient, PauliString(std::move(kept))});
  }
  return PauliSum(std::move(out), x.identity());
}

namespace {

double norm_of(const PauliSum& x) {
  if (x.empty()) return 0.0;
  if (x.support().size() <= 12) return operator_norm_local(x);
  return x.one_norm();
}

}  // namespace

CrossGadgetReport cross_gadget_report(const SimulatorHamiltonian& sim,
                                      const std::vector<SWGenerator>& generators) {
  if (generators.size() != sim.gadgets.size()) {
    throw std::invalid_argument("cross_gadget_report: need one generator per gadget");
  }
  const std::vector<Qubit> mediators = sim.mediator_registry();
  const std::size_t m = sim.gadgets.size();
  CrossGadgetReport out;
  double j_max = 0.0;
  for (const auto& g : sim.gadgets) j_max = std::max(j_max, g.source.strength);

  auto forced_zero = [&](const PauliSum& x) {
    ++out.forced_zero_checked;
    out.forced_zero_violations += p_restrict(x, mediators).size();
  };

  PauliSum surviving;
  for (std::size_t v = 0; v < m; ++v) {
    const PauliSum& sv = generators[v].is;
    for (std::size_t u = 0; u < m; ++u) {
      const GadgetInstance& gu = sim.gadgets[u];
      if (u != v) forced_zero(commutator(sv, gu.hamiltonian()));
      for (std::size_t w = 0; w < m; ++w) {
        if (w != v) forced_zero(commutator(sv, commutator(generators[w].is, gu.hamiltonian())));
      }
      if (u == v) continue;

      const PauliSum with_extra =
          p_restrict(commutator(sv, commutator(sv, gu.v_extra)), mediators);
      const PauliSum with_full =
          p_restrict(commutator(sv, commutator(sv, gu.perturbation())), mediators);
      CrossPair pair;
      pair.u = gu.mediator;
      pair.v = sim.gadgets[v].mediator;
      pair.norm = norm_of(with_extra);
      pair.extra_identity_gap = max_abs_difference(with_extra, with_full);
      out.pairs.push_back(pair);
      surviving += with_extra;

      const GadgetInstance& gv = sim.gadgets[v];
      const double eps = gv.precision();
      out.budget += (gv.kind == GadgetKind::kSubdivision ? eps * eps : eps) * j_max;
    }
  }
  out.total = norm_of(surviving);
  return out;
}

double min_eigenvalue_difference(const PauliSum& lhs, const PauliSum& rhs,
                                 int n_qubits, const SpectralLimits& limits) {
  return ground_energy(lhs - rhs, n_qubits, limits).energy;
}

bool operator_inequality_check(const PauliSum& lhs, const PauliSum& rhs,
                               double slack, int n_qubits,
                               const SpectralLimits& limits) {
  return min_eigenvalue_difference(lhs, rhs, n_qubits, limits) >= -slack;
}

}  // namespace gadgets
