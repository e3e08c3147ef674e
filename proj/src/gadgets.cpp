#include "gadgets/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gadgets {

std::string to_string(GadgetKind kind) {
  return kind == GadgetKind::kSubdivision ? "subdivision" : "three-to-two";
}

PauliSum FactorizedInteraction::target() const {
  PauliSum out(strength);
  for (const auto& f : factors) out = product(out, f);
  return out;
}

FactorizedInteraction factorize_term(const PauliTerm& term, bool three_way) {
  const std::size_t k = term.string.weight();
  if (k < 3) {
    throw std::invalid_argument("weight-" + std::to_string(k) +
                                " term is not gadgetizable");
  }
  if (term.coefficient == 0.0 || !std::isfinite(term.coefficient)) {
    throw std::invalid_argument("gadgetized term needs a finite nonzero coefficient");
  }
  if (three_way && k != 3) {
    throw std::invalid_argument("three-way split needs a weight-3 term");
  }
  FactorizedInteraction f;
  f.strength = std::abs(term.coefficient);
  f.source = term;
  const double sign = term.coefficient < 0.0 ? -1.0 : 1.0;
  const auto letters = term.string.letters();
  if (three_way) {
    for (const auto& [q, p] : letters) f.factors.push_back(PauliSum::single(1.0, q, p));
  } else {
    const std::size_t split = (k + 1) / 2;
    f.factors.emplace_back(1.0, PauliString({letters.begin(), letters.begin() + split}));
    f.factors.emplace_back(1.0, PauliString({letters.begin() + split, letters.end()}));
  }
  f.factors.front() *= sign;
  return f;
}

double GadgetInstance::precision() const {
  return kind == GadgetKind::kSubdivision ? std::sqrt(source.strength / gap) : x;
}

namespace {

void check_factors(const FactorizedInteraction& f, Qubit mediator) {
  if (!(f.strength > 0.0) || !std::isfinite(f.strength)) {
    throw std::invalid_argument("interaction strength must be positive");
  }
  std::set<Qubit> seen;
  for (const auto& factor : f.factors) {
    for (Qubit q : factor.support()) {
      if (!seen.insert(q).second) {
        throw std::invalid_argument("factors overlap on qubit " + std::to_string(q));
      }
    }
    if (operator_norm_local(factor) > 1.0 + 1e-12) {
      throw std::invalid_argument("factor norm exceeds one");
    }
  }
  if (seen.contains(mediator)) {
    throw std::invalid_argument("mediator qubit overlaps the interaction");
  }
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("eps must lie in (0, 1), got " + format_double(eps));
  }
}

void check_gap(double gap) {
  if (!(gap > 0.0) || !std::isfinite(gap)) {
    throw std::invalid_argument("gap must be positive and finite");
  }
}

PauliSum penalty(double gap, Qubit u) {
  return PauliSum(gap / 2.0) + PauliSum::single(-gap / 2.0, u, Pauli::Z);
}

}  // namespace

GadgetInstance subdivision_gadget_with_gap(const FactorizedInteraction& f,
                                           double gap, Qubit mediator) {
  if (f.factors.size() != 2) {
    throw std::invalid_argument("subdivision gadget needs two factors");
  }
  check_gap(gap);
  check_factors(f, mediator);
  const PauliSum& a = f.factors[0];
  const PauliSum& b = f.factors[1];
  const double J = f.strength;

  GadgetInstance g;
  g.kind = GadgetKind::kSubdivision;
  g.mediator = mediator;
  g.gap = gap;
  g.source = f;
  g.h0 = penalty(gap, mediator);
  g.v_offdiag = std::sqrt(gap * J / 2.0) *
                product(PauliSum::single(1.0, mediator, Pauli::X), b - a);
  g.v_extra = (J / 2.0) * (product(a, a) + product(b, b));
  return g;
}

GadgetInstance three_to_two_gadget_with_gap(const FactorizedInteraction& f,
                                            double gap, Qubit mediator) {
  if (f.factors.size() != 3) {
    throw std::invalid_argument("three-to-two gadget needs three factors");
  }
  for (const auto& factor : f.factors) {
    if (factor.support().size() != 1) {
      throw std::invalid_argument("three-to-two factors must be single-qubit");
    }
  }
  check_gap(gap);
  check_factors(f, mediator);
  const PauliSum& a = f.factors[0];
  const PauliSum& b = f.factors[1];
  const PauliSum& c = f.factors[2];
  const double J = f.strength;

  GadgetInstance g;
  g.kind = GadgetKind::kThreeToTwo;
  g.mediator = mediator;
  g.gap = gap;
  g.source = f;
  g.x = std::cbrt(J / gap);
  // gap * x = gap^(2/3) J^(1/3),  gap * x^2 = gap^(1/3) J^(2/3).
  const double coupling = gap * g.x;
  const PauliSum diff = b - a;
  g.h0 = penalty(gap, mediator);
  g.v_diag = -coupling * product(penalty(1.0, mediator), c);
  g.v_offdiag = (coupling / std::sqrt(2.0)) *
                product(PauliSum::single(1.0, mediator, Pauli::X), diff);
  g.v_extra = (gap * g.x * g.x / 2.0) * product(diff, diff) +
              (J / 2.0) * product(product(a, a) + product(b, b), c);
  return g;
}

GadgetInstance subdivision_gadget(const FactorizedInteraction& f, double eps,
                                  Qubit mediator) {
  check_eps(eps);
  return subdivision_gadget_with_gap(f, f.strength / (eps * eps), mediator);
}

GadgetInstance three_to_two_gadget(const FactorizedInteraction& f, double eps,
                                   Qubit mediator) {
  check_eps(eps);
  return three_to_two_gadget_with_gap(f, f.strength / (eps * eps * eps), mediator);
}

std::vector<Qubit> SimulatorHamiltonian::mediator_registry() const {
  std::vector<Qubit> out;
  for (const auto& g : gadgets) out.push_back(g.mediator);
  return out;
}

PauliSum SimulatorHamiltonian::target() const {
  PauliSum out = h_else;
  for (const auto& g : gadgets) out += g.target();
  return out;
}

SimulatorHamiltonian assemble_simulator(const PauliSum& target, double eps,
                                        const AssemblyOptions& options) {
  if (!options.gap) check_eps(eps);
  SimulatorHamiltonian sim;
  sim.n_system = options.n_system.value_or(target.extent());
  if (sim.n_system < target.extent()) {
    throw std::invalid_argument("n_system smaller than the target's extent");
  }

  std::vector<std::pair<GadgetKind, const PauliTerm*>> plan;
  std::vector<PauliTerm> rest;
  double strength[2] = {0.0, 0.0};
  for (const auto& t : target.terms()) {
    const std::size_t k = t.string.weight();
    std::optional<GadgetKind> kind;
    switch (options.kind) {
      case AssemblyKind::kSubdivision:
        if (k >= std::max<std::size_t>(3, options.min_weight)) kind = GadgetKind::kSubdivision;
        break;
      case AssemblyKind::kThreeToTwo:
        if (k > 3) {
          throw std::invalid_argument("weight-" + std::to_string(k) +
                                      " term is not three-to-two gadgetizable: " +
                                      t.string.to_string());
        }
        if (k == 3) kind = GadgetKind::kThreeToTwo;
        break;
      case AssemblyKind::kAuto:
        if (k >= 4) kind = GadgetKind::kSubdivision;
        if (k == 3) kind = GadgetKind::kThreeToTwo;
        break;
    }
    if (kind) {
      plan.emplace_back(*kind, &t);
      auto& s = strength[static_cast<int>(*kind)];
      s = std::max(s, std::abs(t.coefficient));
    } else {
      rest.push_back(t);
    }
  }
  sim.h_else = PauliSum(std::move(rest), target.identity());

  Qubit next = sim.n_system;
  for (const auto& [kind, term] : plan) {
    if (kind == GadgetKind::kSubdivision) {
      const double gap = options.gap.value_or(
          strength[static_cast<int>(kind)] / (eps * eps));
      sim.gadgets.push_back(subdivision_gadget_with_gap(factorize_term(*term), gap, next++));
    } else {
      const double gap = options.gap.value_or(
          strength[static_cast<int>(kind)] / (eps * eps * eps));
      sim.gadgets.push_back(
          three_to_two_gadget_with_gap(factorize_term(*term, true), gap, next++));
    }
  }
  sim.total_qubits = next;
  sim.assembled = sim.h_else;
  for (const auto& g : sim.gadgets) sim.assembled += g.hamiltonian();
  return sim;
}

double interaction_strength(const PauliSum& h, std::span<const double> gaps) {
  double s = locality_profile(h).J;
  for (double g : gaps) s = std::max(s, g);
  return s;
}

std::size_t subdivided_weight(std::size_t k) { return (k + 1) / 2 + 1; }

Reduction reduce_to_two_local(const PauliSum& target, double eps) {
  check_eps(eps);
  Reduction out;
  const LocalityProfile profile = locality_profile(target);
  const Qubit n_system = target.extent();

  int subdivision_levels = 0;
  for (std::size_t k = profile.k; k > 3; k = subdivided_weight(k)) ++subdivision_levels;
  if (profile.k < 3) {
    AssemblyOptions none;
    none.kind = AssemblyKind::kSubdivision;
    none.gap = 1.0;
    out.final_level = assemble_simulator(target, eps, none);
    out.schedule.final_strength = profile.J;
    return out;
  }
  const int level_count = subdivision_levels + 1;
  const double delta = eps * std::ldexp(1.0, -level_count);

  std::vector<double> gaps;
  PauliSum current = target;
  Qubit n = n_system;
  double J = profile.J;
  for (int i = 0; i < subdivision_levels; ++i) {
    AssemblyOptions options;
    options.kind = AssemblyKind::kSubdivision;
    options.min_weight = 4;
    options.gap = J * J * J / (delta * delta);
    options.n_system = n;
    SimulatorHamiltonian sim = assemble_simulator(current, eps, options);

    LevelRecord rec;
    rec.kind = GadgetKind::kSubdivision;
    rec.strength = J;
    rec.budget = delta;
    rec.gap = *options.gap;
    rec.gadget_count = sim.gadgets.size();
    rec.first_mediator = n;
    rec.end_mediator = sim.total_qubits;
    rec.locality_in = locality_profile(current).k;
    rec.locality_out = locality_profile(sim.assembled).k;
    out.schedule.levels.push_back(rec);

    gaps.push_back(rec.gap);
    J = interaction_strength(sim.assembled, gaps);
    current = sim.assembled;
    n = sim.total_qubits;
    out.levels.push_back(std::move(sim));
  }

  double term_strength = 0.0;
  for (const auto& t : current.terms()) {
    if (t.string.weight() == 3) term_strength = std::max(term_strength, std::abs(t.coefficient));
  }
  const double gap = term_strength * term_strength * term_strength * term_strength /
                     (delta * delta * delta);
  if (!(gap > term_strength)) {
    throw std::domain_error("three-to-two gap does not exceed the gadgetized strength");
  }
  AssemblyOptions options;
  options.kind = AssemblyKind::kThreeToTwo;
  options.gap = gap;
  options.n_system = n;
  SimulatorHamiltonian sim = assemble_simulator(current, eps, options);

  LevelRecord rec;
  rec.kind = GadgetKind::kThreeToTwo;
  rec.strength = J;
  rec.budget = delta;
  rec.gap = gap;
  rec.gadget_count = sim.gadgets.size();
  rec.first_mediator = n;
  rec.end_mediator = sim.total_qubits;
  rec.locality_in = locality_profile(current).k;
  rec.locality_out = locality_profile(sim.assembled).k;
  out.schedule.levels.push_back(rec);
  gaps.push_back(gap);
  out.schedule.final_strength = interaction_strength(sim.assembled, gaps);

  out.levels.push_back(sim);
  out.final_level = std::move(sim);
  out.final_level.n_system = n_system;
  return out;
}

namespace {

std::string mediator_range(Qubit first, Qubit end) {
  if (first == end) return "none";
  return std::to_string(first) + "-" + std::to_string(end - 1);
}

}  // namespace

std::string serialize_compiled(const Reduction& reduction) {
  const auto& sim = reduction.final_level;
  std::string out = "# compiled simulator Hamiltonian\n";
  out += "# system_qubits: " + std::to_string(sim.n_system) + "\n";
  out += "# total_qubits: " + std::to_string(sim.total_qubits) + "\n";
  out += "# levels: " + std::to_string(reduction.schedule.levels.size()) + "\n";
  for (std::size_t i = 0; i < reduction.schedule.levels.size(); ++i) {
    const auto& l = reduction.schedule.levels[i];
    out += "# level " + std::to_string(i) + ": kind=" + to_string(l.kind) +
           " J=" + format_double(l.strength) + " delta=" + format_double(l.budget) +
           " gap=" + format_double(l.gap) +
           " gadgets=" + std::to_string(l.gadget_count) +
           " mediators=" + mediator_range(l.first_mediator, l.end_mediator) + "\n";
  }
  out += "# final_strength: " + format_double(reduction.schedule.final_strength) + "\n";
  out += "# identity_offset: " + format_double(sim.assembled.identity()) + "\n";
  return out + serialize(sim.assembled);
}

std::string serialize_compiled(const SimulatorHamiltonian& sim) {
  std::string out = "# compiled simulator Hamiltonian\n";
  out += "# system_qubits: " + std::to_string(sim.n_system) + "\n";
  out += "# total_qubits: " + std::to_string(sim.total_qubits) + "\n";
  out += "# levels: 1\n";
  out += "# mediators: " + mediator_range(sim.n_system, sim.total_qubits) + "\n";
  for (const auto& g : sim.gadgets) {
    out += "# gadget " + std::to_string(g.mediator) + ": kind=" + to_string(g.kind) +
           " J=" + format_double(g.source.strength) + " gap=" + format_double(g.gap) +
           " source=" + g.source.source.string.to_string() + "\n";
  }
  out += "# identity_offset: " + format_double(sim.assembled.identity()) + "\n";
  return out + serialize(sim.assembled);
}

}  // namespace gadgets
