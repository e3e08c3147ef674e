#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gadgets/pauli.hpp"

namespace gadgets {

enum class GadgetKind { kSubdivision, kThreeToTwo };

std::string to_string(GadgetKind kind);

/// One gadgetizable interaction J * A B or J * A B C, J > 0, factors on
/// pairwise disjoint supports with norm at most one.
struct FactorizedInteraction {
  double strength = 0.0;
  std::vector<PauliSum> factors;
  PauliTerm source;

  /// J times the product of the factors.
  PauliSum target() const;
};

/// Splits a Pauli term of weight >= 3. Two-way: A takes the lowest
/// ceil(k/2) support qubits. Three-way (weight exactly 3): one letter per
/// factor in qubit order. A negative coefficient is absorbed into A.
FactorizedInteraction factorize_term(const PauliTerm& term, bool three_way = false);

/// One mediator qubit u and its perturbation pieces.
struct GadgetInstance {
  GadgetKind kind = GadgetKind::kSubdivision;
  Qubit mediator = 0;
  double gap = 0.0;
  PauliSum h0;         ///< gap * |1><1|_u = (gap/2)(I - Z_u)
  PauliSum v_diag;     ///< commutes with Z_u (three-to-two only)
  PauliSum v_offdiag;  ///< anticommutes with Z_u
  PauliSum v_extra;    ///< cancels the unwanted effective terms
  double x = 0.0;      ///< (J/gap)^(1/3), three-to-two only
  FactorizedInteraction source;

  PauliSum perturbation() const { return v_diag + v_offdiag + v_extra; }
  PauliSum hamiltonian() const { return h0 + perturbation(); }
  /// The interaction this gadget simulates.
  PauliSum target() const { return source.target(); }
  /// Dimensionless precision: sqrt(J/gap) for subdivision, x for three-to-two.
  double precision() const;
};

/// Gap = J eps^-2. Throws std::invalid_argument for a three-factor input or
/// eps outside (0, 1).
GadgetInstance subdivision_gadget(const FactorizedInteraction& f, double eps,
                                  Qubit mediator);
/// Gap = J eps^-3. Throws std::invalid_argument unless f has three
/// single-qubit factors on distinct qubits and eps is in (0, 1).
GadgetInstance three_to_two_gadget(const FactorizedInteraction& f, double eps,
                                   Qubit mediator);
/// Same constructions with an explicit gap (> 0).
GadgetInstance subdivision_gadget_with_gap(const FactorizedInteraction& f,
                                           double gap, Qubit mediator);
GadgetInstance three_to_two_gadget_with_gap(const FactorizedInteraction& f,
                                            double gap, Qubit mediator);

struct SimulatorHamiltonian {
  std::vector<GadgetInstance> gadgets;  ///< in mediator allocation order
  PauliSum h_else;
  Qubit n_system = 0;  ///< qubits of the Hamiltonian this level simulates
  Qubit total_qubits = 0;
  PauliSum assembled;  ///< sum of gadget Hamiltonians plus h_else

  /// Gadget index -> mediator qubit.
  std::vector<Qubit> mediator_registry() const;
  PauliSum target() const;  ///< sum of gadget targets plus h_else
};

enum class AssemblyKind { kSubdivision, kThreeToTwo, kAuto };

struct AssemblyOptions {
  AssemblyKind kind = AssemblyKind::kAuto;
  /// One gap for every gadget. Unset: gap from the largest |coefficient|
  /// among gadgetized terms, J eps^-2 (subdivision) or J eps^-3 (three-to-two).
  std::optional<double> gap;
  /// Terms lighter than this stay in h_else (subdivision only).
  std::size_t min_weight = 3;
  /// Register size of the input; defaults to target.extent().
  std::optional<Qubit> n_system;
};

/// One gadget per gadgetizable term, mediators numbered from n_system in
/// normalized term order. kAuto: weight >= 4 subdivision, weight 3
/// three-to-two. Throws std::invalid_argument for a term that is neither
/// 2-local nor gadgetizable by the chosen kind, or eps outside (0, 1).
SimulatorHamiltonian assemble_simulator(const PauliSum& target, double eps,
                                        const AssemblyOptions& options = {});

struct LevelRecord {
  GadgetKind kind = GadgetKind::kSubdivision;
  double strength = 0.0;  ///< J_i
  double budget = 0.0;    ///< delta_i
  double gap = 0.0;       ///< Delta_i
  std::size_t gadget_count = 0;
  Qubit first_mediator = 0;
  Qubit end_mediator = 0;  ///< one past the last mediator
  std::size_t locality_in = 0;
  std::size_t locality_out = 0;
};

struct LevelSchedule {
  std::vector<LevelRecord> levels;
  double final_strength = 0.0;
};

struct Reduction {
  SimulatorHamiltonian final_level;
  LevelSchedule schedule;
  std::vector<SimulatorHamiltonian> levels;  ///< every level in order
};

/// Largest local interaction norm of an assembled level, counting every
/// mediator penalty gap * |1><1| seen so far at its full norm `gap`.
double interaction_strength(const PauliSum& h, std::span<const double> gaps);

/// Weight after one subdivision of a weight-k term: ceil(k/2) + 1.
std::size_t subdivided_weight(std::size_t k);

/// Subdivision levels until every term is at most 3-local, then one
/// three-to-two level. delta = eps * 2^-levels. Subdivision level i uses
/// gap J_i^3 / delta^2 and J_{i+1} is the realized strength of level i+1
/// (its largest mediator gap). The three-to-two level uses gap
/// J_g^4 / delta^3 with J_g the largest gadgetized |coefficient|.
Reduction reduce_to_two_local(const PauliSum& target, double eps);

/// Hamiltonian text format with comment headers describing the schedule.
std::string serialize_compiled(const Reduction& reduction);
std::string serialize_compiled(const SimulatorHamiltonian& sim);

}  // namespace gadgets
