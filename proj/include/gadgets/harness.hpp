#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gadgets/bounds.hpp"
#include "gadgets/gadgets.hpp"
#include "gadgets/pauli.hpp"
#include "gadgets/spectral.hpp"

namespace gadgets {

enum class Command { kCompile, kEnergy, kVerify, kSweep, kSwcheck, kBounds };
/// reduce: full reduction to 2-local; the others assemble a single level.
enum class KindChoice { kSubdivision, kThreeToTwo, kAuto, kReduce };
enum class SweepAxis { kEps, kDelta };

KindChoice kind_from_string(const std::string& s);
std::string to_string(KindChoice kind);

struct RunConfig {
  Command command = Command::kVerify;
  std::string input_path;
  double eps = 0.1;
  KindChoice kind = KindChoice::kReduce;
  SweepAxis axis = SweepAxis::kDelta;
  std::vector<double> values;
  std::uint64_t seed = 0;
  int trials = 100;
  std::string output_path;
  SpectralLimits limits;
  bool timing = true;  ///< false writes 0 wall time so CSVs are byte-stable

  /// Throws std::invalid_argument on eps outside (0, 1) or an empty or
  /// non-monotone sweep list.
  void validate() const;
};

struct ScalingRecord {
  int n_system = 0;
  int n_total = 0;
  double eps = 0.0;
  double delta = 0.0;  ///< largest mediator gap, 0 without gadgets
  double J = 0.0;
  double lambda_target = 0.0;
  double lambda_simulator = 0.0;
  double abs_error = 0.0;
  double budget = 0.0;  ///< eps J n_system
  double bound_exponent_context = 0.0;  ///< -1/2 subdivision, -1/3 three-to-two
  double wall_time_seconds = 0.0;
  /// max_j |lambda_j(H) - lambda_j(H_target)| over the lowest 2^n_system
  /// levels; NaN when the simulator is above the dense cap.
  double spectral_error = 0.0;
};

/// Reads and parses a Hamiltonian file. ParseError carries the line number;
/// std::runtime_error if the file cannot be read.
PauliSum parse_hamiltonian(const std::string& path);

struct Compiled {
  SimulatorHamiltonian sim;
  std::optional<Reduction> reduction;
};

/// gap overrides the eps-derived gap (single-level kinds only).
Compiled compile(const PauliSum& target, double eps, KindChoice kind,
                 std::optional<double> gap = std::nullopt);

/// Ground energies of target and compiled simulator, one record.
ScalingRecord measure(const PauliSum& target, const Compiled& compiled, double eps,
                      const SpectralLimits& limits, bool timing);

std::string csv_header();
std::string csv_row(const ScalingRecord& r);
/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& contents);
void write_csv(const std::string& path, const std::vector<ScalingRecord>& records);
/// Throws std::runtime_error on a malformed file or an abs_error column that
/// disagrees with |lambda_target - lambda_simulator| by more than 1e-12.
std::vector<ScalingRecord> read_csv(const std::string& path);

ScalingRecord run_verify(const RunConfig& config);

struct SweepResult {
  std::vector<ScalingRecord> records;  ///< successful points in axis order
  std::vector<std::string> failures;   ///< one line per failed point
  std::optional<double> ground_slope;    ///< log-log slope of abs_error vs delta
  std::optional<double> spectral_slope;  ///< same for spectral_error
};

/// Least-squares slope of log(y) against log(x); empty with fewer than two
/// points or any non-positive value.
std::optional<double> loglog_slope(const std::vector<double>& x,
                                   const std::vector<double>& y);

/// One point per axis value; writes the CSV if output_path is set.
SweepResult run_sweep(const RunConfig& config);

struct GadgetCheck {
  Qubit mediator = 0;
  GadgetKind kind = GadgetKind::kSubdivision;
  double generator_difference = 0.0;  ///< closed form vs perturbative, relative
  bool generators_equal = false;
  double offdiag_residual = 0.0;  ///< ||P e^S H e^-S Q||
  double heff_error = 0.0;        ///< ||P e^S H e^-S P - H_target||
  double second_order_deviation = 0.0;
  double truncation_bound = 0.0;
  bool truncation_ok = false;
};

struct SwcheckReport {
  std::vector<GadgetCheck> gadgets;
  std::optional<double> global_residual;  ///< empty above the dense cap
  double budget = 0.0;                    ///< eps n J
  CrossGadgetReport cross;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Relative tolerance for generator identities.
constexpr double kGeneratorTolerance = 1e-12;

SwcheckReport run_swcheck(const RunConfig& config);

struct BoundsSummary {
  Lemma1Suite lemma1;
  std::vector<ScalingReport> lemma2;  ///< k = 1, 2, 3 on the chain family
  bool passed() const;
};

/// Remainder-bound suite with config.trials and config.seed, commutator growth
/// on the chain family;
/// remainder CSV to output_path if set.
BoundsSummary run_bounds(const RunConfig& config);

/// Copy of g on qubits 0..s-1 (system qubits in order, mediator last).
GadgetInstance compact_gadget(const GadgetInstance& g);

}  // namespace gadgets
