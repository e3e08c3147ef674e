#include "gadgets/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "gadgets/schrieffer_wolff.hpp"

namespace gadgets {

KindChoice kind_from_string(const std::string& s) {
  if (s == "subdivision") return KindChoice::kSubdivision;
  if (s == "three-to-two") return KindChoice::kThreeToTwo;
  if (s == "auto") return KindChoice::kAuto;
  if (s == "reduce") return KindChoice::kReduce;
  throw std::invalid_argument("unknown gadget kind '" + s + "'");
}

std::string to_string(KindChoice kind) {
  switch (kind) {
    case KindChoice::kSubdivision: return "subdivision";
    case KindChoice::kThreeToTwo: return "three-to-two";
    case KindChoice::kAuto: return "auto";
    case KindChoice::kReduce: return "reduce";
  }
  return "?";
}

void RunConfig::validate() const {
  const bool eps_used = command != Command::kEnergy && command != Command::kBounds &&
                        !(command == Command::kSweep && axis == SweepAxis::kEps);
  if (eps_used && !(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("eps must lie in (0, 1), got " + format_double(eps));
  }
  if (command == Command::kSweep) {
    if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
    const bool up = values.size() < 2 || values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
        throw std::invalid_argument("sweep values must be strictly monotone");
      }
    }
    for (double v : values) {
      if (axis == SweepAxis::kEps && !(v > 0.0 && v < 1.0)) {
        throw std::invalid_argument("eps sweep value outside (0, 1)");
      }
      if (axis == SweepAxis::kDelta && !(v > 0.0 && std::isfinite(v))) {
        throw std::invalid_argument("gap sweep value must be positive");
      }
    }
  }
  if (command == Command::kBounds && trials < 1) {
    throw std::invalid_argument("bounds needs at least one trial");
  }
}

PauliSum parse_hamiltonian(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_pauli_sum(text.str());
}

Compiled compile(const PauliSum& target, double eps, KindChoice kind,
                 std::optional<double> gap) {
  Compiled out;
  if (kind == KindChoice::kReduce) {
    if (gap) throw std::invalid_argument("reduce derives its own gaps");
    out.reduction = reduce_to_two_local(target, eps);
    out.sim = out.reduction->final_level;
    return out;
  }
  AssemblyOptions options;
  options.kind = kind == KindChoice::kSubdivision  ? AssemblyKind::kSubdivision
                 : kind == KindChoice::kThreeToTwo ? AssemblyKind::kThreeToTwo
                                                   : AssemblyKind::kAuto;
  options.gap = gap;
  out.sim = assemble_simulator(target, eps, options);
  return out;
}

namespace {

std::vector<const GadgetInstance*> all_gadgets(const Compiled& c) {
  std::vector<const GadgetInstance*> out;
  if (c.reduction) {
    for (const auto& level : c.reduction->levels) {
      for (const auto& g : level.gadgets) out.push_back(&g);
    }
  } else {
    for (const auto& g : c.sim.gadgets) out.push_back(&g);
  }
  return out;
}

}  // namespace

ScalingRecord measure(const PauliSum& target, const Compiled& compiled, double eps,
                      const SpectralLimits& limits, bool timing) {
  const auto start = std::chrono::steady_clock::now();
  const SimulatorHamiltonian& sim = compiled.sim;
  ScalingRecord r;
  r.n_system = std::max<int>(1, static_cast<int>(sim.n_system));
  r.n_total = std::max<int>(r.n_system, static_cast<int>(sim.total_qubits));
  r.eps = eps;
  r.J = locality_profile(target).J;
  r.budget = eps * r.J * r.n_system;

  bool any_sub = false, any_three = false;
  for (const GadgetInstance* g : all_gadgets(compiled)) {
    r.delta = std::max(r.delta, g->gap);
    (g->kind == GadgetKind::kSubdivision ? any_sub : any_three) = true;
  }
  r.bound_exponent_context = any_three ? -1.0 / 3.0 : any_sub ? -0.5 : 0.0;

  r.lambda_target = ground_energy(target, r.n_system, limits).energy;
  r.lambda_simulator = ground_energy(sim.assembled, r.n_total, limits).energy;
  r.abs_error = std::abs(r.lambda_target - r.lambda_simulator);

  if (r.n_total <= limits.dense_eig_qubits) {
    const Eigen::VectorXd lt =
        hermitian_eigenvalues(to_matrix(target, r.n_system, limits).matrix);
    const Eigen::VectorXd ls =
        hermitian_eigenvalues(to_matrix(sim.assembled, r.n_total, limits).matrix);
    r.spectral_error = (lt - ls.head(lt.size())).cwiseAbs().maxCoeff();
  } else {
    r.spectral_error = std::numeric_limits<double>::quiet_NaN();
  }
  if (timing) {
    r.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::string csv_header() {
  return "n_system,n_total,eps,delta,J,lambda_target,lambda_simulator,abs_error,"
         "budget,bound_exponent_context,wall_time_seconds,spectral_error";
}

std::string csv_row(const ScalingRecord& r) {
  std::string out = std::to_string(r.n_system) + "," + std::to_string(r.n_total);
  for (double v : {r.eps, r.delta, r.J, r.lambda_target, r.lambda_simulator, r.abs_error,
                   r.budget, r.bound_exponent_context, r.wall_time_seconds,
                   r.spectral_error}) {
    out += "," + format_double(v);
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error("write to '" + tmp + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename into '" + path + "': " + ec.message());
  }
}

void write_csv(const std::string& path, const std::vector<ScalingRecord>& records) {
  std::string text = csv_header() + "\n";
  for (const auto& r : records) text += csv_row(r) + "\n";
  write_file_atomic(path, text);
}

namespace {

double parse_field(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') {
    throw std::runtime_error("line " + std::to_string(line) + ": bad field '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<ScalingRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != csv_header()) {
    throw std::runtime_error("'" + path + "' lacks the record header");
  }
  std::vector<ScalingRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 12) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected 12 fields");
    }
    ScalingRecord r;
    r.n_system = static_cast<int>(parse_field(f[0], line_no));
    r.n_total = static_cast<int>(parse_field(f[1], line_no));
    double* fields[] = {&r.eps, &r.delta, &r.J, &r.lambda_target, &r.lambda_simulator,
                        &r.abs_error, &r.budget, &r.bound_exponent_context,
                        &r.wall_time_seconds, &r.spectral_error};
    for (std::size_t i = 0; i < 10; ++i) *fields[i] = parse_field(f[i + 2], line_no);
    if (std::abs(std::abs(r.lambda_target - r.lambda_simulator) - r.abs_error) > 1e-12) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": abs_error disagrees with the energies");
    }
    out.push_back(r);
  }
  return out;
}

ScalingRecord run_verify(const RunConfig& config) {
  config.validate();
  const PauliSum target = parse_hamiltonian(config.input_path);
  const Compiled compiled = compile(target, config.eps, config.kind);
  return measure(target, compiled, config.eps, config.limits, config.timing);
}

std::optional<double> loglog_slope(const std::vector<double>& x,
                                   const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(x.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (n * sxy - sx * sy) / denom;
}

SweepResult run_sweep(const RunConfig& config) {
  config.validate();
  if (config.axis == SweepAxis::kDelta && config.kind == KindChoice::kReduce) {
    throw std::invalid_argument("a gap sweep needs a single-level gadget kind");
  }
  const PauliSum target = parse_hamiltonian(config.input_path);
  SweepResult out;
  for (double value : config.values) {
    try {
      const bool by_gap = config.axis == SweepAxis::kDelta;
      const double eps = by_gap ? 0.5 : value;
      const Compiled compiled =
          compile(target, eps, config.kind, by_gap ? std::optional<double>(value) : std::nullopt);
      double record_eps = eps;
      if (by_gap) {
        record_eps = 0.0;
        for (const auto& g : compiled.sim.gadgets) record_eps = std::max(record_eps, g.precision());
      }
      out.records.push_back(measure(target, compiled, record_eps, config.limits, config.timing));
    } catch (const std::exception& e) {
      out.failures.push_back("point " + format_double(value) + ": " + e.what());
    }
  }
  std::vector<double> x, ground, spectral;
  for (const auto& r : out.records) {
    x.push_back(r.delta);
    ground.push_back(r.abs_error);
    spectral.push_back(r.spectral_error);
  }
  out.ground_slope = loglog_slope(x, ground);
  out.spectral_slope = loglog_slope(x, spectral);
  if (!config.output_path.empty()) write_csv(config.output_path, out.records);
  return out;
}

GadgetInstance compact_gadget(const GadgetInstance& g) {
  std::set<Qubit> support;
  for (const auto& f : g.source.factors) {
    for (Qubit q : f.support()) support.insert(q);
  }
  std::map<Qubit, Qubit> relabel;
  for (Qubit q : support) relabel.emplace(q, static_cast<Qubit>(relabel.size()));
  const auto mediator = static_cast<Qubit>(relabel.size());
  FactorizedInteraction f = g.source;
  for (auto& factor : f.factors) factor = embed(factor, relabel);
  return g.kind == GadgetKind::kSubdivision
             ? subdivision_gadget_with_gap(f, g.gap, mediator)
             : three_to_two_gadget_with_gap(f, g.gap, mediator);
}

SwcheckReport run_swcheck(const RunConfig& config) {
  config.validate();
  const PauliSum target = parse_hamiltonian(config.input_path);
  const KindChoice kind = config.kind == KindChoice::kReduce ? KindChoice::kAuto : config.kind;
  const SimulatorHamiltonian sim = compile(target, config.eps, kind).sim;

  SwcheckReport report;
  std::vector<SWGenerator> generators;
  for (const auto& g : sim.gadgets) {
    const GadgetInstance c = compact_gadget(g);
    const SWGenerator closed = sw_gadget_closed_form(c);
    const SWGenerator pert = sw_gadget_perturbative(c);

    GadgetCheck check;
    check.mediator = g.mediator;
    check.kind = g.kind;
    double scale = 0.0;
    for (const auto& t : closed.is.terms()) scale = std::max(scale, std::abs(t.coefficient));
    check.generator_difference =
        max_abs_difference(closed.is, pert.is) / std::max(scale, 1e-300);
    check.generators_equal = check.generator_difference <= kGeneratorTolerance;

    const EffectiveHamiltonian eh = effective_hamiltonian(c.hamiltonian(), closed, config.limits);
    check.offdiag_residual = eh.offdiag_residual;
    check.heff_error =
        hermitian_norm(eh.h_eff.matrix - restrict_to_p(c.target(), closed.split, config.limits));
    check.second_order_deviation = eh.second_order_deviation;
    check.truncation_bound = eh.truncation_error_bound;
    check.truncation_ok = eh.second_order_deviation <= eh.truncation_error_bound + 1e-9;

    const std::string tag = "gadget " + std::to_string(g.mediator) + " (" + to_string(g.kind) + ")";
    if (!check.generators_equal) {
      report.failures.push_back(tag + ": closed-form and perturbative generators differ by " +
                                format_double(check.generator_difference));
    }
    if (!check.truncation_ok) {
      report.failures.push_back(tag + ": second-order truncation exceeds its bound");
    }
    if (!std::isfinite(check.offdiag_residual) || !std::isfinite(check.heff_error)) {
      report.failures.push_back(tag + ": non-finite block residual");
    }
    report.gadgets.push_back(check);
    generators.push_back(sw_gadget_closed_form(g));
  }

  const double n = std::max<double>(1.0, sim.n_system);
  report.budget = config.eps * n * locality_profile(target).J;
  if (!generators.empty()) {
    report.cross = cross_gadget_report(sim, generators);
    if (report.cross.forced_zero_violations > 0) {
      report.failures.push_back("cross-gadget terms forced to zero are not zero");
    }
    if (static_cast<int>(sim.total_qubits) <= config.limits.dense_eig_qubits) {
      const SWGenerator s = combine(generators, static_cast<int>(sim.total_qubits));
      const EffectiveHamiltonian eh = effective_hamiltonian(sim.assembled, s, config.limits);
      report.global_residual = hermitian_norm(
          eh.h_eff.matrix - restrict_to_p(sim.target(), s.split, config.limits));
      if (!(*report.global_residual <= report.budget)) {
        report.failures.push_back("global effective-Hamiltonian residual " +
                                  format_double(*report.global_residual) +
                                  " exceeds eps n J = " + format_double(report.budget));
      }
    }
  }
  return report;
}

bool BoundsSummary::passed() const {
  if (lemma1.violations > 0) return false;
  return std::all_of(lemma2.begin(), lemma2.end(),
                     [](const ScalingReport& r) { return r.bounded; });
}

BoundsSummary run_bounds(const RunConfig& config) {
  config.validate();
  BoundsSummary out;
  out.lemma1 = lemma1_suite(config.trials, config.seed);
  for (int k = 1; k <= 3; ++k) {
    out.lemma2.push_back(lemma2_scaling([](int n) { return chain_instance(n); },
                                        {4, 6, 8, 10}, k, config.limits));
  }
  if (!config.output_path.empty()) {
    std::string text = "trial,k,t,r_k,bound,satisfied,slack\n";
    const std::size_t per_trial = 12;
    for (std::size_t i = 0; i < out.lemma1.reports.size(); ++i) {
      const auto& r = out.lemma1.reports[i];
      text += std::to_string(i / per_trial) + "," + std::to_string(r.k) + "," +
              format_double(r.t) + "," + format_double(r.r_k) + "," +
              format_double(r.bound) + "," + (r.satisfied ? "1" : "0") + "," +
              format_double(r.slack) + "\n";
    }
    write_file_atomic(config.output_path, text);
  }
  return out;
}

}  // namespace gadgets
