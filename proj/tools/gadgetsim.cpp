// gadgetsim: compile k-local Hamiltonians to 2-local gadget simulators and
// check the perturbative bounds numerically.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gadgets/harness.hpp"

using namespace gadgets;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

void print_record(const ScalingRecord& r) {
  std::printf("n_system=%d n_total=%d eps=%.6g delta=%.6g J=%.6g\n", r.n_system,
              r.n_total, r.eps, r.delta, r.J);
  std::printf("lambda_target=%.12g lambda_simulator=%.12g\n", r.lambda_target,
              r.lambda_simulator);
  std::printf("abs_error=%.6g budget=%.6g spectral_error=%.6g\n", r.abs_error,
              r.budget, r.spectral_error);
}

std::string slope_text(const std::optional<double>& s) {
  return s ? format_double(*s) : std::string("absent");
}

int run(RunConfig& cfg, const std::string& kind) {
  cfg.kind = kind_from_string(kind);
  switch (cfg.command) {
    case Command::kCompile: {
      cfg.validate();
      const PauliSum target = parse_hamiltonian(cfg.input_path);
      const Compiled c = compile(target, cfg.eps, cfg.kind);
      const std::string text =
          c.reduction ? serialize_compiled(*c.reduction) : serialize_compiled(c.sim);
      if (cfg.output_path.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(cfg.output_path, text);
      }
      return 0;
    }
    case Command::kEnergy: {
      const PauliSum h = parse_hamiltonian(cfg.input_path);
      const int n = std::max<int>(1, static_cast<int>(h.extent()));
      const GroundStateResult g = ground_energy(h, n, cfg.limits);
      std::printf("%s\n", format_double(g.energy).c_str());
      return 0;
    }
    case Command::kVerify: {
      const ScalingRecord r = run_verify(cfg);
      print_record(r);
      if (!cfg.output_path.empty()) write_csv(cfg.output_path, {r});
      if (!(r.abs_error <= r.budget)) {
        std::fprintf(stderr, "FAIL: abs_error %.6g exceeds eps J n = %.6g\n", r.abs_error,
                     r.budget);
        return kExitFailed;
      }
      std::printf("PASS\n");
      return 0;
    }
    case Command::kSweep: {
      const SweepResult s = run_sweep(cfg);
      for (const auto& r : s.records) std::printf("%s\n", csv_row(r).c_str());
      std::printf("ground_slope=%s spectral_slope=%s\n", slope_text(s.ground_slope).c_str(),
                  slope_text(s.spectral_slope).c_str());
      for (const auto& f : s.failures) std::fprintf(stderr, "FAIL: %s\n", f.c_str());
      return s.failures.empty() ? 0 : kExitFailed;
    }
    case Command::kSwcheck: {
      const SwcheckReport rep = run_swcheck(cfg);
      for (const auto& g : rep.gadgets) {
        std::printf(
            "gadget %u %s: generator_diff=%.3g offdiag=%.6g heff_error=%.6g "
            "second_order=%.6g bound=%.6g\n",
            g.mediator, to_string(g.kind).c_str(), g.generator_difference,
            g.offdiag_residual, g.heff_error, g.second_order_deviation, g.truncation_bound);
      }
      for (const auto& p : rep.cross.pairs) {
        std::printf("cross S^%u on V_extra^%u: %.6g\n", p.v, p.u, p.norm);
      }
      if (!rep.gadgets.empty()) {
        std::printf("cross total=%.6g budget=%.6g forced_zero_violations=%zu\n",
                    rep.cross.total, rep.cross.budget, rep.cross.forced_zero_violations);
      }
      if (rep.global_residual) {
        std::printf("global residual=%.6g budget=%.6g\n", *rep.global_residual, rep.budget);
      } else if (!rep.gadgets.empty()) {
        std::printf("global residual skipped (register above the dense cap)\n");
      }
      for (const auto& f : rep.failures) std::fprintf(stderr, "FAIL: %s\n", f.c_str());
      if (rep.passed()) std::printf("PASS\n");
      return rep.passed() ? 0 : kExitFailed;
    }
    case Command::kBounds: {
      const BoundsSummary b = run_bounds(cfg);
      std::printf("remainder: %zu checks, %zu violations\n", b.lemma1.reports.size(),
                  b.lemma1.violations);
      for (const auto& rep : b.lemma2) {
        std::printf("growth k=%d:", rep.k);
        for (const auto& s : rep.samples) std::printf(" n=%d ratio=%.6g", s.n, s.ratio);
        std::printf(" slope=%.6g %s\n", rep.fitted_slope, rep.bounded ? "bounded" : "UNBOUNDED");
      }
      if (!b.passed()) std::fprintf(stderr, "FAIL: bounds suite\n");
      return b.passed() ? 0 : kExitFailed;
    }
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbation-gadget compiler and bounds lab"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string kind = "reduce";
  std::string axis = "delta";
  bool no_timing = false;
  app.add_option("--dense-cap", cfg.limits.dense_eig_qubits, "largest dense eigenproblem (qubits)");
  app.add_option("--matrix-cap", cfg.limits.matrix_qubits, "largest materialized matrix (qubits)");
  app.add_option("--iterative-cap", cfg.limits.iterative_qubits, "largest Lanczos register (qubits)");
  app.add_option("--max-iterations", cfg.limits.max_iterations, "Lanczos iteration budget");
  app.add_flag("--no-timing", no_timing, "write 0 wall time (byte-stable CSV)");

  auto* compile_cmd = app.add_subcommand("compile", "compile to a 2-local simulator");
  auto* energy_cmd = app.add_subcommand("energy", "ground energy of a Hamiltonian");
  auto* verify_cmd = app.add_subcommand("verify", "compare target and simulator ground energies");
  auto* sweep_cmd = app.add_subcommand("sweep", "error decay over eps or gap");
  auto* swcheck_cmd = app.add_subcommand("swcheck", "Schrieffer-Wolff generator checks");
  auto* bounds_cmd = app.add_subcommand("bounds", "remainder-bound and commutator-growth suites");

  for (auto* cmd : {compile_cmd, energy_cmd, verify_cmd, sweep_cmd, swcheck_cmd}) {
    cmd->add_option("--input", cfg.input_path, "Hamiltonian file")->required();
  }
  for (auto* cmd : {compile_cmd, verify_cmd, swcheck_cmd}) {
    cmd->add_option("--eps", cfg.eps, "precision in (0, 1)")->required();
  }
  compile_cmd->add_option("--kind", kind, "subdivision | three-to-two | auto | reduce");
  verify_cmd->add_option("--kind", kind, "subdivision | three-to-two | auto | reduce");
  sweep_cmd->add_option("--kind", kind, "subdivision | three-to-two | auto | reduce");
  swcheck_cmd->add_option("--kind", kind, "subdivision | three-to-two | auto");
  sweep_cmd->add_option("--axis", axis, "delta | eps")
      ->check(CLI::IsMember({"delta", "eps"}));
  sweep_cmd->add_option("--values", cfg.values, "comma-separated axis values")
      ->delimiter(',')
      ->required();
  bounds_cmd->add_option("--trials", cfg.trials, "random (S, H) pairs");
  bounds_cmd->add_option("--seed", cfg.seed, "generator seed");
  for (auto* cmd : {compile_cmd, verify_cmd, sweep_cmd, bounds_cmd}) {
    cmd->add_option("--output", cfg.output_path, "output file");
  }

  CLI11_PARSE(app, argc, argv);
  cfg.timing = !no_timing;
  cfg.axis = axis == "eps" ? SweepAxis::kEps : SweepAxis::kDelta;
  if (*compile_cmd) cfg.command = Command::kCompile;
  if (*energy_cmd) cfg.command = Command::kEnergy;
  if (*verify_cmd) cfg.command = Command::kVerify;
  if (*sweep_cmd) cfg.command = Command::kSweep;
  if (*swcheck_cmd) cfg.command = Command::kSwcheck;
  if (*bounds_cmd) cfg.command = Command::kBounds;
  if ((*sweep_cmd || *swcheck_cmd) && kind == "reduce" &&
      !sweep_cmd->count("--kind") && !swcheck_cmd->count("--kind")) {
    kind = "auto";
  }

  try {
    return run(cfg, kind);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s: %s\n", cfg.input_path.c_str(), e.what());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
  }
  return kExitError;
}
