#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "gadgets/harness.hpp"

using namespace gadgets;
namespace fs = std::filesystem;

namespace {

std::string data(const std::string& name) { return std::string(TEST_DATA_DIR) + "/" + name; }

/// Fresh scratch directory per test case, removed on scope exit.
struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("gadgets_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string file(const std::string& name, const std::string& contents = "") const {
    const fs::path p = dir / name;
    if (!contents.empty()) std::ofstream(p) << contents;
    return p.string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(GADGETSIM_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig config(Command c, const std::string& input, double eps, KindChoice kind) {
  RunConfig cfg;
  cfg.command = c;
  cfg.input_path = input;
  cfg.eps = eps;
  cfg.kind = kind;
  cfg.timing = false;
  return cfg;
}

}  // namespace

TEST_CASE("parse_hamiltonian reads files") {
  Scratch s;
  CHECK(parse_hamiltonian(data("zzzz.txt")) ==
        PauliSum(1.0, PauliString({{0, Pauli::Z}, {1, Pauli::Z}, {2, Pauli::Z}, {3, Pauli::Z}})));
  CHECK(parse_hamiltonian(s.file("merge.txt", "0.5 Z0 Z1\n0.5 Z0 Z1\n")) ==
        PauliSum(1.0, PauliString({{0, Pauli::Z}, {1, Pauli::Z}})));
  try {
    parse_hamiltonian(s.file("bad.txt", "1.0 Z0 X0\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
  }
  CHECK_THROWS_AS(parse_hamiltonian(s.file("coef.txt", "# c\none Z0\n")), ParseError);
  CHECK_THROWS_AS(parse_hamiltonian((s.dir / "missing.txt").string()), std::runtime_error);
}

TEST_CASE("RunConfig validation") {
  RunConfig cfg;
  cfg.command = Command::kVerify;
  cfg.eps = 0.1;
  CHECK_NOTHROW(cfg.validate());
  for (double bad : {0.0, 1.0, -0.5, 2.0}) {
    cfg.eps = bad;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  }
  cfg.eps = 0.1;
  cfg.command = Command::kSweep;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.values = {1e2, 1e3, 1e3};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.values = {1e4, 1e3, 1e2};
  CHECK_NOTHROW(cfg.validate());
  cfg.values = {1e2, -1.0};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.axis = SweepAxis::kEps;
  cfg.values = {0.2, 1.5};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  CHECK(kind_from_string("three-to-two") == KindChoice::kThreeToTwo);
  CHECK(to_string(KindChoice::kReduce) == "reduce");
  CHECK_THROWS_AS(kind_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("CSV round trip and read-back check") {
  Scratch s;
  ScalingRecord a{4, 7, 0.1, 1600, 1, -1, -0.99776, 0.0, 0.4, -0.5, 0.25, 0.1};
  a.abs_error = std::abs(a.lambda_target - a.lambda_simulator);
  ScalingRecord b = a;
  b.n_system = 8;
  b.spectral_error = std::nan("");
  const std::string path = s.file("out.csv");
  write_csv(path, {a, b});
  const auto back = read_csv(path);
  REQUIRE(back.size() == 2);
  CHECK(csv_row(back[0]) == csv_row(a));
  CHECK(back[0].lambda_simulator == a.lambda_simulator);
  CHECK(back[0].abs_error == a.abs_error);
  CHECK(std::isnan(back[1].spectral_error));
  CHECK(slurp(path).rfind(csv_header() + "\n", 0) == 0);
  // No temporary file left beside the output.
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(s.dir)) ++entries;
  CHECK(entries == 1);

  std::string text = slurp(path);
  const std::string stored = "," + format_double(a.abs_error) + ",";
  REQUIRE(text.find(stored) != std::string::npos);
  const std::string tampered = s.file("tampered.csv", text.replace(text.find(stored), stored.size(), ",0.5,"));
  CHECK_THROWS_AS(read_csv(tampered), std::runtime_error);
  CHECK_THROWS_AS(read_csv(s.file("noheader.csv", "1,2,3\n")), std::runtime_error);
  CHECK_THROWS_AS(read_csv(s.file("short.csv", csv_header() + "\n1,2,3\n")), std::runtime_error);
}

TEST_CASE("run_verify examples") {
  const ScalingRecord zz = run_verify(config(Command::kVerify, data("zz.txt"), 0.3, KindChoice::kReduce));
  CHECK(zz.abs_error == 0.0);
  CHECK(zz.n_total == 2);
  CHECK(zz.delta == 0.0);

  const ScalingRecord zzz = run_verify(config(Command::kVerify, data("zzz.txt"), 0.2, KindChoice::kThreeToTwo));
  CHECK(zzz.n_total == 4);
  CHECK(zzz.abs_error <= 0.2 * 1 * 3);
  CHECK(zzz.budget == doctest::Approx(0.6));
  CHECK(zzz.bound_exponent_context == doctest::Approx(-1.0 / 3));

  const ScalingRecord zzzz = run_verify(config(Command::kVerify, data("zzzz.txt"), 0.1, KindChoice::kReduce));
  CHECK(zzzz.n_total == 7);
  CHECK(zzzz.n_system == 4);
  CHECK(zzzz.abs_error <= 0.1 * 1 * 4);
  CHECK(zzzz.abs_error == std::abs(zzzz.lambda_target - zzzz.lambda_simulator));
  CHECK(zzzz.lambda_target == doctest::Approx(-1.0));
}

TEST_CASE("loglog_slope") {
  CHECK(*loglog_slope({1, 10, 100}, {1, 0.1, 0.01}) == doctest::Approx(-1.0));
  CHECK(*loglog_slope({1e2, 1e4}, {1, 0.1}) == doctest::Approx(-0.5));
  CHECK_FALSE(loglog_slope({1}, {1}).has_value());
  CHECK_FALSE(loglog_slope({1, 10}, {1, 0}).has_value());
}

TEST_CASE("run_sweep examples") {
  Scratch s;
  RunConfig single = config(Command::kSweep, data("zzzz.txt"), 0.1, KindChoice::kSubdivision);
  single.values = {1e3};
  const SweepResult one = run_sweep(single);
  CHECK(one.records.size() == 1);
  CHECK_FALSE(one.ground_slope.has_value());
  CHECK_FALSE(one.spectral_slope.has_value());

  RunConfig sub = single;
  sub.values = {1e2, 1e3, 1e4};
  sub.output_path = s.file("sub.csv");
  const SweepResult r = run_sweep(sub);
  REQUIRE(r.records.size() == 3);
  CHECK(r.failures.empty());
  REQUIRE(r.ground_slope.has_value());
  CHECK(*r.ground_slope <= -0.5 + 0.05);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.records[i].delta == sub.values[i]);
  CHECK(read_csv(sub.output_path).size() == 3);

  // Identical configuration, byte-identical CSV.
  const std::string first = slurp(sub.output_path);
  run_sweep(sub);
  CHECK(slurp(sub.output_path) == first);

  RunConfig three = config(Command::kSweep, data("zzz.txt"), 0.1, KindChoice::kThreeToTwo);
  three.values = {1e2, 1e3, 1e4};
  const SweepResult t = run_sweep(three);
  REQUIRE(t.spectral_slope.has_value());
  CHECK(*t.spectral_slope <= -1.0 / 3 + 0.05);

  // Per-point failures are collected, not fatal.
  RunConfig starved = sub;
  starved.output_path.clear();
  starved.limits.dense_eig_qubits = 1;
  starved.limits.max_iterations = 2;
  const SweepResult f = run_sweep(starved);
  CHECK(f.records.empty());
  CHECK(f.failures.size() == 3);

  RunConfig reduce = single;
  reduce.kind = KindChoice::kReduce;
  CHECK_THROWS_AS(run_sweep(reduce), std::invalid_argument);
}

TEST_CASE("run_swcheck examples") {
  Scratch s;
  const SwcheckReport sub = run_swcheck(config(Command::kSwcheck, data("zzzz.txt"), 0.1, KindChoice::kSubdivision));
  CHECK(sub.passed());
  REQUIRE(sub.gadgets.size() == 1);
  CHECK(sub.gadgets[0].generators_equal);
  CHECK(sub.gadgets[0].truncation_ok);
  REQUIRE(sub.global_residual.has_value());
  CHECK(*sub.global_residual <= sub.budget);

  const SwcheckReport none = run_swcheck(config(Command::kSwcheck, data("zz.txt"), 0.1, KindChoice::kAuto));
  CHECK(none.passed());
  CHECK(none.gadgets.empty());

  const std::string overlap = s.file("overlap.txt", "1.0 Z0 Z1 Z2 Z3\n0.5 X2 X3 X4 X5\n");
  const SwcheckReport two = run_swcheck(config(Command::kSwcheck, overlap, 0.1, KindChoice::kSubdivision));
  CHECK(two.passed());
  CHECK(two.gadgets.size() == 2);
  CHECK(two.cross.pairs.size() == 2);
  CHECK(two.cross.forced_zero_violations == 0);
  REQUIRE(two.global_residual.has_value());
  CHECK(*two.global_residual <= two.budget);
  CHECK(two.budget == doctest::Approx(0.1 * 6 * 1.0));
}

TEST_CASE("run_bounds") {
  Scratch s;
  RunConfig cfg;
  cfg.command = Command::kBounds;
  cfg.trials = 10;
  cfg.seed = 3;
  cfg.output_path = s.file("bounds.csv");
  const BoundsSummary b = run_bounds(cfg);
  CHECK(b.passed());
  CHECK(b.lemma1.reports.size() == 120);
  CHECK(b.lemma2.size() == 3);
  const std::string first = slurp(cfg.output_path);
  CHECK(!first.empty());
  run_bounds(cfg);
  CHECK(slurp(cfg.output_path) == first);
}

TEST_CASE("compile and compact_gadget") {
  const PauliSum target = parse_hamiltonian(data("zzzz.txt"));
  const Compiled c = compile(target, 0.1, KindChoice::kReduce);
  REQUIRE(c.reduction.has_value());
  CHECK(c.sim.total_qubits == 7);
  CHECK(parse_pauli_sum(serialize_compiled(*c.reduction)) == c.sim.assembled);
  CHECK_THROWS_AS(compile(target, 0.1, KindChoice::kReduce, 100.0), std::invalid_argument);

  const Compiled single = compile(target, 0.1, KindChoice::kSubdivision, 400.0);
  REQUIRE(single.sim.gadgets.size() == 1);
  CHECK(single.sim.gadgets[0].gap == 400.0);
  const GadgetInstance compact = compact_gadget(single.sim.gadgets[0]);
  CHECK(compact.mediator == 4);
  CHECK(compact.hamiltonian().extent() == 5);
}

TEST_CASE("command-line exit codes") {
  Scratch s;
  CHECK(cli("verify --input " + data("zzzz.txt") + " --eps 0.1") == 0);
  CHECK(cli("verify --input " + s.file("bad.txt", "1.0 Z0 X0\n") + " --eps 0.1") == 2);
  CHECK(cli("verify --input " + (s.dir / "missing.txt").string() + " --eps 0.1") == 2);
  CHECK(cli("verify --input " + data("zzzz.txt") + " --eps 1.5") == 2);
  CHECK(cli("swcheck --input " + data("zzzz.txt") + " --eps 0.1") == 0);
  CHECK(cli("--dense-cap 1 --max-iterations 2 sweep --input " + data("zzzz.txt") +
            " --kind subdivision --values 1e2,1e3") == 1);
  CHECK(cli("bounds --trials 5 --seed 1") == 0);
  CHECK(cli("energy --input " + data("zz.txt")) == 0);

  const std::string out = s.file("compiled.txt");
  CHECK(cli("compile --input " + data("zzzz.txt") + " --eps 0.1 --output " + out) == 0);
  CHECK(parse_pauli_sum(slurp(out)) == compile(parse_hamiltonian(data("zzzz.txt")), 0.1, KindChoice::kReduce).sim.assembled);

  const std::string a = s.file("a.csv"), b = s.file("b.csv");
  const std::string sweep = " sweep --input " + data("zzzz.txt") + " --kind subdivision --values 1e2,1e3 --output ";
  CHECK(cli("--no-timing" + sweep + a) == 0);
  CHECK(cli("--no-timing" + sweep + b) == 0);
  CHECK(slurp(a) == slurp(b));
}
