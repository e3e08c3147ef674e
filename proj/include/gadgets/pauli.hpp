#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gadgets {

using Qubit = std::uint32_t;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Power of i, i.e. one of {+1, +i, -1, -i}.
struct Phase {
  std::uint8_t quarter_turns = 0;

  std::complex<double> value() const;
  Phase operator*(Phase other) const {
    return Phase{static_cast<std::uint8_t>((quarter_turns + other.quarter_turns) & 3u)};
  }
  bool operator==(const Phase&) const = default;
};

/// Tensor product of single-qubit Paulis. Qubits absent from the letter list
/// carry the identity. Letters are kept sorted by qubit and never hold Pauli::I.
class PauliString {
 public:
  using Letter = std::pair<Qubit, Pauli>;

  PauliString() = default;
  /// Throws std::invalid_argument on a repeated qubit.
  explicit PauliString(std::vector<Letter> letters);

  static PauliString single(Qubit q, Pauli p);

  std::span<const Letter> letters() const { return letters_; }
  std::vector<Qubit> support() const;
  std::size_t weight() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }
  Pauli at(Qubit q) const;
  /// Largest qubit index plus one; zero for the identity.
  Qubit extent() const { return letters_.empty() ? 0 : letters_.back().first + 1; }

  bool commutes_with(const PauliString& other) const;

  bool operator==(const PauliString&) const = default;
  /// Lexicographic by support, then by letters.
  bool operator<(const PauliString& other) const;

  std::string to_string() const;

 private:
  std::vector<Letter> letters_;
};

struct PauliProduct {
  Phase phase;
  PauliString product;
};

/// a * b = phase * product.
PauliProduct multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  double coefficient = 0.0;
  PauliString string;
  bool operator==(const PauliTerm&) const = default;
};

/// Hermitian operator written as a real combination of Pauli strings plus a
/// separately tracked multiple of the identity.
///
/// Always normalized: one term per distinct string, sorted, no zero
/// coefficients. Anti-Hermitian operators K are carried as the Hermitian sum
/// iK by their owners (see SWGenerator); PauliSum itself has no flag.
class PauliSum {
 public:
  PauliSum() = default;
  explicit PauliSum(double identity) : identity_(identity) {}
  PauliSum(double coefficient, PauliString string);
  /// Merges duplicates; identity strings are folded into the offset.
  explicit PauliSum(std::vector<PauliTerm> terms, double identity = 0.0);

  static PauliSum single(double coefficient, Qubit q, Pauli p);
  static PauliSum from_map(const std::map<PauliString, double>& coefficients);

  std::span<const PauliTerm> terms() const { return terms_; }
  double identity() const { return identity_; }
  bool empty() const { return terms_.empty() && identity_ == 0.0; }
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of the given string (the offset for the identity).
  double coefficient(const PauliString& s) const;
  Qubit extent() const;
  std::vector<Qubit> support() const;
  /// Sum of |coefficients| including the offset; an upper bound on the norm.
  double one_norm() const;

  /// Drops terms with |coefficient| <= tol (the offset included).
  PauliSum chopped(double tol) const;
  PauliSum without_identity() const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator-=(const PauliSum& other);
  PauliSum& operator*=(double scale);

  bool operator==(const PauliSum&) const = default;

 private:
  std::vector<PauliTerm> terms_;
  double identity_ = 0.0;
};

PauliSum operator+(PauliSum a, const PauliSum& b);
PauliSum operator-(PauliSum a, const PauliSum& b);
PauliSum operator-(PauliSum a);
PauliSum operator*(double scale, PauliSum a);
PauliSum operator*(PauliSum a, double scale);

/// Returns (-i)[a, b], which is Hermitian for Hermitian a and b.
/// If a = iK for an anti-Hermitian K, the result is exactly [K, b].
PauliSum commutator(const PauliSum& a, const PauliSum& b);
/// {a, b} = ab + ba.
PauliSum anticommutator(const PauliSum& a, const PauliSum& b);
/// Operator product ab. Throws std::domain_error when ab is not Hermitian
/// (relative imaginary residue above 1e-12).
PauliSum product(const PauliSum& a, const PauliSum& b);
/// a b a, Hermitian whenever a and b are.
PauliSum sandwich(const PauliSum& a, const PauliSum& b);

/// Max |coefficient difference| over the union of strings, offsets included.
double max_abs_difference(const PauliSum& a, const PauliSum& b);
bool approx_equal(const PauliSum& a, const PauliSum& b, double tol);

/// Relabels qubits. Throws std::invalid_argument if the map is not injective
/// or misses a support qubit.
PauliSum embed(const PauliSum& op, const std::map<Qubit, Qubit>& qubit_map);

struct LocalityProfile {
  std::size_t k = 0;  ///< max support size
  std::size_t m = 0;  ///< max number of terms touching one qubit
  double J = 0.0;     ///< max |coefficient|
  bool operator==(const LocalityProfile&) const = default;
};

/// Identity offset excluded.
LocalityProfile locality_profile(const PauliSum& h);

/// Largest singular value of the operator on its own support.
/// Throws std::length_error above `support_cap` qubits.
double operator_norm_local(const PauliSum& op, std::size_t support_cap = 12);

// Hamiltonian text format: one term per line, "<coefficient> <P><index> ...",
// an identity term as "<coefficient> I", '#' comments and blank lines ignored.

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

PauliSum parse_pauli_sum(const std::string& text);
/// Normalized order, identity first, coefficients with 17 significant digits.
std::string serialize(const PauliSum& h);
std::string format_double(double value);

}  // namespace gadgets
