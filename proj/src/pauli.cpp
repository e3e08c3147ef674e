#include "gadgets/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace gadgets {

char to_char(Pauli p) {
  static constexpr char kChars[] = {'I', 'X', 'Y', 'Z'};
  return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
  }
  throw std::invalid_argument(std::string("not a Pauli letter: ") + c);
}

std::complex<double> Phase::value() const {
  switch (quarter_turns & 3u) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// ---------------------------------------------------------------------------
// PauliString

PauliString::PauliString(std::vector<Letter> letters) {
  std::erase_if(letters, [](const Letter& l) { return l.second == Pauli::I; });
  std::sort(letters.begin(), letters.end(),
            [](const Letter& a, const Letter& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < letters.size(); ++i) {
    if (letters[i].first == letters[i - 1].first) {
      throw std::invalid_argument("two letters on qubit " +
                                  std::to_string(letters[i].first));
    }
  }
  letters_ = std::move(letters);
}

PauliString PauliString::single(Qubit q, Pauli p) {
  return PauliString({{q, p}});
}

std::vector<Qubit> PauliString::support() const {
  std::vector<Qubit> out;
  out.reserve(letters_.size());
  for (const auto& [q, p] : letters_) out.push_back(q);
  return out;
}

Pauli PauliString::at(Qubit q) const {
  auto it = std::lower_bound(
      letters_.begin(), letters_.end(), q,
      [](const Letter& l, Qubit value) { return l.first < value; });
  return (it != letters_.end() && it->first == q) ? it->second : Pauli::I;
}

bool PauliString::commutes_with(const PauliString& other) const {
  int anticommuting = 0;
  auto a = letters_.begin();
  auto b = other.letters_.begin();
  while (a != letters_.end() && b != other.letters_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      if (a->second != b->second) ++anticommuting;
      ++a;
      ++b;
    }
  }
  return anticommuting % 2 == 0;
}

bool PauliString::operator<(const PauliString& other) const {
  const std::size_t n = std::min(letters_.size(), other.letters_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (letters_[i].first != other.letters_[i].first) {
      return letters_[i].first < other.letters_[i].first;
    }
  }
  if (letters_.size() != other.letters_.size()) {
    return letters_.size() < other.letters_.size();
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (letters_[i].second != other.letters_[i].second) {
      return letters_[i].second < other.letters_[i].second;
    }
  }
  return false;
}

std::string PauliString::to_string() const {
  if (letters_.empty()) return "I";
  std::string out;
  for (const auto& [q, p] : letters_) {
    if (!out.empty()) out += ' ';
    out += to_char(p);
    out += std::to_string(q);
  }
  return out;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  std::vector<PauliString::Letter> out;
  out.reserve(a.weight() + b.weight());
  unsigned turns = 0;
  auto ia = a.letters().begin();
  auto ib = b.letters().begin();
  while (ia != a.letters().end() || ib != b.letters().end()) {
    if (ib == b.letters().end() ||
        (ia != a.letters().end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.letters().end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      const int pa = static_cast<int>(ia->second);
      const int pb = static_cast<int>(ib->second);
      if (pa != pb) {
        // XY = iZ, YZ = iX, ZX = iY and the reverse orders pick up -i.
        turns += ((pb - pa + 3) % 3 == 1) ? 1u : 3u;
        out.emplace_back(ia->first, static_cast<Pauli>(6 - pa - pb));
      }
      ++ia;
      ++ib;
    }
  }
  PauliProduct result;
  result.phase = Phase{static_cast<std::uint8_t>(turns & 3u)};
  result.product = PauliString(std::move(out));
  return result;
}

// ---------------------------------------------------------------------------
// PauliSum

namespace {

using RealMap = std::map<PauliString, double>;
using ComplexMap = std::map<PauliString, std::complex<double>>;

RealMap to_map(const PauliSum& s) {
  RealMap m;
  if (s.identity() != 0.0) m[PauliString()] = s.identity();
  for (const auto& t : s.terms()) m[t.string] += t.coefficient;
  return m;
}

ComplexMap multiply_maps(const ComplexMap& a, const RealMap& b) {
  ComplexMap out;
  for (const auto& [sa, ca] : a) {
    for (const auto& [sb, cb] : b) {
      auto [phase, prod] = multiply(sa, sb);
      out[prod] += ca * cb * phase.value();
    }
  }
  return out;
}

ComplexMap complexify(const RealMap& m) {
  ComplexMap out;
  for (const auto& [s, c] : m) out.emplace(s, c);
  return out;
}

PauliSum hermitian_or_throw(const ComplexMap& m) {
  double scale = 0.0;
  double imag = 0.0;
  for (const auto& [s, c] : m) {
    scale = std::max(scale, std::abs(c));
    imag = std::max(imag, std::abs(c.imag()));
  }
  if (imag > 1e-12 * std::max(1.0, scale)) {
    throw std::domain_error("operator product is not Hermitian");
  }
  RealMap real;
  for (const auto& [s, c] : m) real.emplace(s, c.real());
  return PauliSum::from_map(real);
}

}  // namespace

PauliSum::PauliSum(double coefficient, PauliString string) {
  if (string.is_identity()) {
    identity_ = coefficient;
  } else if (coefficient != 0.0) {
    terms_.push_back({coefficient, std::move(string)});
  }
}

PauliSum::PauliSum(std::vector<PauliTerm> terms, double identity) {
  RealMap m;
  if (identity != 0.0) m[PauliString()] = identity;
  for (auto& t : terms) m[t.string] += t.coefficient;
  *this = from_map(m);
}

PauliSum PauliSum::single(double coefficient, Qubit q, Pauli p) {
  return PauliSum(coefficient, PauliString::single(q, p));
}

PauliSum PauliSum::from_map(const std::map<PauliString, double>& coefficients) {
  PauliSum out;
  for (const auto& [s, c] : coefficients) {
    if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
    if (s.is_identity()) {
      out.identity_ += c;
    } else if (c != 0.0) {
      out.terms_.push_back({c, s});
    }
  }
  return out;
}

double PauliSum::coefficient(const PauliString& s) const {
  if (s.is_identity()) return identity_;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), s,
      [](const PauliTerm& t, const PauliString& v) { return t.string < v; });
  return (it != terms_.end() && it->string == s) ? it->coefficient : 0.0;
}

Qubit PauliSum::extent() const {
  Qubit e = 0;
  for (const auto& t : terms_) e = std::max(e, t.string.extent());
  return e;
}

std::vector<Qubit> PauliSum::support() const {
  std::set<Qubit> qs;
  for (const auto& t : terms_) {
    for (const auto& [q, p] : t.string.letters()) qs.insert(q);
  }
  return {qs.begin(), qs.end()};
}

double PauliSum::one_norm() const {
  double total = std::abs(identity_);
  for (const auto& t : terms_) total += std::abs(t.coefficient);
  return total;
}

PauliSum PauliSum::chopped(double tol) const {
  PauliSum out;
  out.identity_ = std::abs(identity_) > tol ? identity_ : 0.0;
  for (const auto& t : terms_) {
    if (std::abs(t.coefficient) > tol) out.terms_.push_back(t);
  }
  return out;
}

PauliSum PauliSum::without_identity() const {
  PauliSum out = *this;
  out.identity_ = 0.0;
  return out;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  RealMap m = to_map(*this);
  for (const auto& t : other.terms_) m[t.string] += t.coefficient;
  *this = from_map(m);
  identity_ += other.identity_;
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& other) {
  return *this += -other;
}

PauliSum& PauliSum::operator*=(double scale) {
  if (scale == 0.0) {
    *this = PauliSum();
    return *this;
  }
  identity_ *= scale;
  for (auto& t : terms_) t.coefficient *= scale;
  return *this;
}

PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }
PauliSum operator-(PauliSum a, const PauliSum& b) { return a -= b; }
PauliSum operator-(PauliSum a) { return a *= -1.0; }
PauliSum operator*(double scale, PauliSum a) { return a *= scale; }
PauliSum operator*(PauliSum a, double scale) { return a *= scale; }

PauliSum commutator(const PauliSum& a, const PauliSum& b) {
  RealMap out;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      if (ta.string.commutes_with(tb.string)) continue;
      // ab - ba = 2ab for anticommuting strings; the phase is +-i, so
      // (-i)(2 * phase) is real.
      auto [phase, prod] = multiply(ta.string, tb.string);
      const double sign = phase.quarter_turns == 1 ? 1.0 : -1.0;
      out[prod] += 2.0 * sign * ta.coefficient * tb.coefficient;
    }
  }
  return PauliSum::from_map(out);
}

PauliSum anticommutator(const PauliSum& a, const PauliSum& b) {
  RealMap out;
  const RealMap ma = to_map(a);
  const RealMap mb = to_map(b);
  for (const auto& [sa, ca] : ma) {
    for (const auto& [sb, cb] : mb) {
      if (!sa.commutes_with(sb)) continue;
      auto [phase, prod] = multiply(sa, sb);
      // Commuting strings multiply with a real phase.
      const double sign = phase.quarter_turns == 0 ? 1.0 : -1.0;
      out[prod] += 2.0 * sign * ca * cb;
    }
  }
  return PauliSum::from_map(out);
}

PauliSum product(const PauliSum& a, const PauliSum& b) {
  return hermitian_or_throw(multiply_maps(complexify(to_map(a)), to_map(b)));
}

PauliSum sandwich(const PauliSum& a, const PauliSum& b) {
  const RealMap ma = to_map(a);
  return hermitian_or_throw(
      multiply_maps(multiply_maps(complexify(ma), to_map(b)), ma));
}

double max_abs_difference(const PauliSum& a, const PauliSum& b) {
  double diff = std::abs(a.identity() - b.identity());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() ||
        (ia != a.terms().end() && ia->string < ib->string)) {
      diff = std::max(diff, std::abs(ia->coefficient));
      ++ia;
    } else if (ia == a.terms().end() || ib->string < ia->string) {
      diff = std::max(diff, std::abs(ib->coefficient));
      ++ib;
    } else {
      diff = std::max(diff, std::abs(ia->coefficient - ib->coefficient));
      ++ia;
      ++ib;
    }
  }
  return diff;
}

bool approx_equal(const PauliSum& a, const PauliSum& b, double tol) {
  return max_abs_difference(a, b) <= tol;
}

PauliSum embed(const PauliSum& op, const std::map<Qubit, Qubit>& qubit_map) {
  std::set<Qubit> images;
  for (const auto& [from, to] : qubit_map) {
    if (!images.insert(to).second) {
      throw std::invalid_argument("qubit map is not injective");
    }
  }
  std::vector<PauliTerm> terms;
  terms.reserve(op.size());
  for (const auto& t : op.terms()) {
    std::vector<PauliString::Letter> letters;
    for (const auto& [q, p] : t.string.letters()) {
      auto it = qubit_map.find(q);
      if (it == qubit_map.end()) {
        throw std::invalid_argument("qubit map undefined on qubit " +
                                    std::to_string(q));
      }
      letters.emplace_back(it->second, p);
    }
    terms.push_back({t.coefficient, PauliString(std::move(letters))});
  }
  return PauliSum(std::move(terms), op.identity());
}

LocalityProfile locality_profile(const PauliSum& h) {
  LocalityProfile profile;
  std::map<Qubit, std::size_t> touching;
  for (const auto& t : h.terms()) {
    profile.k = std::max(profile.k, t.string.weight());
    profile.J = std::max(profile.J, std::abs(t.coefficient));
    for (const auto& [q, p] : t.string.letters()) {
      profile.m = std::max(profile.m, ++touching[q]);
    }
  }
  return profile;
}

}  // namespace gadgets
