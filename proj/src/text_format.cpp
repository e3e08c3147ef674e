#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gadgets/pauli.hpp"

namespace gadgets {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

namespace {

double parse_coefficient(const std::string& token, std::size_t line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ParseError(line, "bad coefficient '" + token + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "non-finite coefficient '" + token + "'");
  }
  return value;
}

PauliString::Letter parse_letter(const std::string& token, std::size_t line) {
  if (token.size() < 2) throw ParseError(line, "bad letter '" + token + "'");
  Pauli p;
  try {
    p = pauli_from_char(token[0]);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, "bad letter '" + token + "'");
  }
  if (p == Pauli::I) throw ParseError(line, "identity letter with index");
  for (std::size_t i = 1; i < token.size(); ++i) {
    if (token[i] < '0' || token[i] > '9') {
      throw ParseError(line, "bad qubit index in '" + token + "'");
    }
  }
  const unsigned long index = std::strtoul(token.c_str() + 1, nullptr, 10);
  if (index > 0xFFFFFFFEul) throw ParseError(line, "qubit index too large");
  return {static_cast<Qubit>(index), p};
}

}  // namespace

PauliSum parse_pauli_sum(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::vector<PauliTerm> terms;
  double identity = 0.0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    std::string token;
    if (!(fields >> token)) continue;
    const double coefficient = parse_coefficient(token, line_no);
    std::vector<std::string> rest;
    while (fields >> token) rest.push_back(token);
    if (rest.empty()) throw ParseError(line_no, "term without letters");
    if (rest.size() == 1 && rest[0] == "I") {
      identity += coefficient;
      continue;
    }
    std::vector<PauliString::Letter> letters;
    for (const auto& t : rest) letters.push_back(parse_letter(t, line_no));
    try {
      terms.push_back({coefficient, PauliString(std::move(letters))});
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return PauliSum(std::move(terms), identity);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string serialize(const PauliSum& h) {
  std::string out;
  if (h.identity() != 0.0) out += format_double(h.identity()) + " I\n";
  for (const auto& t : h.terms()) {
    out += format_double(t.coefficient) + ' ' + t.string.to_string() + '\n';
  }
  return out;
}

}  // namespace gadgets
